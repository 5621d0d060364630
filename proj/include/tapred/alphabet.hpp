#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tapred {

using EventId = int;

/// The silent label. Never a member of any alphabet.
inline constexpr EventId kEpsilon = -1;
inline constexpr std::string_view kEpsilonName = "eps";

/// Events partitioned into observable and unobservable, with one
/// distinguished fault event drawn from either part.
class EventAlphabet {
 public:
  EventAlphabet() = default;
  EventAlphabet(const std::vector<std::string>& observable,
                const std::vector<std::string>& unobservable, const std::string& fault);

  std::size_t size() const { return names_.size(); }
  const std::string& name(EventId e) const;
  std::optional<EventId> find(std::string_view name) const;
  /// Like find() but throws InputError for unknown names. "eps" maps to kEpsilon.
  EventId label(std::string_view name) const;

  bool observable(EventId e) const { return e != kEpsilon && observable_[static_cast<std::size_t>(e)]; }
  EventId fault() const { return fault_; }
  bool is_fault(EventId e) const { return e == fault_; }

  std::vector<EventId> observable_events() const;
  std::vector<EventId> unobservable_events() const;

  /// Adds a fresh unobservable event; the name must not clash.
  EventId add_unobservable(const std::string& name);

  friend bool operator==(const EventAlphabet&, const EventAlphabet&) = default;

 private:
  EventId add(const std::string& name, bool observable);

  std::vector<std::string> names_;
  std::vector<bool> observable_;
  EventId fault_ = kEpsilon;
};

}  // namespace tapred
