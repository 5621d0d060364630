#include "tapred/alphabet.hpp"

#include "tapred/errors.hpp"

#include <algorithm>

namespace tapred {

EventAlphabet::EventAlphabet(const std::vector<std::string>& observable,
                             const std::vector<std::string>& unobservable, const std::string& fault) {
  for (const auto& n : observable) add(n, true);
  for (const auto& n : unobservable) add(n, false);
  auto f = find(fault);
  if (!f) throw InputError("fault event '" + fault + "' is neither observable nor unobservable");
  fault_ = *f;
}

EventId EventAlphabet::add(const std::string& name, bool observable) {
  if (name == kEpsilonName) throw InputError("event name 'eps' is reserved for the silent label");
  if (name.empty()) throw InputError("empty event name");
  if (find(name)) throw InputError("event '" + name + "' declared twice");
  names_.push_back(name);
  observable_.push_back(observable);
  return static_cast<EventId>(names_.size() - 1);
}

EventId EventAlphabet::add_unobservable(const std::string& name) { return add(name, false); }

const std::string& EventAlphabet::name(EventId e) const {
  static const std::string eps(kEpsilonName);
  if (e == kEpsilon) return eps;
  return names_.at(static_cast<std::size_t>(e));
}

std::optional<EventId> EventAlphabet::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<EventId>(it - names_.begin());
}

EventId EventAlphabet::label(std::string_view name) const {
  if (name == kEpsilonName) return kEpsilon;
  if (auto e = find(name)) return *e;
  throw InputError("unknown event '" + std::string(name) + "'");
}

std::vector<EventId> EventAlphabet::observable_events() const {
  std::vector<EventId> out;
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (observable_[i]) out.push_back(static_cast<EventId>(i));
  return out;
}

std::vector<EventId> EventAlphabet::unobservable_events() const {
  std::vector<EventId> out;
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (!observable_[i]) out.push_back(static_cast<EventId>(i));
  return out;
}

}  // namespace tapred
