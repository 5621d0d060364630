#include "support.hpp"

#include "tapred/errors.hpp"
#include "tapred/model_io.hpp"
#include "tapred/report.hpp"
#include "tapred/ta_predict.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tapred;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("tapred_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run cli(const std::string& args) {
  fs::path out = scratch() / "stdout", err = scratch() / "stderr";
  std::string cmd = std::string(TAPRED_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string model(const std::string& name) { return test::model_path(name); }

std::string error_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("model parse errors") {
  auto e = error_of("{\n  \"type\": \"ta\",\n  \"locations\": [\"l0\" \"l1\"]\n}");
  CHECK(e.find("line 3") != std::string::npos);

  e = error_of(R"({"type": "ta", "locations": ["l0"], "initial": "l0", "clocks": ["x"],
    "events": {"observable": ["a"], "unobservable": [], "fault": "a"},
    "edges": [{"src": "l0", "event": "a", "dst": "l0", "guard": "x >= 2 && x <"}]})");
  CHECK(e.find("column 14") != std::string::npos);

  e = error_of(R"({"type": "fa", "locations": ["l0"], "initial": "l0", "colour": "red",
    "events": {"observable": ["a"], "unobservable": [], "fault": "a"}, "edges": []})");
  CHECK(e.find("unknown field 'colour'") != std::string::npos);

  e = error_of(R"({"type": "fa", "locations": ["l0"], "initial": "l0",
    "events": {"observable": ["eps"], "unobservable": ["f"], "fault": "f"}, "edges": []})");
  CHECK(e.find("eps") != std::string::npos);

  e = error_of(R"({"type": "ta", "locations": ["l0"], "initial": "l0", "clocks": ["x"],
    "events": {"observable": ["a"], "unobservable": ["f"], "fault": "f"},
    "edges": [{"src": "l0", "event": "a", "dst": "l0", "resets": ["y"]}]})");
  CHECK(e.find("'y'") != std::string::npos);

  CHECK_FALSE(error_of(R"({"type": "pda"})").empty());
  CHECK_THROWS_AS(load_model(model("missing.json")), InputError);
}

TEST_CASE("models survive a JSON round trip") {
  for (const char* name : {"G.json", "B.json"}) {
    auto a = load_model(model(name)).ta();
    auto back = parse_model(model_to_json(a).dump()).ta();
    CHECK(to_dot(back) == to_dot(a));
    CHECK(model_to_json(back) == model_to_json(a));
  }
  auto g = test::untimed_G();
  auto back = parse_model(model_to_json(g).dump()).fa();
  CHECK(to_dot(back) == to_dot(g));
  // Normalized models round trip as well.
  auto n = normalize(test::model_B()).automaton;
  CHECK(to_dot(parse_model(model_to_json(n).dump()).ta()) == to_dot(n));
}

TEST_CASE("trace files") {
  auto b = test::model_B();
  auto w = parse_trace(b.alphabet(), "{\"delay\": \"1/2\", \"event\": \"a\"}\n{\"delay\": 1.5}\n");
  CHECK(w.delays == std::vector<Rational>{Rational(1, 2), Rational(3, 2)});
  CHECK(w.events.size() == 1);
  CHECK_THROWS_AS(parse_trace(b.alphabet(), "{\"delay\": 1, \"event\": \"f\"}\n"), InputError);
  CHECK_THROWS_AS(parse_trace(b.alphabet(), "{\"delay\": -1}\n"), InputError);
}

TEST_CASE("exit codes and headline answers") {
  CHECK(cli("check --model " + model("G_untimed.json") + " --bound 0").code == 0);
  auto r = cli("check --model " + model("G_untimed.json") + " --bound 1");
  CHECK(r.code == 1);
  CHECK(r.out.find("(l1,l4)") != std::string::npos);
  CHECK(cli("check --model " + model("G.json") + " --bound 3").code == 0);
  CHECK(cli("check --model " + model("G.json") + " --bound 4").code == 1);
  CHECK(cli("check --model " + model("B.json") + " --bound 4").code == 0);
  CHECK(cli("check --model " + model("B.json") + " --bound 5").code == 1);
  CHECK(cli("check --model " + model("B.json") + " --bound 6 --sample 3/5").code == 0);
  CHECK(cli("check --model " + model("B.json") + " --bound 7 --sample 3/5").code == 1);

  CHECK(cli("max-bound --model " + model("G_untimed.json")).out.rfind("0\n", 0) == 0);
  CHECK(cli("max-bound --model " + model("G.json")).out.rfind("3\n", 0) == 0);
  CHECK(cli("max-bound --model " + model("B.json")).out.rfind("4\n", 0) == 0);
  auto j = nlohmann::json::parse(cli("max-bound --format json --model " + model("B.json") + " --sample 3/5").out);
  CHECK(j["max_bound"] == 6);
  CHECK(j["anticipation"] == "18/5");
  CHECK(j["schema"] == kSchemaVersion);

  CHECK(cli("check --model " + model("missing.json") + " --bound 0").code == 2);
  CHECK(cli("check --model " + model("B.json") + " --bound -1").code == 2);
  CHECK(cli("check --model " + model("B.json") + " --bound 1 --sample 0").code == 2);
  CHECK(cli("frobnicate").code == 2);

  fs::path bad = scratch() / "bad.json";
  spit(bad, "{\"type\": \"ta\", \"locations\": [\"l0\"] ");
  r = cli("check --model " + bad.string() + " --bound 0");
  CHECK(r.code == 2);
  CHECK(r.err.find("line 1") != std::string::npos);

  // A location with no clock upper bound is refused unless asked for.
  fs::path open = scratch() / "open.json";
  spit(open, R"({"type": "ta", "locations": ["l0", "l1"], "initial": "l0", "clocks": ["x"],
    "events": {"observable": ["a"], "unobservable": ["f"], "fault": "f"},
    "edges": [{"src": "l0", "event": "a", "dst": "l0"}, {"src": "l0", "event": "f", "dst": "l1", "guard": "x>=1"}]})");
  CHECK(cli("check --model " + open.string() + " --bound 0").code == 2);
  CHECK(cli("check --model " + open.string() + " --bound 0 --unbounded-ok").code != 2);
  CHECK(cli("validate --model " + open.string()).code == 0);
}

TEST_CASE("oracle cross-check from the command line") {
  auto r = cli("check --model " + model("G_untimed.json") + " --bound 1 --oracle --seed 5");
  CHECK(r.code == 1);
  CHECK(r.out.find("oracle") != std::string::npos);
  CHECK(cli("check --model " + model("G_untimed.json") + " --bound 0 --oracle").code == 0);
}

TEST_CASE("witness files round trip through validate") {
  fs::path w = scratch() / "w.json";
  CHECK(cli("check --model " + model("B.json") + " --bound 7 --sample 3/5 --witness " + w.string()).code == 1);
  auto r = cli("validate --model " + model("B.json") + " --witness " + w.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("witness valid") != std::string::npos);

  auto doc = nlohmann::json::parse(slurp(w));
  doc["bound"] = 1;
  fs::path tampered = scratch() / "tampered.json";
  spit(tampered, doc.dump());
  r = cli("validate --model " + model("B.json") + " --witness " + tampered.string());
  CHECK(r.out.find("witness invalid") != std::string::npos);
  CHECK(r.code != 0);

  fs::path fw = scratch() / "fw.json";
  CHECK(cli("check --model " + model("G_untimed.json") + " --bound 1 --witness " + fw.string()).code == 1);
  CHECK(cli("validate --model " + model("G_untimed.json") + " --witness " + fw.string()).out.find("witness valid") !=
        std::string::npos);
}

TEST_CASE("validate lints the bundled models") {
  for (const char* name : {"G_untimed.json", "G.json", "B.json"}) {
    auto r = cli(std::string("validate --model ") + model(name));
    CHECK(r.code == 0);
    CHECK(r.out.find("model ok") != std::string::npos);
  }
}

TEST_CASE("output is deterministic") {
  std::string args = "check --format json --model " + model("B.json") + " --bound 5";
  auto a = cli(args), b = cli(args);
  CHECK(a.code == 1);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["predictable"] == false);
  CHECK(j.contains("witness"));
}

TEST_CASE("export-twin matches the in-memory plant") {
  fs::path dot = scratch() / "twin.dot";
  auto r = cli("export-twin --model " + model("G.json") + " --bound 4 --dot " + dot.string());
  CHECK(r.code == 0);
  std::string text = slurp(dot);
  auto n = normalize(test::timed_G());
  auto t = build_twin_plant(n, 4, {});
  CHECK(count(text, " -> ") == static_cast<int>(t.product.automaton.edges().size()));
  CHECK(count(text, "[label=") - count(text, " -> ") == t.product.automaton.num_locations());
  CHECK(text.find("$NZ") != std::string::npos);
}

TEST_CASE("predict from a trace file") {
  fs::path trace = scratch() / "quiet.jsonl";
  spit(trace, "{\"delay\": 3}\n");
  auto r = cli("predict --model " + model("B.json") + " --bound 4 --trace " + trace.string());
  CHECK(r.code == 0);
  CHECK(r.out == "1 0\n2 1\n3 1\n");
  r = cli("predict --format json --model " + model("B.json") + " --bound 6 --sample 3/5 --trace " + trace.string());
  std::istringstream lines(r.out);
  std::string line, first_alarm;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    if (j["verdict"] == 1 && first_alarm.empty()) first_alarm = j["time"];
  }
  CHECK(first_alarm == "12/5");

  fs::path bad = scratch() / "bad.jsonl";
  spit(bad, "{\"delay\": \"1/2\", \"event\": \"a\"}\n");
  r = cli("predict --model " + model("B.json") + " --bound 4 --trace " + bad.string());
  CHECK(r.out.find("error") != std::string::npos);
}

TEST_CASE("reduce writes a model whose verdict encodes reachability") {
  fs::path out = scratch() / "reduced.json";
  CHECK(cli("reduce --model " + model("G.json") + " --target l3 --output " + out.string()).code == 0);
  auto reduced = load_model(out.string()).ta();
  CHECK(reduced.find_location("END'"));
  CHECK(cli("check --model " + out.string() + " --bound 0").code == 1);
  CHECK(cli("reduce --model " + model("G.json") + " --target nowhere").code == 2);
}
