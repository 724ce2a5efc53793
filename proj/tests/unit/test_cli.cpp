#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "nrgate");
  std::ostringstream out, err;
  const int code = nrgate::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct Scratch {
  fs::path dir;
  Scratch() : dir(fs::temp_directory_path() / "nrgate_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

const char* kTinyConfig = R"({"n_per_side": 20, "d": 0.4, "alpha1": 3.9, "alpha2": 3.1, "zeta": 0.013,
  "sigma": -1.4, "a_p": 0.4, "theta": 1.5707963267948966, "p": 4, "t_total": 400.0, "dt": 0.02})";

const char* kTinySpec = R"({"n_per_side": 12, "t_total": 30.0})";

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == nrgate::cli::kUsageError);
  CHECK(run({"frobnicate"}).code == nrgate::cli::kUsageError);
  CHECK(run({"--version"}).code == 0);
  CHECK(run({"presets"}).code == 0);
  CHECK(run({"presets"}).out.find("system3") != std::string::npos);

  const Result r = run({"simulate", "--preset", "system7", "--out", "unused"});
  CHECK(r.code == nrgate::cli::kUsageError);
  CHECK(r.err.find("system1, system2, system3, system4, kernel_design") != std::string::npos);
}

TEST_CASE("validate") {
  Scratch s;
  CHECK(run({"validate", "--preset", "system3"}).code == 0);
  json bad = json::parse(kTinyConfig);
  bad["theta"] = 0.0;
  spit(s / "bad.json", bad.dump());
  const Result r = run({"validate", "--config", s / "bad.json"});
  CHECK(r.code == nrgate::cli::kUsageError);
  CHECK(r.out.find("zero group velocity") != std::string::npos);
}

TEST_CASE("simulate writes outputs and refuses to overwrite") {
  Scratch s;
  spit(s / "cfg.json", kTinyConfig);
  const std::string out = s / "sim";
  Result r = run({"simulate", "--config", s / "cfg.json", "--both-directions", "--out", out});
  REQUIRE(r.code == 0);
  for (const char* f : {"manifest.json", "summary.json", "outcome_lr.csv", "outcome_rl.csv"})
    CHECK(fs::exists(fs::path(out) / f));
  CHECK(r.out.find("delta = ") != std::string::npos);

  const json summary = json::parse(slurp(fs::path(out) / "summary.json"));
  CHECK(summary.contains("branch"));
  const json manifest = json::parse(slurp(fs::path(out) / "manifest.json"));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["config"]["n_per_side"] == 20);
  CHECK(slurp(fs::path(out) / "outcome_lr.csv").rfind("# manifest=manifest.json", 0) == 0);

  r = run({"simulate", "--config", s / "cfg.json", "--both-directions", "--out", out});
  CHECK(r.code == nrgate::cli::kUsageError);
  CHECK(r.err.find("--force") != std::string::npos);
  r = run({"simulate", "--config", s / "cfg.json", "--both-directions", "--out", out, "--force"});
  CHECK(r.code == 0);
}

TEST_CASE("simulate reports divergence") {
  Scratch s;
  json cfg = json::parse(kTinyConfig);
  cfg["a_p"] = 1e8;
  spit(s / "cfg.json", cfg.dump());
  const Result r = run({"simulate", "--config", s / "cfg.json", "--out", s / "sim"});
  CHECK(r.code == nrgate::cli::kRuntimeFailure);
  CHECK(r.err.find("diverged") != std::string::npos);
}

TEST_CASE("sweep output does not depend on parallelism") {
  Scratch s;
  spit(s / "spec.json", kTinySpec);
  const Result a = run({"sweep", "--spec", s / "spec.json", "--n", "10", "--seed", "7", "-j", "1",
                        "--out", s / "a.csv", "--quiet"});
  const Result b = run({"sweep", "--spec", s / "spec.json", "--n", "10", "--seed", "7", "-j", "8",
                        "--out", s / "b.csv", "--quiet"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  std::string ta = slurp(s / "a.csv"), tb = slurp(s / "b.csv");
  // The second line names each run's own manifest.
  ta.replace(ta.find("a.csv.manifest"), 1, "b");
  CHECK(ta == tb);
  const json meta = json::parse(slurp(s / "a.csv.meta.json"));
  CHECK(meta["seed"] == 7);
  CHECK(meta["records"] == 10);
  CHECK(fs::exists(s / "a.csv.manifest.json"));
}

TEST_CASE("sweep rejects bad specs") {
  Scratch s;
  spit(s / "spec.json", R"({"n_per_side": 12, "warp": 9})");
  CHECK(run({"sweep", "--spec", s / "spec.json", "--out", s / "x.csv"}).code == nrgate::cli::kUsageError);
  spit(s / "spec.json", R"({"theta": [0.0, 1.0]})");
  CHECK(run({"sweep", "--spec", s / "spec.json", "--out", s / "x.csv"}).code == nrgate::cli::kUsageError);
  CHECK(run({"sweep", "--profile", "huge", "--out", s / "x.csv"}).code == nrgate::cli::kUsageError);
}

TEST_CASE("damping") {
  Scratch s;
  spit(s / "cfg.json", kTinyConfig);
  const Result r = run({"damping", "--config", s / "cfg.json", "--mode", "cold,continue_up",
                        "--zeta-min", "0", "--zeta-max", "0.004", "--zeta-step", "0.002", "--out",
                        s / "damp"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(fs::path(s / "damp") / "damping_cold.csv"));
  CHECK(fs::exists(fs::path(s / "damp") / "damping_continue_up.csv"));
  CHECK(r.out.find("cold vs continue_up") != std::string::npos);
  CHECK(run({"damping", "--config", s / "cfg.json", "--mode", "sideways", "--out", s / "d2"}).code ==
        nrgate::cli::kUsageError);
}

TEST_CASE("train, eval and kernel") {
  Scratch s;
  spit(s / "spec.json", kTinySpec);
  REQUIRE(run({"sweep", "--spec", s / "spec.json", "--n", "240", "--out", s / "data.csv", "--quiet"})
              .code == 0);
  Result r = run({"train", s / "data.csv", "--out", s / "model.json", "--max-epochs", "5"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(s / "model.json.test.csv"));
  CHECK(fs::exists(s / "model.json.manifest.json"));

  r = run({"eval", s / "model.json", s / "model.json.test.csv", "--out", s / "report"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("TP = ") != std::string::npos);
  CHECK(fs::exists(s / "report.csv"));
  CHECK(fs::exists(s / "report.txt"));

  r = run({"kernel", s / "model.json", "--d", "0.2", "--ap-steps", "2", "--theta-steps", "2",
           "--alpha-points", "11", "--out", s / "kernel.csv"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(s / "kernel.csv");
  CHECK(csv.find("a_p,theta,theta_over_pi,kernel") != std::string::npos);

  CHECK(run({"train", s / "missing.csv", "--out", s / "m2.json"}).code == nrgate::cli::kUsageError);
  CHECK(run({"train", s / "data.csv", "--out", s / "m3.json", "--optimizer", "sgd"}).code ==
        nrgate::cli::kUsageError);
}
