#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "nrgate/io.hpp"

using namespace nrgate;
using nlohmann::json;

TEST_CASE("config json round trip") {
  for (const auto& name : presets::names()) {
    const WaveguideConfig c = presets::by_name(name);
    CHECK(config_from_json(to_json(c)) == c);
    CHECK(config_from_json(json::parse(to_json(c).dump())) == c);
  }
}

TEST_CASE("config json is strict") {
  json j = to_json(presets::system1());
  j.erase("zeta");
  CHECK_THROWS_AS(config_from_json(j), FormatError);
  j = to_json(presets::system1());
  j["omega_hat"] = 1.2;
  CHECK_THROWS_AS(config_from_json(j), FormatError);
  j = to_json(presets::system1());
  j["d"] = "half";
  CHECK_THROWS_AS(config_from_json(j), FormatError);
}

TEST_CASE("sweep spec json") {
  const SweepSpec s = SweepSpec::reduced();
  CHECK(sweep_spec_from_json(to_json(s)) == s);
  const SweepSpec partial = sweep_spec_from_json(json{{"n_samples", 10}, {"alpha1", {1.0, 2.0}}});
  CHECK(partial.n_samples == 10);
  CHECK(partial.alpha1 == Interval{1.0, 2.0});
  CHECK(partial.d == SweepSpec{}.d);
  CHECK_THROWS_AS(sweep_spec_from_json(json{{"bogus", 1}}), FormatError);
  CHECK_THROWS_AS(sweep_spec_from_json(json{{"alpha1", 3.0}}), FormatError);
}

TEST_CASE("outcome csv layout") {
  WaveguideConfig c = presets::system1();
  c.n_per_side = 10;
  c.t_total = 1.0;
  const SimOutcome o = integrate(c, Direction::RL);
  std::ostringstream os;
  write_outcome_csv(os, o, c, Direction::RL);
  std::istringstream in(os.str());
  std::string first, header;
  std::getline(in, first);
  std::getline(in, header);
  CHECK(first.rfind("# ", 0) == 0);
  CHECK(first.find("direction=rl") != std::string::npos);
  CHECK(header == "tau,x0,z0,z1,z00,y0,e_input,e_down");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == o.tau.size());
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "nrgate_io_test";
  std::filesystem::create_directories(dir);
  write_text_file(dir / "c.json", to_json(presets::system2()).dump());
  CHECK(config_from_json(read_json_file(dir / "c.json")) == presets::system2());
  write_text_file(dir / "bad.json", "{ nope");
  CHECK_THROWS_AS(read_json_file(dir / "bad.json"), FormatError);
  CHECK_THROWS(read_json_file(dir / "missing.json"));
  std::filesystem::remove_all(dir);
}
