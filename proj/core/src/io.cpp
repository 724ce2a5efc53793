#include "nrgate/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace nrgate {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) throw FormatError(std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw FormatError(std::string("unknown ") + what + " key '" + key + "'");
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError("field '" + key + "': " + e.what());
  }
}

std::size_t get_count(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw FormatError("field '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

Interval get_interval(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw FormatError("field '" + key + "' must be a [lo, hi] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

const std::set<std::string> kConfigKeys{"n_per_side", "d",     "alpha1",  "alpha2",
                                        "zeta",       "sigma", "a_p",     "theta",
                                        "p",          "t_total", "dt"};

const std::set<std::string> kSweepKeys{"alpha1", "alpha2", "d",     "a_p",        "theta",
                                       "n_samples", "seed", "sigma", "zeta",      "p",
                                       "n_per_side", "t_total", "dt"};

}  // namespace

json to_json(const WaveguideConfig& c) {
  return json{{"n_per_side", c.n_per_side}, {"d", c.d},         {"alpha1", c.alpha1},
              {"alpha2", c.alpha2},         {"zeta", c.zeta},   {"sigma", c.sigma},
              {"a_p", c.a_p},               {"theta", c.theta}, {"p", c.p},
              {"t_total", c.t_total},       {"dt", c.dt}};
}

WaveguideConfig config_from_json(const json& j) {
  reject_unknown(j, kConfigKeys, "config");
  for (const auto& key : kConfigKeys)
    if (!j.contains(key)) throw FormatError("config is missing field '" + key + "'");
  WaveguideConfig c;
  c.n_per_side = get_count(j, "n_per_side");
  c.d = get_as<double>(j, "d");
  c.alpha1 = get_as<double>(j, "alpha1");
  c.alpha2 = get_as<double>(j, "alpha2");
  c.zeta = get_as<double>(j, "zeta");
  c.sigma = get_as<double>(j, "sigma");
  c.a_p = get_as<double>(j, "a_p");
  c.theta = get_as<double>(j, "theta");
  c.p = get_count(j, "p");
  c.t_total = get_as<double>(j, "t_total");
  c.dt = get_as<double>(j, "dt");
  return c;
}

json to_json(const SweepSpec& s) {
  auto iv = [](const Interval& i) { return json::array({i.lo, i.hi}); };
  return json{{"alpha1", iv(s.alpha1)},   {"alpha2", iv(s.alpha2)}, {"d", iv(s.d)},
              {"a_p", iv(s.a_p)},         {"theta", iv(s.theta)},   {"n_samples", s.n_samples},
              {"seed", s.seed},           {"sigma", s.sigma},       {"zeta", s.zeta},
              {"p", s.p},                 {"n_per_side", s.n_per_side},
              {"t_total", s.t_total},     {"dt", s.dt}};
}

SweepSpec sweep_spec_from_json(const json& j, SweepSpec s) {
  reject_unknown(j, kSweepKeys, "sweep spec");
  if (j.contains("alpha1")) s.alpha1 = get_interval(j, "alpha1");
  if (j.contains("alpha2")) s.alpha2 = get_interval(j, "alpha2");
  if (j.contains("d")) s.d = get_interval(j, "d");
  if (j.contains("a_p")) s.a_p = get_interval(j, "a_p");
  if (j.contains("theta")) s.theta = get_interval(j, "theta");
  if (j.contains("n_samples")) s.n_samples = get_count(j, "n_samples");
  if (j.contains("seed")) s.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("sigma")) s.sigma = get_as<double>(j, "sigma");
  if (j.contains("zeta")) s.zeta = get_as<double>(j, "zeta");
  if (j.contains("p")) s.p = get_count(j, "p");
  if (j.contains("n_per_side")) s.n_per_side = get_count(j, "n_per_side");
  if (j.contains("t_total")) s.t_total = get_as<double>(j, "t_total");
  if (j.contains("dt")) s.dt = get_as<double>(j, "dt");
  return s;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
}  // namespace

void write_outcome_csv(std::ostream& os, const SimOutcome& out, const WaveguideConfig& cfg,
                       Direction dir) {
  os << "# direction=" << to_string(dir) << " config=" << to_json(cfg).dump() << '\n';
  os << "tau,x0,z0,z1,z00,y0,e_input,e_down\n";
  for (std::size_t i = 0; i < out.tau.size(); ++i) {
    os << num(out.tau[i]) << ',' << num(out.probe(Probe::X0)[i]) << ','
       << num(out.probe(Probe::Z0)[i]) << ',' << num(out.probe(Probe::Z1)[i]) << ','
       << num(out.probe(Probe::Z00)[i]) << ',' << num(out.probe(Probe::Y0)[i]) << ','
       << num(out.e_input_series[i]) << ',' << num(out.e_down_series[i]) << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "frequency,amplitude\n";
  for (std::size_t k = 0; k < s.frequency.size(); ++k)
    os << num(s.frequency[k]) << ',' << num(s.amplitude[k]) << '\n';
}

}  // namespace nrgate
