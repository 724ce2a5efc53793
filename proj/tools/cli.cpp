#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "nrgate/analysis.hpp"
#include "nrgate/io.hpp"
#include "nrgate/kernel.hpp"
#include "nrgate/model.hpp"
#include "nrgate/parallel.hpp"
#include "nrgate/simulator.hpp"
#include "nrgate/surrogate.hpp"
#include "nrgate/sweep.hpp"
#include "nrgate/version.hpp"

namespace nrgate::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Raised for bad invocations that should exit with kUsageError.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// Collects output paths so a command can refuse to clobber them up front.
class Outputs {
public:
  explicit Outputs(bool force) : force_(force) {}

  fs::path add(fs::path p) {
    if (!force_ && fs::exists(p))
      throw UsageError("refusing to overwrite " + p.string() + " (pass --force)");
    paths_.push_back(p);
    return p;
  }

  const std::vector<fs::path>& paths() const { return paths_; }

private:
  bool force_;
  std::vector<fs::path> paths_;
};

struct Manifest {
  std::string command;
  json config;
  json seeds = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const fs::path& path, const Outputs& outs) const {
    json files = json::array();
    for (const auto& p : outs.paths())
      if (p != path) files.push_back(p.filename().string());
    const json doc{{"command", command},
                   {"config", config},
                   {"seeds", seeds},
                   {"code_version", kVersion},
                   {"outputs", files},
                   {"wall_seconds",
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    write_text_file(path, doc.dump(2) + "\n");
  }
};

std::string manifest_tag(const fs::path& manifest) {
  return "# manifest=" + manifest.filename().string() + "\n";
}

WaveguideConfig resolve_config(const std::string& preset, const std::string& config_path) {
  if (!preset.empty() && !config_path.empty())
    throw UsageError("pass either --preset or --config, not both");
  if (!config_path.empty()) return config_from_json(read_json_file(config_path));
  const std::string name = preset.empty() ? "system1" : preset;
  try {
    return presets::by_name(name);
  } catch (const std::out_of_range&) {
    std::string list;
    for (const auto& n : presets::names()) list += (list.empty() ? "" : ", ") + n;
    throw UsageError("unknown preset '" + name + "'; available presets: " + list);
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

template <typename Fn>
void write_stream(const fs::path& path, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  write_text_file(path, os.str());
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string preset, config, direction = "lr", out;
  bool both = false, force = false;
  std::size_t stride = 5;
  std::optional<double> dt, t_total;
  std::optional<std::size_t> n;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  WaveguideConfig cfg = resolve_config(a.preset, a.config);
  if (a.dt) cfg.dt = *a.dt;
  if (a.t_total) cfg.t_total = *a.t_total;
  if (a.n) cfg.n_per_side = *a.n;
  const ValidationReport vr = validate(cfg);
  if (!vr.ok()) throw UsageError("invalid config: " + vr.to_string());

  std::vector<Direction> dirs;
  if (a.both)
    dirs = {Direction::LR, Direction::RL};
  else
    dirs = {direction_from_string(a.direction)};

  const fs::path dir(a.out);
  ensure_dir(dir);
  Outputs outs(a.force);
  const fs::path manifest_path = outs.add(dir / "manifest.json");
  const fs::path summary_path = outs.add(dir / "summary.json");
  std::vector<fs::path> outcome_paths, spectrum_paths;
  for (Direction d : dirs) {
    outcome_paths.push_back(outs.add(dir / ("outcome_" + std::string(to_string(d)) + ".csv")));
    spectrum_paths.push_back(outs.add(dir / ("spectrum_" + std::string(to_string(d)) + ".csv")));
  }

  Manifest manifest{"simulate", to_json(cfg)};
  SimOptions opts;
  opts.output_stride = a.stride;

  json summary{{"config", to_json(cfg)},
               {"omega_hat", cfg.omega()},
               {"manifest", manifest_path.filename().string()}};
  std::vector<SimOutcome> runs;
  bool diverged = false;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    SimOutcome o = integrate(cfg, dirs[k], opts);
    const std::string tag(to_string(dirs[k]));
    write_stream(outcome_paths[k], [&](std::ostream& os) {
      os << manifest_tag(manifest_path);
      write_outcome_csv(os, o, cfg, dirs[k]);
    });

    json js{{"eta", o.eta()}, {"e_input", o.final_e_input}, {"e_down", o.final_e_down},
            {"diverged", o.diverged}};
    if (o.diverged) {
      diverged = true;
      js["divergence_tau"] = o.divergence_tau;
      err << "error: " << tag << " run diverged at tau = " << o.divergence_tau << '\n';
    } else {
      SpectrumOptions so;
      so.window_begin = cfg.t_total * 2.0 / 3.0;
      so.window_end = cfg.t_total;
      try {
        const Spectrum s = spectrum(o.tau, o.probe(Probe::Y0), cfg.omega(), so);
        write_stream(spectrum_paths[k], [&](std::ostream& os) {
          os << manifest_tag(manifest_path);
          write_spectrum_csv(os, s);
        });
        js["spectrum_peak"] = s.peak_frequency;
        js["sidebands"] = s.sidebands;
      } catch (const WindowTooShort& e) {
        err << "warning: " << tag << " spectrum skipped: " << e.what() << '\n';
      }
    }
    out << tag << ": eta = " << fmt("%.4f", o.eta()) << "  E_input = " << fmt("%.6g", o.final_e_input)
        << "  E_down = " << fmt("%.6g", o.final_e_down) << '\n';
    summary[tag] = js;
    runs.push_back(std::move(o));
  }

  if (runs.size() == 2 && !diverged) {
    const MeasurePair m = measures(runs[0], runs[1], cfg.t_total);
    const Branch b = classify(m);
    summary["delta"] = std::isfinite(m.delta) ? json(m.delta) : json(std::to_string(m.delta));
    summary["degenerate"] = m.degenerate;
    summary["branch"] = std::string(to_string(b));
    summary["desirable"] = is_desirable(m);
    out << "delta = " << fmt("%.4f", m.delta) << (m.degenerate ? " (degenerate)" : "")
        << "  branch = " << to_string(b) << '\n';
  }
  write_text_file(summary_path, summary.dump(2) + "\n");
  manifest.write(manifest_path, outs);
  return diverged ? kRuntimeFailure : kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string spec, out, profile = "full";
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::size_t parallelism = 0;
  bool strict = false, force = false, quiet = false;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  SweepSpec base;
  if (a.profile == "reduced")
    base = SweepSpec::reduced();
  else if (a.profile != "full")
    throw UsageError("unknown profile '" + a.profile + "' (expected full or reduced)");
  SweepSpec spec = a.spec.empty() ? base : sweep_spec_from_json(read_json_file(a.spec), base);
  if (a.n) spec.n_samples = *a.n;
  if (a.seed) spec.seed = *a.seed;
  try {
    validate(spec);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  const fs::path csv(a.out);
  if (csv.has_parent_path()) ensure_dir(csv.parent_path());
  Outputs outs(a.force);
  outs.add(csv);
  const fs::path meta = outs.add(fs::path(a.out + ".meta.json"));
  const fs::path manifest_path = outs.add(fs::path(a.out + ".manifest.json"));

  const std::size_t workers = a.parallelism ? a.parallelism : default_parallelism();
  Manifest manifest{"sweep", to_json(spec)};
  manifest.seeds["sweep"] = spec.seed;

  std::size_t last_pct = 0;
  const auto records = generate_dataset(spec, workers, [&](std::size_t done, std::size_t total) {
    if (a.quiet) return;
    const std::size_t pct = done * 100 / total;
    if (pct >= last_pct + 5 || done == total) {
      last_pct = pct;
      err << "\rsweep: " << done << "/" << total << " (" << pct << "%)" << std::flush;
    }
  });
  if (!a.quiet) err << '\n';

  write_stream(csv, [&](std::ostream& os) {
    std::ostringstream body;
    write_dataset_csv(body, records);
    const std::string text = body.str();
    const auto nl = text.find('\n');
    os << text.substr(0, nl + 1) << manifest_tag(manifest_path) << text.substr(nl + 1);
  });

  std::size_t counts[4] = {0, 0, 0, 0};
  std::size_t branches[4] = {0, 0, 0, 0};
  double wall = 0.0;
  for (const SweepRecord& r : records) {
    ++counts[static_cast<int>(r.flag)];
    if (r.usable()) ++branches[static_cast<int>(r.branch)];
    wall += r.wall_seconds;
  }
  char fp[24];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(dataset_fingerprint(records)));
  const json meta_doc{{"spec", to_json(spec)},
                      {"seed", spec.seed},
                      {"code_version", kVersion},
                      {"dt", spec.dt},
                      {"n_per_side", spec.n_per_side},
                      {"t_total", spec.t_total},
                      {"records", records.size()},
                      {"fingerprint", fp},
                      {"flags",
                       {{"ok", counts[0]}, {"degenerate", counts[1]}, {"diverged", counts[2]},
                        {"failed", counts[3]}}},
                      {"manifest", manifest_path.filename().string()}};
  write_text_file(meta, meta_doc.dump(2) + "\n");
  manifest.write(manifest_path, outs);

  out << "records: " << records.size() << "  ok: " << counts[0] << "  degenerate: " << counts[1]
      << "  diverged: " << counts[2] << "  failed: " << counts[3] << '\n';
  out << "branches (usable): HNRB " << branches[0] << "  INRB " << branches[1] << "  NRB "
      << branches[2] << "  LOW_TRANSMISSION " << branches[3] << '\n';
  out << "simulation time: " << fmt("%.1f", wall) << " s over " << workers << " worker(s)\n";
  if (a.strict && counts[2] + counts[3] > 0) {
    err << "error: " << counts[2] + counts[3] << " record(s) diverged or failed (--strict)\n";
    return kRuntimeFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// damping

struct DampingArgs {
  std::string preset, config, out;
  std::vector<std::string> modes{"cold"};
  double zeta_min = 0.0, zeta_max = 0.05, zeta_step = 0.002;
  bool force = false;
};

int cmd_damping(const DampingArgs& a, std::ostream& out, std::ostream&) {
  const WaveguideConfig cfg = resolve_config(a.preset, a.config);
  std::vector<SweepMode> modes;
  for (const auto& m : a.modes) {
    try {
      modes.push_back(sweep_mode_from_string(m));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  std::vector<double> grid;
  try {
    grid = zeta_grid(a.zeta_min, a.zeta_max, a.zeta_step);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  const fs::path dir(a.out);
  ensure_dir(dir);
  Outputs outs(a.force);
  const fs::path manifest_path = outs.add(dir / "manifest.json");
  std::vector<fs::path> csvs;
  for (SweepMode m : modes) csvs.push_back(outs.add(dir / ("damping_" + std::string(to_string(m)) + ".csv")));

  Manifest manifest{"damping", to_json(cfg)};
  std::vector<DampingSweepResult> results;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    DampingSweepResult r = damping_sweep(cfg, grid, modes[k]);
    write_stream(csvs[k], [&](std::ostream& os) {
      os << manifest_tag(manifest_path);
      write_damping_csv(os, r);
    });
    out << to_string(modes[k]) << ":";
    if (r.critical.empty()) out << " no critical brackets";
    out << '\n';
    for (const CriticalBracket& c : r.critical)
      out << "  critical " << to_string(c.direction) << " zeta in [" << fmt("%.4f", c.zeta_lo) << ", "
          << fmt("%.4f", c.zeta_hi) << "]\n";
    results.push_back(std::move(r));
  }
  for (std::size_t k = 1; k < results.size(); ++k)
    for (Direction d : {Direction::LR, Direction::RL}) {
      const auto diff = disagreements(results[0], results[k], d);
      out << to_string(modes[0]) << " vs " << to_string(modes[k]) << " " << to_string(d) << ": "
          << diff.size() << " disagreeing grid point(s)";
      if (!diff.empty()) out << " (coexisting branches)";
      out << '\n';
    }
  manifest.write(manifest_path, outs);
  return kOk;
}

// ---------------------------------------------------------------------------
// train / eval / kernel

struct TrainArgs {
  std::string dataset, out, optimizer = "adam", test_out;
  std::uint64_t seed = 1, init_seed = 1;
  std::size_t max_epochs = 200, batch = 32;
  double learning_rate = 1e-3;
  bool force = false;
};

std::vector<SweepRecord> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open dataset " + path);
  try {
    return read_dataset_csv(in);
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream&) {
  const auto dataset = load_dataset(a.dataset);
  TrainOptions opts;
  if (a.optimizer == "adam")
    opts.optimizer = Optimizer::Adam;
  else if (a.optimizer == "lm")
    opts.optimizer = Optimizer::LevenbergMarquardt;
  else
    throw UsageError("unknown optimizer '" + a.optimizer + "' (expected adam or lm)");
  opts.max_epochs = a.max_epochs;
  opts.batch_size = a.batch;
  opts.learning_rate = a.learning_rate;
  opts.init_seed = a.init_seed;

  const fs::path model_path(a.out);
  if (model_path.has_parent_path()) ensure_dir(model_path.parent_path());
  Outputs outs(a.force);
  outs.add(model_path);
  const fs::path test_path = outs.add(a.test_out.empty() ? fs::path(a.out + ".test.csv") : fs::path(a.test_out));
  const fs::path manifest_path = outs.add(fs::path(a.out + ".manifest.json"));

  Manifest manifest{"train", json{{"dataset", a.dataset}, {"optimizer", a.optimizer},
                                  {"max_epochs", a.max_epochs}, {"batch_size", a.batch},
                                  {"learning_rate", a.learning_rate}}};
  manifest.seeds["split"] = a.seed;
  manifest.seeds["init"] = a.init_seed;

  TrainResult res;
  try {
    res = train(dataset, a.seed, opts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json doc = to_json(res.model);
  doc["manifest"] = manifest_path.filename().string();
  write_text_file(model_path, doc.dump() + "\n");
  write_stream(test_path, [&](std::ostream& os) {
    os << manifest_tag(manifest_path);
    write_dataset_csv(os, res.test);
  });

  const TrainingReport& r = res.model.report;
  out << "train/validation/test: " << r.train_size << "/" << r.validation_size << "/" << r.test_size
      << "  (excluded " << r.excluded_records << ")\n";
  out << "epochs: " << r.epochs_run << "  best epoch: " << r.best_epoch
      << "  best validation loss: " << fmt("%.6g", r.best_validation_loss) << '\n';
  out << "stopped: " << r.stopping_reason << '\n';
  const EvalReport ev = evaluate(res.model, res.test);
  out << format_confusion_table(ev);
  manifest.write(manifest_path, outs);
  return kOk;
}

struct EvalArgs {
  std::string model, dataset, out;
  double eta_min = 0.2, delta_min = 5.0;
  bool force = false;
};

SurrogateModel load_model(const std::string& path) {
  try {
    return surrogate_from_json(read_json_file(path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const SurrogateModel model = load_model(a.model);
  const auto records = load_dataset(a.dataset);
  const EvalReport rep = evaluate(model, records, {a.eta_min, a.delta_min});
  const std::string table = format_confusion_table(rep);
  out << table;
  if (rep.empty_class) err << "warning: no actually-desirable records in " << a.dataset << '\n';
  if (!a.out.empty()) {
    Outputs outs(a.force);
    const fs::path txt = outs.add(fs::path(a.out + ".txt"));
    const fs::path csv = outs.add(fs::path(a.out + ".csv"));
    const fs::path manifest_path = outs.add(fs::path(a.out + ".manifest.json"));
    Manifest manifest{"eval", json{{"model", a.model}, {"dataset", a.dataset},
                                   {"eta_min", a.eta_min}, {"delta_min", a.delta_min}}};
    write_text_file(txt, manifest_tag(manifest_path) + table);
    write_stream(csv, [&](std::ostream& os) {
      os << manifest_tag(manifest_path);
      write_metrics_csv(os, rep);
    });
    manifest.write(manifest_path, outs);
  }
  return kOk;
}

struct KernelArgs {
  std::string model, out;
  double d = 0.2;
  double ap_min = 0.2, ap_max = 1.0;
  std::size_t ap_steps = 17;
  double theta_min = 0.05, theta_max = 0.95;  // units of pi
  std::size_t theta_steps = 19;
  std::size_t alpha_points = 61;
  double eta_min = 0.2, delta_min = 4.0;
  std::size_t parallelism = 0;
  bool force = false;
};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw UsageError("grid needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

int cmd_kernel(const KernelArgs& a, std::ostream& out, std::ostream&) {
  const SurrogateModel model = load_model(a.model);
  if (!(a.d > 0.0)) throw UsageError("--d must be positive");
  const auto ap = linspace(a.ap_min, a.ap_max, a.ap_steps);
  auto theta = linspace(a.theta_min, a.theta_max, a.theta_steps);
  for (double& t : theta) {
    if (!(t > 0.0 && t < 1.0)) throw UsageError("theta grid must lie strictly inside (0, 1) x pi");
    t *= std::numbers::pi;
  }
  AlphaGrid grid;
  grid.points = a.alpha_points;
  if (grid.points < 2) throw UsageError("--alpha-points must be at least 2");

  const fs::path csv(a.out);
  if (csv.has_parent_path()) ensure_dir(csv.parent_path());
  Outputs outs(a.force);
  outs.add(csv);
  const fs::path manifest_path = outs.add(fs::path(a.out + ".manifest.json"));
  Manifest manifest{"kernel", json{{"model", a.model}, {"d", a.d}, {"a_p", ap}, {"theta", theta},
                                   {"alpha_points", a.alpha_points}, {"eta_min", a.eta_min},
                                   {"delta_min", a.delta_min}}};

  const std::size_t workers = a.parallelism ? a.parallelism : default_parallelism();
  const KernelTable table = robustness_map(model, a.d, ap, theta, grid, {a.eta_min, a.delta_min}, workers);
  write_stream(csv, [&](std::ostream& os) {
    os << manifest_tag(manifest_path);
    write_kernel_csv(os, table);
  });
  manifest.write(manifest_path, outs);

  std::size_t best = 0;
  for (std::size_t k = 1; k < table.kernel.size(); ++k)
    if (table.kernel[k] > table.kernel[best]) best = k;
  const std::size_t i = best / theta.size(), j = best % theta.size();
  out << "max kernel size " << fmt("%.3f", table.kernel[best]) << " at A_p = " << fmt("%.4f", ap[i])
      << ", theta = " << fmt("%.4f", theta[j] / std::numbers::pi) << " pi\n";
  return kOk;
}

int cmd_presets(std::ostream& out) {
  for (const auto& name : presets::names()) {
    const WaveguideConfig c = presets::by_name(name);
    out << name << ": " << to_json(c).dump() << '\n';
  }
  return kOk;
}

int cmd_validate(const std::string& preset, const std::string& config, std::ostream& out) {
  const WaveguideConfig cfg = resolve_config(preset, config);
  const ValidationReport r = validate(cfg);
  if (r.ok()) {
    out << "ok: omega_hat = " << fmt("%.6f", cfg.omega()) << '\n';
    return kOk;
  }
  for (const auto& v : r.violations) out << "violation: " << v << '\n';
  return kUsageError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and surrogate toolkit for the two-gated nonlinear waveguide"};
  app.name(args.empty() ? "nrgate" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Integrate one configuration and write series, spectra and measures");
  s->add_option("--preset", sim.preset, "Preset name (system1..system4, kernel_design)");
  s->add_option("--config", sim.config, "Config JSON file");
  s->add_option("--direction", sim.direction, "lr or rl")->check(CLI::IsMember({"lr", "rl", "LR", "RL"}));
  s->add_flag("--both-directions", sim.both, "Run LR and RL and report delta");
  s->add_option("--out", sim.out, "Output directory")->default_val("simulate_out");
  s->add_option("--stride", sim.stride, "Store every k-th step")->check(CLI::PositiveNumber);
  s->add_option("--dt", sim.dt, "Override step size");
  s->add_option("--t-total", sim.t_total, "Override total time");
  s->add_option("--n", sim.n, "Override oscillators per side");
  s->add_flag("--force", sim.force, "Overwrite existing outputs");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Generate a randomized parameter-sweep dataset");
  w->add_option("--spec", sw.spec, "Sweep spec JSON");
  w->add_option("--out", sw.out, "Dataset CSV path")->required();
  w->add_option("--profile", sw.profile, "full (N=200, T=1500) or reduced (N=60, T=800)");
  w->add_option("--n", sw.n, "Number of samples");
  w->add_option("--seed", sw.seed, "RNG seed");
  w->add_option("--parallelism,-j", sw.parallelism, "Worker threads (default: NRGATE_PARALLELISM or cores)");
  w->add_flag("--strict", sw.strict, "Fail if any record diverged or failed");
  w->add_flag("--quiet", sw.quiet, "No progress output");
  w->add_flag("--force", sw.force, "Overwrite existing outputs");

  DampingArgs dm;
  auto* dmp = app.add_subcommand("damping", "Sweep the damping ratio (cold start or continuation)");
  dmp->add_option("--preset", dm.preset, "Preset name");
  dmp->add_option("--config", dm.config, "Config JSON file");
  dmp->add_option("--mode", dm.modes, "cold, continue_up, continue_down (repeatable)")->delimiter(',');
  dmp->add_option("--zeta-min", dm.zeta_min);
  dmp->add_option("--zeta-max", dm.zeta_max);
  dmp->add_option("--zeta-step", dm.zeta_step);
  dmp->add_option("--out", dm.out, "Output directory")->default_val("damping_out");
  dmp->add_flag("--force", dm.force, "Overwrite existing outputs");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train the surrogate network on a dataset");
  t->add_option("dataset,--dataset", tr.dataset, "Dataset CSV")->required();
  t->add_option("--out", tr.out, "Model JSON path")->default_val("model.json");
  t->add_option("--test-out", tr.test_out, "Where to write the held-out test split");
  t->add_option("--seed", tr.seed, "Split seed");
  t->add_option("--init-seed", tr.init_seed, "Weight-initialisation and shuffling seed");
  t->add_option("--optimizer", tr.optimizer, "adam or lm");
  t->add_option("--max-epochs", tr.max_epochs);
  t->add_option("--batch", tr.batch)->check(CLI::PositiveNumber);
  t->add_option("--learning-rate", tr.learning_rate);
  t->add_flag("--force", tr.force, "Overwrite existing outputs");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Confusion matrix and correlation of a model on a dataset");
  e->add_option("model,--model", ev.model, "Model JSON")->required();
  e->add_option("dataset,--dataset", ev.dataset, "Dataset CSV (usually the test split)")->required();
  e->add_option("--eta-min", ev.eta_min);
  e->add_option("--delta-min", ev.delta_min);
  e->add_option("--out", ev.out, "Report prefix (writes .txt and .csv)");
  e->add_flag("--force", ev.force, "Overwrite existing outputs");

  KernelArgs kn;
  auto* k = app.add_subcommand("kernel", "Kernel-size robustness map over (A_p, theta)");
  k->add_option("model,--model", kn.model, "Model JSON")->required();
  k->add_option("--d", kn.d, "Fixed coupling d");
  k->add_option("--ap-min", kn.ap_min);
  k->add_option("--ap-max", kn.ap_max);
  k->add_option("--ap-steps", kn.ap_steps);
  k->add_option("--theta-min", kn.theta_min, "In units of pi");
  k->add_option("--theta-max", kn.theta_max, "In units of pi");
  k->add_option("--theta-steps", kn.theta_steps);
  k->add_option("--alpha-points", kn.alpha_points, "Grid points per alpha axis over [0, 6]");
  k->add_option("--eta-min", kn.eta_min);
  k->add_option("--delta-min", kn.delta_min);
  k->add_option("--out", kn.out, "Kernel CSV path")->default_val("kernel.csv");
  k->add_option("--parallelism,-j", kn.parallelism);
  k->add_flag("--force", kn.force, "Overwrite existing outputs");

  auto* pr = app.add_subcommand("presets", "List bundled configurations");

  std::string vpreset, vconfig;
  auto* va = app.add_subcommand("validate", "Check a configuration");
  va->add_option("--preset", vpreset);
  va->add_option("--config", vconfig);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*s) return cmd_simulate(sim, out, err);
    if (*w) return cmd_sweep(sw, out, err);
    if (*dmp) return cmd_damping(dm, out, err);
    if (*t) return cmd_train(tr, out, err);
    if (*e) return cmd_eval(ev, out, err);
    if (*k) return cmd_kernel(kn, out, err);
    if (*pr) return cmd_presets(out);
    if (*va) return cmd_validate(vpreset, vconfig, out);
  } catch (const UsageError& ue) {
    err << "error: " << ue.what() << '\n';
    return kUsageError;
  } catch (const FormatError& fe) {
    err << "error: " << fe.what() << '\n';
    return kUsageError;
  } catch (const DomainError& de) {
    err << "error: " << de.what() << '\n';
    return kUsageError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}

}  // namespace nrgate::cli
