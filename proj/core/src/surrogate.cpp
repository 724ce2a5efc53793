#include "nrgate/surrogate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace nrgate {

std::vector<std::size_t> default_architecture() { return {5, 50, 50, 50, 50, 2}; }

std::array<double, kSurrogateInputs> surrogate_inputs(const SweepRecord& r) {
  return {r.a_p, r.alpha1, r.alpha2, r.omega_hat, r.d};
}

Prediction SurrogateModel::predict(std::span<const double> raw) const {
  const Normalized in = normalize(raw, in_bounds);
  const std::vector<double> y = denormalize(net.forward(in.values), out_bounds);
  return {y[0], y[1]};
}

Prediction SurrogateModel::predict(double a_p, double alpha1, double alpha2, double omega_hat,
                                   double d) const {
  const std::array<double, kSurrogateInputs> raw{a_p, alpha1, alpha2, omega_hat, d};
  return predict(raw);
}

DataSplit split_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  RecordStream rng(seed, 0x73706c6974ull);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);

  const std::size_t n_train = (n * 50 + 50) / 100;
  const std::size_t n_val = (n * 15 + 50) / 100;
  DataSplit s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                      idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
  return s;
}

namespace {

struct Matrices {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t rows = 0;
};

Matrices build(const std::vector<SweepRecord>& recs, const Bounds& in_b, const Bounds& out_b) {
  Matrices m;
  m.rows = recs.size();
  m.x.reserve(recs.size() * kSurrogateInputs);
  m.y.reserve(recs.size() * kSurrogateOutputs);
  for (const SweepRecord& r : recs) {
    const auto raw = surrogate_inputs(r);
    const auto xi = normalize(raw, in_b).values;
    m.x.insert(m.x.end(), xi.begin(), xi.end());
    const std::array<double, 2> out{r.eta_lr, r.delta};
    const auto yi = normalize(out, out_b).values;
    m.y.insert(m.y.end(), yi.begin(), yi.end());
  }
  return m;
}

std::span<const double> rows_of(const std::vector<double>& v, std::size_t first, std::size_t count,
                                std::size_t dims) {
  return std::span<const double>(v).subspan(first * dims, count * dims);
}

class EarlyStopping {
public:
  EarlyStopping(const Mlp& net, double initial, std::size_t patience)
      : best_(net), best_loss_(initial), patience_(patience) {}

  /// Returns true when training should stop.
  bool update(const Mlp& net, double val, std::size_t epoch) {
    if (val < best_loss_) {
      best_loss_ = val;
      best_ = net;
      best_epoch_ = epoch;
      stall_ = 0;
      return false;
    }
    return ++stall_ >= patience_;
  }

  const Mlp& best() const { return best_; }
  double best_loss() const { return best_loss_; }
  std::size_t best_epoch() const { return best_epoch_; }
  std::size_t stall() const { return stall_; }

private:
  Mlp best_;
  double best_loss_;
  std::size_t best_epoch_ = 0;
  std::size_t patience_;
  std::size_t stall_ = 0;
};

void adam_epoch(Mlp& net, const Matrices& tr, const TrainOptions& opts, double lr, std::size_t epoch,
                std::vector<double>& m1, std::vector<double>& m2, std::size_t& t) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::vector<std::size_t> order(tr.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RecordStream rng(opts.init_seed, 0x65706f6368ull + epoch);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<double> bx, by, grad;
  std::vector<double> params = net.parameters();
  for (std::size_t start = 0; start < tr.rows; start += opts.batch_size) {
    const std::size_t end = std::min(tr.rows, start + opts.batch_size);
    bx.clear();
    by.clear();
    for (std::size_t k = start; k < end; ++k) {
      const auto xr = rows_of(tr.x, order[k], 1, kSurrogateInputs);
      const auto yr = rows_of(tr.y, order[k], 1, kSurrogateOutputs);
      bx.insert(bx.end(), xr.begin(), xr.end());
      by.insert(by.end(), yr.begin(), yr.end());
    }
    net.loss(bx, by, &grad);
    ++t;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m1[i] = beta1 * m1[i] + (1.0 - beta1) * grad[i];
      m2[i] = beta2 * m2[i] + (1.0 - beta2) * grad[i] * grad[i];
      params[i] -= lr * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + eps);
    }
    net.set_parameters(params);
  }
}

/// One accepted Levenberg-Marquardt step (or a failed search).  Returns false
/// when no damping in range reduces the loss.
bool lm_step(Mlp& net, const Matrices& tr, double& mu, std::size_t max_samples) {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const std::size_t rows = std::min(tr.rows, max_samples);
  const auto x = rows_of(tr.x, 0, rows, kSurrogateInputs);
  const auto y = rows_of(tr.y, 0, rows, kSurrogateOutputs);

  const std::size_t np = net.parameter_count();
  const std::size_t nr = rows * kSurrogateOutputs;
  std::vector<double> jac = net.jacobian(x);
  Eigen::Map<const RowMat> J(jac.data(), static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(np));

  Eigen::VectorXd r(static_cast<Eigen::Index>(nr));
  for (std::size_t s = 0; s < rows; ++s) {
    const auto out = net.forward(x.subspan(s * kSurrogateInputs, kSurrogateInputs));
    for (std::size_t o = 0; o < kSurrogateOutputs; ++o)
      r[static_cast<Eigen::Index>(s * kSurrogateOutputs + o)] = out[o] - y[s * kSurrogateOutputs + o];
  }
  const double base = net.loss(x, y);
  const std::vector<double> p0 = net.parameters();

  // Solve in whichever space is smaller; both give (J'J + mu I)^-1 J' r.
  const bool sample_space = nr < np;
  const Eigen::MatrixXd gram = sample_space ? Eigen::MatrixXd(J * J.transpose())
                                            : Eigen::MatrixXd(J.transpose() * J);
  const Eigen::VectorXd jtr = sample_space ? Eigen::VectorXd() : Eigen::VectorXd(J.transpose() * r);

  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += mu;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    Eigen::VectorXd step = sample_space ? Eigen::VectorXd(J.transpose() * llt.solve(r))
                                        : Eigen::VectorXd(llt.solve(jtr));
    std::vector<double> p = p0;
    for (std::size_t i = 0; i < np; ++i) p[i] -= step[static_cast<Eigen::Index>(i)];
    net.set_parameters(p);
    const double trial = net.loss(x, y);
    if (std::isfinite(trial) && trial < base) {
      mu = std::max(mu / 10.0, 1e-12);
      return true;
    }
    mu *= 10.0;
    if (mu > 1e12) break;
  }
  net.set_parameters(p0);
  return false;
}

}  // namespace

TrainResult train(const std::vector<SweepRecord>& dataset, std::uint64_t split_seed,
                  const TrainOptions& opts) {
  std::vector<SweepRecord> usable;
  for (const SweepRecord& r : dataset)
    if (r.usable() && std::isfinite(r.eta_lr) && std::isfinite(r.delta)) usable.push_back(r);
  if (usable.size() < 100)
    throw std::invalid_argument("training needs at least 100 usable records, got " +
                                std::to_string(usable.size()));
  if (opts.architecture.size() < 2 || opts.architecture.front() != kSurrogateInputs ||
      opts.architecture.back() != kSurrogateOutputs)
    throw std::invalid_argument("surrogate architecture must map 5 inputs to 2 outputs");
  if (opts.batch_size == 0 || opts.max_epochs == 0 || opts.patience == 0)
    throw std::invalid_argument("batch_size, max_epochs and patience must be positive");

  const DataSplit split = split_indices(usable.size(), split_seed);
  TrainResult res;
  for (std::size_t i : split.train) res.train.push_back(usable[i]);
  for (std::size_t i : split.validation) res.validation.push_back(usable[i]);
  for (std::size_t i : split.test) res.test.push_back(usable[i]);

  std::vector<double> in_rows, out_rows;
  for (const SweepRecord& r : res.train) {
    const auto raw = surrogate_inputs(r);
    in_rows.insert(in_rows.end(), raw.begin(), raw.end());
    out_rows.push_back(r.eta_lr);
    out_rows.push_back(r.delta);
  }
  SurrogateModel& model = res.model;
  model.in_bounds = fit_bounds(in_rows, kSurrogateInputs);
  model.out_bounds = fit_bounds(out_rows, kSurrogateOutputs);
  model.dataset_fingerprint = dataset_fingerprint(dataset);

  const Matrices tr = build(res.train, model.in_bounds, model.out_bounds);
  const Matrices va = build(res.validation, model.in_bounds, model.out_bounds);

  Mlp net = Mlp::random(opts.architecture, opts.init_seed);
  TrainingReport& rep = model.report;
  rep.optimizer = opts.optimizer == Optimizer::Adam ? "adam" : "levenberg_marquardt";
  rep.excluded_records = dataset.size() - usable.size();
  rep.train_size = res.train.size();
  rep.validation_size = res.validation.size();
  rep.test_size = res.test.size();
  rep.initial_validation_loss = net.loss(va.x, va.y);
  rep.validation_history.push_back(rep.initial_validation_loss);

  EarlyStopping stopper(net, rep.initial_validation_loss, opts.patience);
  std::vector<double> m1(net.parameter_count(), 0.0), m2(net.parameter_count(), 0.0);
  std::size_t adam_t = 0;
  double mu = opts.lm_mu;
  double lr = opts.learning_rate;
  rep.stopping_reason = "maximum epochs reached";

  for (std::size_t epoch = 1; epoch <= opts.max_epochs; ++epoch) {
    bool progressed = true;
    if (opts.optimizer == Optimizer::Adam)
      adam_epoch(net, tr, opts, lr, epoch, m1, m2, adam_t);
    else
      progressed = lm_step(net, tr, mu, opts.lm_max_samples);

    const double val = net.loss(va.x, va.y);
    rep.validation_history.push_back(val);
    rep.epochs_run = epoch;
    if (!std::isfinite(val)) {
      rep.stopping_reason = "validation loss became non-finite";
      break;
    }
    if (stopper.update(net, val, epoch)) {
      rep.stopping_reason = "validation loss did not improve for " + std::to_string(opts.patience) +
                            " consecutive epochs";
      break;
    }
    // Halve the step on a plateau; Adam otherwise jitters around the minimum.
    if (opts.lr_plateau > 0 && stopper.stall() > 0 && stopper.stall() % opts.lr_plateau == 0)
      lr *= opts.lr_decay;
    if (!progressed) {
      rep.stopping_reason = "Levenberg-Marquardt damping exhausted";
      break;
    }
  }

  rep.best_epoch = stopper.best_epoch();
  rep.best_validation_loss = stopper.best_loss();
  if (!std::isfinite(rep.best_validation_loss) ||
      rep.best_validation_loss > 10.0 * rep.initial_validation_loss)
    throw NonConvergence("validation loss " + std::to_string(rep.best_validation_loss) +
                         " exceeds 10x the initial loss");
  model.net = stopper.best();
  return res;
}

ClassMetrics class_metrics(const ConfusionCounts& c) {
  ClassMetrics m;
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.sensitivity = ratio(c.tp, c.tp + c.fn);
  m.specificity = ratio(c.tn, c.tn + c.fp);
  m.precision = ratio(c.tp, c.tp + c.fp);
  return m;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("pearson: size mismatch");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

EvalReport evaluate(const SurrogateModel& model, const std::vector<SweepRecord>& test,
                    const DesirabilityThresholds& thresholds) {
  EvalReport rep;
  rep.thresholds = thresholds;
  std::vector<double> eta_true, eta_pred, delta_true, delta_pred;
  for (const SweepRecord& r : test) {
    if (!r.usable()) continue;
    const auto raw = surrogate_inputs(r);
    const Prediction p = model.predict(raw);
    const bool actual = is_desirable(r.eta_lr, r.delta, thresholds);
    const bool predicted = is_desirable(p.eta, p.delta, thresholds);
    if (actual && predicted) ++rep.counts.tp;
    else if (!actual && predicted) ++rep.counts.fp;
    else if (actual && !predicted) ++rep.counts.fn;
    else ++rep.counts.tn;
    eta_true.push_back(r.eta_lr);
    eta_pred.push_back(p.eta);
    delta_true.push_back(r.delta);
    delta_pred.push_back(p.delta);
  }
  if (eta_true.empty()) throw std::invalid_argument("evaluate: no usable test records");
  rep.metrics = class_metrics(rep.counts);
  rep.empty_class = rep.counts.tp + rep.counts.fn == 0;
  rep.r_eta = pearson(eta_true, eta_pred);
  rep.r_delta = pearson(delta_true, delta_pred);
  return rep;
}

namespace {
std::string metric_text(const std::optional<double>& v) {
  if (!v) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}
}  // namespace

std::string format_confusion_table(const EvalReport& r) {
  std::ostringstream os;
  char line[160];
  os << "Data points in the test set: N = " << r.counts.total() << '\n';
  std::snprintf(line, sizeof line, "%-24s%-22s%-22s\n", "Predicted \\ Actual", "Desirable",
                "Undesirable");
  os << line;
  std::snprintf(line, sizeof line, "%-24sTP = %-17zuFP = %-17zu\n", "Desirable", r.counts.tp,
                r.counts.fp);
  os << line;
  std::snprintf(line, sizeof line, "%-24sFN = %-17zuTN = %-17zu\n", "Undesirable", r.counts.fn,
                r.counts.tn);
  os << line;
  os << "Sensitivity: " << metric_text(r.metrics.sensitivity)
     << "  Specificity: " << metric_text(r.metrics.specificity)
     << "  Precision: " << metric_text(r.metrics.precision) << '\n';
  std::snprintf(line, sizeof line, "Correlation R: eta %.4f  delta %.4f\n", r.r_eta, r.r_delta);
  os << line;
  std::snprintf(line, sizeof line, "Desirable region: eta > %g and delta > %g\n",
                r.thresholds.eta_min, r.thresholds.delta_min);
  os << line;
  if (r.empty_class) os << "warning: no actually-desirable records; sensitivity undefined\n";
  return os.str();
}

void write_metrics_csv(std::ostream& os, const EvalReport& r) {
  os << "metric,value\n";
  os << "tp," << r.counts.tp << "\nfp," << r.counts.fp << "\nfn," << r.counts.fn << "\ntn,"
     << r.counts.tn << '\n';
  os << "sensitivity," << metric_text(r.metrics.sensitivity) << '\n';
  os << "specificity," << metric_text(r.metrics.specificity) << '\n';
  os << "precision," << metric_text(r.metrics.precision) << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "r_eta,%.6f\nr_delta,%.6f\n", r.r_eta, r.r_delta);
  os << buf;
}

// ---------------------------------------------------------------------------

using nlohmann::json;

namespace {

json bounds_json(const Bounds& b) { return json{{"min", b.min}, {"max", b.max}}; }

Bounds bounds_from(const json& j, std::size_t dims) {
  Bounds b{j.at("min").get<std::vector<double>>(), j.at("max").get<std::vector<double>>()};
  if (b.min.size() != dims || b.max.size() != dims)
    throw std::invalid_argument("model bounds have the wrong dimension");
  return b;
}

}  // namespace

json to_json(const SurrogateModel& m) {
  json layers = json::array();
  for (const DenseLayer& l : m.net.layers())
    layers.push_back(json{{"in", l.in}, {"out", l.out}, {"weights", l.weights}, {"biases", l.biases}});
  const TrainingReport& r = m.report;
  char fp[24];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(m.dataset_fingerprint));
  return json{
      {"format", "nrgate-surrogate/1"},
      {"inputs", {"a_p", "alpha1", "alpha2", "omega_hat", "d"}},
      {"outputs", {"eta", "delta"}},
      {"hidden_activation", "relu"},
      {"output_activation", "identity"},
      {"layers", layers},
      {"in_bounds", bounds_json(m.in_bounds)},
      {"out_bounds", bounds_json(m.out_bounds)},
      {"dataset_fingerprint", fp},
      {"training_report",
       {{"epochs_run", r.epochs_run},
        {"best_epoch", r.best_epoch},
        {"initial_validation_loss", r.initial_validation_loss},
        {"best_validation_loss", r.best_validation_loss},
        {"stopping_reason", r.stopping_reason},
        {"optimizer", r.optimizer},
        {"excluded_records", r.excluded_records},
        {"train_size", r.train_size},
        {"validation_size", r.validation_size},
        {"test_size", r.test_size},
        {"validation_history", r.validation_history}}}};
}

SurrogateModel surrogate_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "nrgate-surrogate/1")
      throw std::invalid_argument("unsupported model format");
    SurrogateModel m;
    std::vector<std::size_t> widths;
    const json& layers = j.at("layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
      if (i == 0) widths.push_back(layers[i].at("in").get<std::size_t>());
      widths.push_back(layers[i].at("out").get<std::size_t>());
    }
    m.net = Mlp(widths);
    for (std::size_t i = 0; i < layers.size(); ++i) {
      DenseLayer& l = m.net.layers()[i];
      if (layers[i].at("in").get<std::size_t>() != l.in)
        throw std::invalid_argument("layer widths do not chain");
      l.weights = layers[i].at("weights").get<std::vector<double>>();
      l.biases = layers[i].at("biases").get<std::vector<double>>();
      if (l.weights.size() != l.in * l.out || l.biases.size() != l.out)
        throw std::invalid_argument("layer array sizes do not match dimensions");
    }
    if (m.net.inputs() != kSurrogateInputs || m.net.outputs() != kSurrogateOutputs)
      throw std::invalid_argument("model must map 5 inputs to 2 outputs");
    m.in_bounds = bounds_from(j.at("in_bounds"), kSurrogateInputs);
    m.out_bounds = bounds_from(j.at("out_bounds"), kSurrogateOutputs);
    m.dataset_fingerprint = std::stoull(j.at("dataset_fingerprint").get<std::string>(), nullptr, 16);
    const json& r = j.at("training_report");
    TrainingReport& rep = m.report;
    rep.epochs_run = r.at("epochs_run").get<std::size_t>();
    rep.best_epoch = r.at("best_epoch").get<std::size_t>();
    rep.initial_validation_loss = r.at("initial_validation_loss").get<double>();
    rep.best_validation_loss = r.at("best_validation_loss").get<double>();
    rep.stopping_reason = r.at("stopping_reason").get<std::string>();
    rep.optimizer = r.at("optimizer").get<std::string>();
    rep.excluded_records = r.at("excluded_records").get<std::size_t>();
    rep.train_size = r.at("train_size").get<std::size_t>();
    rep.validation_size = r.at("validation_size").get<std::size_t>();
    rep.test_size = r.at("test_size").get<std::size_t>();
    rep.validation_history = r.at("validation_history").get<std::vector<double>>();
    return m;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace nrgate
