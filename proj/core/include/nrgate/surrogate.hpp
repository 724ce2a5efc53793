#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nrgate/analysis.hpp"
#include "nrgate/mlp.hpp"
#include "nrgate/sweep.hpp"

namespace nrgate {

/// Input order of the surrogate: (A_p, alpha1, alpha2, omega_hat, d).
inline constexpr std::size_t kSurrogateInputs = 5;
/// Output order: (eta, delta).
inline constexpr std::size_t kSurrogateOutputs = 2;

/// 5 -> 50 -> 50 -> 50 -> 50 -> 2.
std::vector<std::size_t> default_architecture();

class NonConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct TrainingReport {
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  double initial_validation_loss = 0.0;
  double best_validation_loss = 0.0;
  std::string stopping_reason;
  std::string optimizer;
  std::size_t excluded_records = 0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
  std::size_t test_size = 0;
  std::vector<double> validation_history;  // index 0 is before training
};

struct Prediction {
  double eta = 0.0;
  double delta = 0.0;
};

struct SurrogateModel {
  Mlp net;
  Bounds in_bounds;
  Bounds out_bounds;
  TrainingReport report;
  std::uint64_t dataset_fingerprint = 0;

  /// Raw inputs in surrogate order; inputs outside in_bounds are clamped.
  Prediction predict(std::span<const double> raw) const;
  Prediction predict(double a_p, double alpha1, double alpha2, double omega_hat, double d) const;
};

std::array<double, kSurrogateInputs> surrogate_inputs(const SweepRecord& r);

enum class Optimizer { Adam, LevenbergMarquardt };

struct TrainOptions {
  Optimizer optimizer = Optimizer::Adam;
  std::size_t max_epochs = 200;
  std::size_t patience = 6;
  std::vector<std::size_t> architecture = default_architecture();
  std::uint64_t init_seed = 1;

  // Adam
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t lr_plateau = 3;  // epochs without improvement before the rate is cut
  double lr_decay = 0.5;

  // Levenberg-Marquardt
  double lm_mu = 1e-2;
  std::size_t lm_max_samples = 2000;
};

/// Index partition of n items into 50% / 15% / 35% (train / validation / test).
struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

DataSplit split_indices(std::size_t n, std::uint64_t seed);

struct TrainResult {
  SurrogateModel model;
  std::vector<SweepRecord> train;
  std::vector<SweepRecord> validation;
  std::vector<SweepRecord> test;
};

/// Records flagged degenerate, diverged or failed are dropped before the
/// split.  Requires at least 100 usable records.  Output bounds come from the
/// training subset only.
TrainResult train(const std::vector<SweepRecord>& dataset, std::uint64_t split_seed,
                  const TrainOptions& opts = {});

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Sensitivity TP/(TP+FN), specificity TN/(TN+FP), precision TP/(TP+FP);
/// empty denominators leave the metric unset.
struct ClassMetrics {
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> precision;
};

ClassMetrics class_metrics(const ConfusionCounts& c);

/// Pearson correlation; NaN when either side has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

struct EvalReport {
  ConfusionCounts counts;
  ClassMetrics metrics;
  double r_eta = 0.0;
  double r_delta = 0.0;
  /// No actually-desirable record in the test set.
  bool empty_class = false;
  DesirabilityThresholds thresholds;
};

EvalReport evaluate(const SurrogateModel& model, const std::vector<SweepRecord>& test,
                    const DesirabilityThresholds& thresholds = {});

/// Table-style text report (predicted rows, actual columns, metrics).
std::string format_confusion_table(const EvalReport& r);
void write_metrics_csv(std::ostream& os, const EvalReport& r);

nlohmann::json to_json(const SurrogateModel& m);
SurrogateModel surrogate_from_json(const nlohmann::json& j);

}  // namespace nrgate
