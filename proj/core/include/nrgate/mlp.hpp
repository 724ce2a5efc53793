#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace nrgate {

class DegenerateBounds : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Per-dimension [min, max] used for affine scaling to [-1, 1].
struct Bounds {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t size() const { return min.size(); }
  bool operator==(const Bounds&) const = default;
};

struct Normalized {
  std::vector<double> values;
  bool clamped = false;  // some input fell outside the bounds
};

/// 2 (v - min) / (max - min) - 1 per component, clamped to [-1, 1].
Normalized normalize(std::span<const double> v, const Bounds& b);
std::vector<double> denormalize(std::span<const double> u, const Bounds& b);

/// Column-wise bounds of a row-major sample matrix with `dims` columns.  A
/// constant column is widened to [v - h, v + h], h = max(1, |v|) / 2, so the
/// scaling stays invertible.
Bounds fit_bounds(std::span<const double> rows, std::size_t dims);

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> biases;   // out

  bool operator==(const DenseLayer&) const = default;
};

/// Fully connected network: ReLU on hidden layers, identity on the output.
class Mlp {
public:
  Mlp() = default;
  /// Zero-initialised network with the given layer widths (input first).
  explicit Mlp(const std::vector<std::size_t>& widths);

  /// Weights uniform on +/- sqrt(6 / fan_in), zero biases.
  static Mlp random(const std::vector<std::size_t>& widths, std::uint64_t seed);

  std::size_t inputs() const { return layers_.front().in; }
  std::size_t outputs() const { return layers_.back().out; }
  std::vector<std::size_t> widths() const;

  std::vector<double> forward(std::span<const double> x) const;

  std::size_t parameter_count() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);

  /// Mean squared error over all samples and outputs; `inputs` and `targets`
  /// are row-major with inputs()/outputs() columns.  When `grad` is non-null it
  /// receives the gradient in parameters() order.
  double loss(std::span<const double> inputs, std::span<const double> targets,
              std::vector<double>* grad = nullptr) const;

  /// Jacobian of every output of every sample with respect to the parameters;
  /// row (sample * outputs() + o), columns in parameters() order.
  std::vector<double> jacobian(std::span<const double> inputs) const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  bool operator==(const Mlp&) const = default;

private:
  std::vector<DenseLayer> layers_;
};

}  // namespace nrgate
