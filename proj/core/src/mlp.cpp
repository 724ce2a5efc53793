#include "nrgate/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nrgate/sweep.hpp"

namespace nrgate {

Normalized normalize(std::span<const double> v, const Bounds& b) {
  if (v.size() != b.size()) throw std::invalid_argument("normalize: dimension mismatch");
  Normalized out;
  out.values.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double span = b.max[i] - b.min[i];
    if (!(span > 0.0)) throw DegenerateBounds("normalize: min == max in dimension " + std::to_string(i));
    double u = 2.0 * (v[i] - b.min[i]) / span - 1.0;
    if (u < -1.0 || u > 1.0) {
      out.clamped = true;
      u = std::clamp(u, -1.0, 1.0);
    }
    out.values[i] = u;
  }
  return out;
}

std::vector<double> denormalize(std::span<const double> u, const Bounds& b) {
  if (u.size() != b.size()) throw std::invalid_argument("denormalize: dimension mismatch");
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    v[i] = b.min[i] + 0.5 * (u[i] + 1.0) * (b.max[i] - b.min[i]);
  return v;
}

Bounds fit_bounds(std::span<const double> rows, std::size_t dims) {
  if (dims == 0 || rows.empty() || rows.size() % dims != 0)
    throw std::invalid_argument("fit_bounds: empty or ragged sample matrix");
  Bounds b;
  b.min.assign(dims, std::numeric_limits<double>::infinity());
  b.max.assign(dims, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < rows.size() / dims; ++r)
    for (std::size_t c = 0; c < dims; ++c) {
      b.min[c] = std::min(b.min[c], rows[r * dims + c]);
      b.max[c] = std::max(b.max[c], rows[r * dims + c]);
    }
  for (std::size_t c = 0; c < dims; ++c) {
    if (b.max[c] > b.min[c]) continue;
    const double h = 0.5 * std::max(1.0, std::abs(b.min[c]));
    b.min[c] -= h;
    b.max[c] += h;
  }
  return b;
}

Mlp::Mlp(const std::vector<std::size_t>& widths) {
  if (widths.size() < 2) throw std::invalid_argument("Mlp needs at least input and output widths");
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    if (widths[i] == 0 || widths[i + 1] == 0) throw std::invalid_argument("Mlp layer width is zero");
    DenseLayer l;
    l.in = widths[i];
    l.out = widths[i + 1];
    l.weights.assign(l.in * l.out, 0.0);
    l.biases.assign(l.out, 0.0);
    layers_.push_back(std::move(l));
  }
}

Mlp Mlp::random(const std::vector<std::size_t>& widths, std::uint64_t seed) {
  Mlp net(widths);
  RecordStream rng(seed, 0x6d6c70ull);
  for (DenseLayer& l : net.layers_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(l.in));
    for (double& w : l.weights) w = rng.uniform(-limit, limit);
  }
  return net;
}

std::vector<std::size_t> Mlp::widths() const {
  std::vector<std::size_t> w{layers_.front().in};
  for (const DenseLayer& l : layers_) w.push_back(l.out);
  return w;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  if (x.size() != inputs()) throw std::invalid_argument("Mlp::forward: input size mismatch");
  std::vector<double> a(x.begin(), x.end()), next;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const DenseLayer& l = layers_[li];
    const bool hidden = li + 1 < layers_.size();
    next.assign(l.out, 0.0);
    for (std::size_t o = 0; o < l.out; ++o) {
      double s = l.biases[o];
      const double* w = l.weights.data() + o * l.in;
      for (std::size_t i = 0; i < l.in; ++i) s += w[i] * a[i];
      next[o] = hidden ? std::max(0.0, s) : s;
    }
    a.swap(next);
  }
  return a;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) n += l.weights.size() + l.biases.size();
  return n;
}

std::vector<double> Mlp::parameters() const {
  std::vector<double> p;
  p.reserve(parameter_count());
  for (const DenseLayer& l : layers_) {
    p.insert(p.end(), l.weights.begin(), l.weights.end());
    p.insert(p.end(), l.biases.begin(), l.biases.end());
  }
  return p;
}

void Mlp::set_parameters(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("parameter vector size mismatch");
  std::size_t k = 0;
  for (DenseLayer& l : layers_) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(k), l.weights.size(), l.weights.begin());
    k += l.weights.size();
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(k), l.biases.size(), l.biases.begin());
    k += l.biases.size();
  }
}

namespace {

/// Activations of every layer for one sample (index 0 is the input).
void forward_trace(const std::vector<DenseLayer>& layers, const double* x,
                   std::vector<std::vector<double>>& acts) {
  acts.resize(layers.size() + 1);
  acts[0].assign(x, x + layers.front().in);
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const DenseLayer& l = layers[li];
    const bool hidden = li + 1 < layers.size();
    auto& out = acts[li + 1];
    out.resize(l.out);
    const auto& in = acts[li];
    for (std::size_t o = 0; o < l.out; ++o) {
      double s = l.biases[o];
      const double* w = l.weights.data() + o * l.in;
      for (std::size_t i = 0; i < l.in; ++i) s += w[i] * in[i];
      out[o] = hidden ? std::max(0.0, s) : s;
    }
  }
}

/// Accumulates d(seed . output)/d(params) into grad (parameters() order).
void backprop(const std::vector<DenseLayer>& layers, const std::vector<std::vector<double>>& acts,
              std::vector<double> delta, double* grad, const std::vector<std::size_t>& offsets) {
  for (std::size_t li = layers.size(); li-- > 0;) {
    const DenseLayer& l = layers[li];
    const auto& in = acts[li];
    double* gw = grad + offsets[li];
    double* gb = gw + l.weights.size();
    for (std::size_t o = 0; o < l.out; ++o) {
      const double g = delta[o];
      if (g == 0.0) continue;
      gb[o] += g;
      double* row = gw + o * l.in;
      for (std::size_t i = 0; i < l.in; ++i) row[i] += g * in[i];
    }
    if (li == 0) break;
    std::vector<double> prev(l.in, 0.0);
    for (std::size_t o = 0; o < l.out; ++o) {
      const double g = delta[o];
      if (g == 0.0) continue;
      const double* w = l.weights.data() + o * l.in;
      for (std::size_t i = 0; i < l.in; ++i) prev[i] += g * w[i];
    }
    // ReLU derivative taken as 0 at the kink.
    for (std::size_t i = 0; i < l.in; ++i)
      if (!(in[i] > 0.0)) prev[i] = 0.0;
    delta.swap(prev);
  }
}

std::vector<std::size_t> param_offsets(const std::vector<DenseLayer>& layers) {
  std::vector<std::size_t> off;
  std::size_t k = 0;
  for (const DenseLayer& l : layers) {
    off.push_back(k);
    k += l.weights.size() + l.biases.size();
  }
  return off;
}

}  // namespace

double Mlp::loss(std::span<const double> inputs, std::span<const double> targets,
                 std::vector<double>* grad) const {
  const std::size_t ni = this->inputs();
  const std::size_t no = outputs();
  if (inputs.size() % ni != 0 || targets.size() != (inputs.size() / ni) * no)
    throw std::invalid_argument("Mlp::loss: batch shape mismatch");
  const std::size_t n = inputs.size() / ni;
  if (n == 0) throw std::invalid_argument("Mlp::loss: empty batch");

  if (grad) grad->assign(parameter_count(), 0.0);
  const auto offsets = param_offsets(layers_);
  const double scale = 1.0 / static_cast<double>(n * no);

  std::vector<std::vector<double>> acts;
  double sum = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    forward_trace(layers_, inputs.data() + s * ni, acts);
    const auto& y = acts.back();
    std::vector<double> delta(no);
    for (std::size_t o = 0; o < no; ++o) {
      const double r = y[o] - targets[s * no + o];
      sum += r * r;
      delta[o] = 2.0 * r * scale;
    }
    if (grad) backprop(layers_, acts, std::move(delta), grad->data(), offsets);
  }
  return sum * scale;
}

std::vector<double> Mlp::jacobian(std::span<const double> inputs) const {
  const std::size_t ni = this->inputs();
  const std::size_t no = outputs();
  if (inputs.size() % ni != 0) throw std::invalid_argument("Mlp::jacobian: input shape mismatch");
  const std::size_t n = inputs.size() / ni;
  const std::size_t np = parameter_count();
  const auto offsets = param_offsets(layers_);

  std::vector<double> jac(n * no * np, 0.0);
  std::vector<std::vector<double>> acts;
  for (std::size_t s = 0; s < n; ++s) {
    forward_trace(layers_, inputs.data() + s * ni, acts);
    for (std::size_t o = 0; o < no; ++o) {
      std::vector<double> seed(no, 0.0);
      seed[o] = 1.0;
      backprop(layers_, acts, std::move(seed), jac.data() + (s * no + o) * np, offsets);
    }
  }
  return jac;
}

}  // namespace nrgate
