#include "arv/layers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "arv/errors.hpp"

namespace arv {

namespace {
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_label(const Tensor& probs, std::size_t label, const char* op) {
  if (label >= probs.size()) {
    throw ValueError(std::string(op) + ": label " + std::to_string(label) +
                     " out of range for " + std::to_string(probs.size()) +
                     " classes");
  }
}
}  // namespace

Tensor relu_forward(const Tensor& input) {
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i)
    out[i] = input[i] > 0.0 ? input[i] : 0.0;
  return out;
}

Tensor relu_grad(const Tensor& input, const Tensor& upstream) {
  if (!input.same_shape(upstream)) {
    throw ShapeError("relu_grad: input shape " + shape_string(input.shape()) +
                     " vs upstream shape " + shape_string(upstream.shape()));
  }
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i)
    out[i] = input[i] > 0.0 ? upstream[i] : 0.0;
  return out;
}

Tensor dense_forward(const Tensor& input, const Tensor& weights,
                     const Tensor& bias) {
  if (weights.rank() != 2) {
    throw ShapeError("dense: weights must be OxI, got shape " +
                     shape_string(weights.shape()));
  }
  const std::size_t out_n = weights.extent(0);
  const std::size_t in_n = weights.extent(1);
  if (input.size() != in_n) {
    throw ShapeError("dense: input size " + std::to_string(input.size()) +
                     " vs weights in extent " + std::to_string(in_n));
  }
  if (bias.size() != out_n) {
    throw ShapeError("dense: bias size " + std::to_string(bias.size()) +
                     " vs weights out extent " + std::to_string(out_n));
  }
  Tensor out({out_n});
  Eigen::Map<const RowMat> w(weights.data(), static_cast<Eigen::Index>(out_n),
                             static_cast<Eigen::Index>(in_n));
  Eigen::Map<const Eigen::VectorXd> x(input.data(),
                                      static_cast<Eigen::Index>(in_n));
  Eigen::Map<const Eigen::VectorXd> b(bias.data(),
                                      static_cast<Eigen::Index>(out_n));
  Eigen::Map<Eigen::VectorXd> y(out.data(), static_cast<Eigen::Index>(out_n));
  y.noalias() = w * x + b;
  return out;
}

DenseGrads dense_grad(const Tensor& input, const Tensor& weights,
                      const Tensor& upstream) {
  const std::size_t out_n = weights.extent(0);
  const std::size_t in_n = weights.extent(1);
  if (upstream.size() != out_n) {
    throw ShapeError("dense_grad: upstream size " +
                     std::to_string(upstream.size()) +
                     " vs weights out extent " + std::to_string(out_n));
  }
  if (input.size() != in_n) {
    throw ShapeError("dense_grad: input size " + std::to_string(input.size()) +
                     " vs weights in extent " + std::to_string(in_n));
  }
  DenseGrads g;
  g.bias = upstream;
  g.weights = Tensor({out_n, in_n});
  g.input = Tensor(input.shape());
  Eigen::Map<const RowMat> w(weights.data(), static_cast<Eigen::Index>(out_n),
                             static_cast<Eigen::Index>(in_n));
  Eigen::Map<const Eigen::VectorXd> u(upstream.data(),
                                      static_cast<Eigen::Index>(out_n));
  Eigen::Map<const Eigen::VectorXd> x(input.data(),
                                      static_cast<Eigen::Index>(in_n));
  Eigen::Map<RowMat> gw(g.weights.data(), static_cast<Eigen::Index>(out_n),
                        static_cast<Eigen::Index>(in_n));
  Eigen::Map<Eigen::VectorXd> gx(g.input.data(),
                                 static_cast<Eigen::Index>(in_n));
  gw.noalias() = u * x.transpose();
  gx.noalias() = w.transpose() * u;
  return g;
}

Tensor softmax(const Tensor& logits) {
  if (logits.empty()) throw ShapeError("softmax: empty input");
  Tensor out(logits.shape());
  double m = logits[0];
  for (std::size_t i = 1; i < logits.size(); ++i) m = std::max(m, logits[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] /= sum;
  return out;
}

double cross_entropy(const Tensor& probs, std::size_t label) {
  check_label(probs, label, "cross_entropy");
  const double p = std::clamp(probs[label], 1e-300, 1.0);
  return -std::log(p);
}

Tensor softmax_ce_grad(const Tensor& probs, std::size_t label) {
  check_label(probs, label, "softmax_ce_grad");
  Tensor g = probs;
  g[label] -= 1.0;
  return g;
}

}  // namespace arv
