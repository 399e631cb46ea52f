#pragma once

#include <cstddef>

#include "arv/tensor.hpp"

namespace arv {

Tensor relu_forward(const Tensor& input);

/// upstream masked by (input > 0).
Tensor relu_grad(const Tensor& input, const Tensor& upstream);

/// Fully connected layer: y = W x + b. weights is (out x in); any input
/// tensor is treated as a flat vector of length in.
Tensor dense_forward(const Tensor& input, const Tensor& weights,
                     const Tensor& bias);

struct DenseGrads {
  Tensor weights;
  Tensor bias;
  Tensor input;
};

DenseGrads dense_grad(const Tensor& input, const Tensor& weights,
                      const Tensor& upstream);

/// Numerically stable softmax; outputs sum to 1 within 1e-12.
Tensor softmax(const Tensor& logits);

/// -log(probs[label]); never returns non-finite values.
double cross_entropy(const Tensor& probs, std::size_t label);

/// Gradient of cross_entropy(softmax(logits), label) w.r.t. the logits.
Tensor softmax_ce_grad(const Tensor& probs, std::size_t label);

}  // namespace arv
