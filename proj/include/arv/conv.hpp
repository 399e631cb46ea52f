#pragma once

#include <array>
#include <cstddef>

#include "arv/tensor.hpp"

namespace arv {

/// Parameters of a 2-d convolution layer. The kernel is laid out
/// (out_channels, in_channels, kh, kw); padding is symmetric zero padding.
struct ConvParams {
  Tensor kernel;
  Tensor bias;
  std::size_t stride = 1;
  std::size_t zero_padding = 0;

  std::size_t out_channels() const { return kernel.extent(0); }
  std::size_t in_channels() const { return kernel.extent(1); }
  std::size_t kernel_h() const { return kernel.extent(2); }
  std::size_t kernel_w() const { return kernel.extent(3); }

  void validate() const;

  /// Output shape (out_channels, out_h, out_w) for a CxHxW input.
  std::array<std::size_t, 3> output_shape(
      const std::vector<std::size_t>& input_shape) const;
};

/// Cross-correlation with bias. Input and output are CxHxW.
Tensor conv2d_forward(const Tensor& input, const ConvParams& params);

/// Exact linear adjoint of conv2d_forward (fractionally strided convolution).
/// Maps a response of the forward output shape back to the input shape.
/// Bias is not applied.
///
/// With stride > 1 several input extents can map to the same output extent;
/// the two-argument form picks the canonical one,
/// in = (out - 1) * stride + k - 2 * pad. Pass the extents explicitly when
/// the original input shape matters.
Tensor conv2d_transpose(const Tensor& response, const ConvParams& params);
Tensor conv2d_transpose(const Tensor& response, const ConvParams& params,
                        std::size_t input_h, std::size_t input_w);

struct ConvGrads {
  Tensor kernel;
  Tensor bias;
  Tensor input;
};

/// Gradients of sum(upstream * conv2d_forward(input)) with respect to the
/// kernel, the bias, and the input.
ConvGrads conv2d_grad(const Tensor& input, const ConvParams& params,
                      const Tensor& upstream);

}  // namespace arv
