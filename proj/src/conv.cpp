#include "arv/conv.hpp"

#include <Eigen/Dense>
#include <vector>

#include "arv/errors.hpp"

namespace arv {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ColMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

// Gathers receptive fields into a (in_ch*kh*kw) x (out_h*out_w) column-major
// buffer. Out-of-image taps read zero.
void im2col(const Tensor& input, const ConvParams& p, std::size_t out_h,
            std::size_t out_w, double* col) {
  const std::size_t in_ch = input.extent(0);
  const std::size_t in_h = input.extent(1);
  const std::size_t in_w = input.extent(2);
  const std::size_t kh = p.kernel_h();
  const std::size_t kw = p.kernel_w();
  const long pad = static_cast<long>(p.zero_padding);
  const double* src = input.data();

  std::size_t colpos = 0;
  for (std::size_t oh = 0; oh < out_h; ++oh) {
    for (std::size_t ow = 0; ow < out_w; ++ow) {
      const long h0 = static_cast<long>(oh * p.stride) - pad;
      const long w0 = static_cast<long>(ow * p.stride) - pad;
      double* column = col + colpos;
      colpos += in_ch * kh * kw;
      std::size_t r = 0;
      for (std::size_t ic = 0; ic < in_ch; ++ic) {
        const double* plane = src + ic * in_h * in_w;
        for (std::size_t ky = 0; ky < kh; ++ky) {
          const long ih = h0 + static_cast<long>(ky);
          if (ih < 0 || ih >= static_cast<long>(in_h)) {
            for (std::size_t kx = 0; kx < kw; ++kx) column[r++] = 0.0;
            continue;
          }
          const double* row = plane + static_cast<std::size_t>(ih) * in_w;
          for (std::size_t kx = 0; kx < kw; ++kx) {
            const long iw = w0 + static_cast<long>(kx);
            column[r++] = (iw < 0 || iw >= static_cast<long>(in_w))
                              ? 0.0
                              : row[static_cast<std::size_t>(iw)];
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatter-adds columns back into the image.
void col2im_add(const double* col, const ConvParams& p, std::size_t out_h,
                std::size_t out_w, Tensor& image) {
  const std::size_t in_ch = image.extent(0);
  const std::size_t in_h = image.extent(1);
  const std::size_t in_w = image.extent(2);
  const std::size_t kh = p.kernel_h();
  const std::size_t kw = p.kernel_w();
  const long pad = static_cast<long>(p.zero_padding);
  double* dst = image.data();

  std::size_t colpos = 0;
  for (std::size_t oh = 0; oh < out_h; ++oh) {
    for (std::size_t ow = 0; ow < out_w; ++ow) {
      const long h0 = static_cast<long>(oh * p.stride) - pad;
      const long w0 = static_cast<long>(ow * p.stride) - pad;
      const double* column = col + colpos;
      colpos += in_ch * kh * kw;
      std::size_t r = 0;
      for (std::size_t ic = 0; ic < in_ch; ++ic) {
        double* plane = dst + ic * in_h * in_w;
        for (std::size_t ky = 0; ky < kh; ++ky) {
          const long ih = h0 + static_cast<long>(ky);
          if (ih < 0 || ih >= static_cast<long>(in_h)) {
            r += kw;
            continue;
          }
          double* row = plane + static_cast<std::size_t>(ih) * in_w;
          for (std::size_t kx = 0; kx < kw; ++kx) {
            const long iw = w0 + static_cast<long>(kx);
            if (iw >= 0 && iw < static_cast<long>(in_w))
              row[static_cast<std::size_t>(iw)] += column[r];
            ++r;
          }
        }
      }
    }
  }
}

void check_input_rank(const Tensor& t, const char* op) {
  if (t.rank() != 3) {
    throw ShapeError(std::string(op) + ": expected CxHxW input, got shape " +
                     shape_string(t.shape()));
  }
}

}  // namespace

void ConvParams::validate() const {
  if (kernel.rank() != 4) {
    throw ShapeError("conv params: kernel must be OxIxKhxKw, got shape " +
                     shape_string(kernel.shape()));
  }
  if (kernel_h() < 1 || kernel_w() < 1) {
    throw ShapeError("conv params: kernel extents must be >= 1, got " +
                     shape_string(kernel.shape()));
  }
  if (stride < 1) {
    throw ValueError("conv params: stride must be >= 1, got " +
                     std::to_string(stride));
  }
  if (bias.rank() != 1 || bias.extent(0) != out_channels()) {
    throw ShapeError("conv params: bias extent " +
                     shape_string(bias.shape()) + " vs out_channels " +
                     std::to_string(out_channels()));
  }
}

std::array<std::size_t, 3> ConvParams::output_shape(
    const std::vector<std::size_t>& input_shape) const {
  if (input_shape.size() != 3) {
    throw ShapeError("conv: expected CxHxW input, got shape " +
                     shape_string(input_shape));
  }
  if (input_shape[0] != in_channels()) {
    throw ShapeError("conv: input channels " + std::to_string(input_shape[0]) +
                     " vs kernel in_channels " + std::to_string(in_channels()));
  }
  const std::size_t padded_h = input_shape[1] + 2 * zero_padding;
  const std::size_t padded_w = input_shape[2] + 2 * zero_padding;
  if (padded_h < kernel_h() || padded_w < kernel_w()) {
    throw ShapeError("conv: padded input " + std::to_string(padded_h) + "x" +
                     std::to_string(padded_w) + " smaller than kernel " +
                     std::to_string(kernel_h()) + "x" +
                     std::to_string(kernel_w()));
  }
  return {out_channels(), (padded_h - kernel_h()) / stride + 1,
          (padded_w - kernel_w()) / stride + 1};
}

Tensor conv2d_forward(const Tensor& input, const ConvParams& p) {
  check_input_rank(input, "conv2d_forward");
  p.validate();
  const auto out_shape = p.output_shape(input.shape());
  const std::size_t out_ch = out_shape[0];
  const std::size_t out_h = out_shape[1];
  const std::size_t out_w = out_shape[2];
  const std::size_t k = p.in_channels() * p.kernel_h() * p.kernel_w();
  const std::size_t positions = out_h * out_w;

  std::vector<double> col(k * positions);
  im2col(input, p, out_h, out_w, col.data());

  Tensor out({out_ch, out_h, out_w});
  Eigen::Map<const RowMat> w(p.kernel.data(), static_cast<Eigen::Index>(out_ch),
                             static_cast<Eigen::Index>(k));
  Eigen::Map<const ColMat> cols(col.data(), static_cast<Eigen::Index>(k),
                                static_cast<Eigen::Index>(positions));
  Eigen::Map<RowMat> y(out.data(), static_cast<Eigen::Index>(out_ch),
                       static_cast<Eigen::Index>(positions));
  y.noalias() = w * cols;
  for (std::size_t o = 0; o < out_ch; ++o) {
    const double b = p.bias[o];
    double* row = out.data() + o * positions;
    for (std::size_t i = 0; i < positions; ++i) row[i] += b;
  }
  return out;
}

Tensor conv2d_transpose(const Tensor& response, const ConvParams& p) {
  check_input_rank(response, "conv2d_transpose");
  p.validate();
  const std::size_t out_h = response.extent(1);
  const std::size_t out_w = response.extent(2);
  const long in_h = static_cast<long>((out_h - 1) * p.stride + p.kernel_h()) -
                    2 * static_cast<long>(p.zero_padding);
  const long in_w = static_cast<long>((out_w - 1) * p.stride + p.kernel_w()) -
                    2 * static_cast<long>(p.zero_padding);
  if (in_h < 1 || in_w < 1) {
    throw ShapeError("conv2d_transpose: response shape " +
                     shape_string(response.shape()) +
                     " implies empty input for kernel " +
                     shape_string(p.kernel.shape()));
  }
  return conv2d_transpose(response, p, static_cast<std::size_t>(in_h),
                          static_cast<std::size_t>(in_w));
}

Tensor conv2d_transpose(const Tensor& response, const ConvParams& p,
                        std::size_t input_h, std::size_t input_w) {
  check_input_rank(response, "conv2d_transpose");
  p.validate();
  if (response.extent(0) != p.out_channels()) {
    throw ShapeError("conv2d_transpose: response channels " +
                     std::to_string(response.extent(0)) +
                     " vs kernel out_channels " +
                     std::to_string(p.out_channels()));
  }
  const auto expected =
      p.output_shape({p.in_channels(), input_h, input_w});
  if (response.extent(1) != expected[1] || response.extent(2) != expected[2]) {
    throw ShapeError("conv2d_transpose: response shape " +
                     shape_string(response.shape()) +
                     " vs forward output " + std::to_string(expected[0]) +
                     "x" + std::to_string(expected[1]) + "x" +
                     std::to_string(expected[2]) + " for input " +
                     std::to_string(input_h) + "x" + std::to_string(input_w));
  }
  const std::size_t out_h = response.extent(1);
  const std::size_t out_w = response.extent(2);
  const std::size_t k = p.in_channels() * p.kernel_h() * p.kernel_w();
  const std::size_t positions = out_h * out_w;
  Eigen::Map<const RowMat> w(p.kernel.data(),
                             static_cast<Eigen::Index>(p.out_channels()),
                             static_cast<Eigen::Index>(k));
  Eigen::Map<const RowMat> r(response.data(),
                             static_cast<Eigen::Index>(p.out_channels()),
                             static_cast<Eigen::Index>(positions));
  ColMat col(static_cast<Eigen::Index>(k),
             static_cast<Eigen::Index>(positions));
  col.noalias() = w.transpose() * r;

  Tensor image({p.in_channels(), input_h, input_w});
  col2im_add(col.data(), p, out_h, out_w, image);
  return image;
}

ConvGrads conv2d_grad(const Tensor& input, const ConvParams& p,
                      const Tensor& upstream) {
  check_input_rank(input, "conv2d_grad");
  p.validate();
  const auto out_shape = p.output_shape(input.shape());
  if (upstream.rank() != 3 || upstream.extent(0) != out_shape[0] ||
      upstream.extent(1) != out_shape[1] || upstream.extent(2) != out_shape[2]) {
    throw ShapeError("conv2d_grad: upstream shape " +
                     shape_string(upstream.shape()) + " vs forward output " +
                     std::to_string(out_shape[0]) + "x" +
                     std::to_string(out_shape[1]) + "x" +
                     std::to_string(out_shape[2]));
  }
  const std::size_t out_ch = out_shape[0];
  const std::size_t positions = out_shape[1] * out_shape[2];
  const std::size_t k = p.in_channels() * p.kernel_h() * p.kernel_w();

  ConvGrads grads;
  grads.bias = Tensor({out_ch});
  for (std::size_t o = 0; o < out_ch; ++o) {
    const double* row = upstream.data() + o * positions;
    double s = 0.0;
    for (std::size_t i = 0; i < positions; ++i) s += row[i];
    grads.bias[o] = s;
  }

  std::vector<double> col(k * positions);
  im2col(input, p, out_shape[1], out_shape[2], col.data());
  grads.kernel = Tensor(p.kernel.shape());
  Eigen::Map<const RowMat> u(upstream.data(), static_cast<Eigen::Index>(out_ch),
                             static_cast<Eigen::Index>(positions));
  Eigen::Map<const ColMat> cols(col.data(), static_cast<Eigen::Index>(k),
                                static_cast<Eigen::Index>(positions));
  Eigen::Map<RowMat> gk(grads.kernel.data(), static_cast<Eigen::Index>(out_ch),
                        static_cast<Eigen::Index>(k));
  gk.noalias() = u * cols.transpose();

  grads.input =
      conv2d_transpose(upstream, p, input.extent(1), input.extent(2));
  return grads;
}

}  // namespace arv
