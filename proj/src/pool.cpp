#include "arv/pool.hpp"

#include "arv/errors.hpp"

namespace arv {

std::pair<Tensor, SwitchRecord> maxpool_forward(const Tensor& input,
                                                std::size_t window,
                                                std::size_t stride) {
  if (input.rank() != 3) {
    throw ShapeError("maxpool: expected CxHxW input, got shape " +
                     shape_string(input.shape()));
  }
  if (window < 1 || stride < 1) {
    throw ValueError("maxpool: window and stride must be >= 1, got window " +
                     std::to_string(window) + " stride " +
                     std::to_string(stride));
  }
  const std::size_t ch = input.extent(0);
  const std::size_t in_h = input.extent(1);
  const std::size_t in_w = input.extent(2);
  if (window > in_h || window > in_w) {
    throw ShapeError("maxpool: window " + std::to_string(window) +
                     " larger than input " + std::to_string(in_h) + "x" +
                     std::to_string(in_w));
  }
  const std::size_t out_h = (in_h - window) / stride + 1;
  const std::size_t out_w = (in_w - window) / stride + 1;

  Tensor pooled({ch, out_h, out_w});
  SwitchRecord rec;
  rec.input_shape = input.shape();
  rec.pooled_shape = pooled.shape();
  rec.window = window;
  rec.stride = stride;
  rec.indices.resize(pooled.size());

  const double* src = input.data();
  std::size_t cell = 0;
  for (std::size_t c = 0; c < ch; ++c) {
    const std::size_t plane = c * in_h * in_w;
    for (std::size_t oh = 0; oh < out_h; ++oh) {
      for (std::size_t ow = 0; ow < out_w; ++ow) {
        const std::size_t h0 = oh * stride;
        const std::size_t w0 = ow * stride;
        std::size_t best = plane + h0 * in_w + w0;
        double best_v = src[best];
        for (std::size_t ky = 0; ky < window; ++ky) {
          const std::size_t row = plane + (h0 + ky) * in_w + w0;
          for (std::size_t kx = 0; kx < window; ++kx) {
            if (src[row + kx] > best_v) {
              best_v = src[row + kx];
              best = row + kx;
            }
          }
        }
        pooled[cell] = best_v;
        rec.indices[cell] = best;
        ++cell;
      }
    }
  }
  return {std::move(pooled), std::move(rec)};
}

Tensor unpool(const Tensor& response, const SwitchRecord& switches) {
  if (response.shape() != switches.pooled_shape) {
    throw ShapeError("unpool: response shape " +
                     shape_string(response.shape()) + " vs pooled shape " +
                     shape_string(switches.pooled_shape));
  }
  if (switches.indices.size() != response.size()) {
    throw ShapeError("unpool: switch record has " +
                     std::to_string(switches.indices.size()) +
                     " indices for " + std::to_string(response.size()) +
                     " pooled cells");
  }
  Tensor out(switches.input_shape);
  const std::size_t limit = out.size();
  for (std::size_t i = 0; i < response.size(); ++i) {
    const std::size_t idx = switches.indices[i];
    if (idx >= limit) {
      throw ValueError("unpool: corrupt switch record, index " +
                       std::to_string(idx) + " outside input of size " +
                       std::to_string(limit));
    }
    out[idx] += response[i];
  }
  return out;
}

}  // namespace arv
