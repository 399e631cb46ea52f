#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "arv/tensor.hpp"

namespace arv {

/// Argmax locations recorded by a max-pool forward pass. Each pooled cell
/// stores the flat index (into the pre-pool CxHxW tensor) of the element
/// that won its window; unpooling routes responses back through exactly
/// these positions.
struct SwitchRecord {
  std::vector<std::size_t> input_shape;   // pre-pool CxHxW
  std::vector<std::size_t> pooled_shape;  // CxHpxWp
  std::size_t window = 0;
  std::size_t stride = 0;
  std::vector<std::size_t> indices;       // one per pooled cell, row-major
};

/// Per-window maximum over each channel. Ties go to the first element in
/// row-major window order, so the switches are deterministic.
std::pair<Tensor, SwitchRecord> maxpool_forward(const Tensor& input,
                                                std::size_t window,
                                                std::size_t stride);

/// Scatters a pooled-shape response back through the recorded switches:
/// zero everywhere except the switch positions. Windows that share a winner
/// (overlapping pools) have their contributions summed.
Tensor unpool(const Tensor& response, const SwitchRecord& switches);

}  // namespace arv
