#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "theia/model_spec.hpp"

namespace theia {

// Per-sample tensor shape, channels last. nullopt means the shape could not
// be derived.
using Shape = std::optional<std::vector<std::int64_t>>;

// One output shape per layer, propagated from dataset.input_shape.
// Best-effort: missing hyper-parameters, unsupported layer kinds or
// geometrically impossible windows yield nullopt, and nullopt propagates to
// every later layer. Never throws.
std::vector<Shape> infer_shapes(const ModelSpec& spec);

// Shape fed into layer `index` (the dataset input shape for layer 0).
Shape input_shape_of(const ModelSpec& spec, const std::vector<Shape>& shapes, std::size_t index);

// Length of one spatial axis after a sliding window. nullopt when the window
// does not fit under valid padding.
std::optional<std::int64_t> window_output_length(std::int64_t input, std::int64_t window,
                                                 std::int64_t stride, Padding padding);

}  // namespace theia
