#include "theia/shape_inference.hpp"

#include <functional>
#include <numeric>

namespace theia {

namespace {

// Expands a per-axis hyper-parameter: a single value applies to every axis.
std::optional<std::vector<std::int64_t>> per_axis(const std::optional<std::vector<std::int64_t>>& values,
                                                  std::size_t axes) {
  if (!values || values->empty()) return std::nullopt;
  if (values->size() == 1) return std::vector<std::int64_t>(axes, values->front());
  if (values->size() != axes) return std::nullopt;
  return *values;
}

Shape sliding_window(const std::vector<std::int64_t>& in, std::size_t spatial_axes,
                     const std::vector<std::int64_t>& window, const std::vector<std::int64_t>& stride,
                     Padding padding, std::int64_t out_channels) {
  std::vector<std::int64_t> out;
  out.reserve(spatial_axes + 1);
  for (std::size_t a = 0; a < spatial_axes; ++a) {
    auto len = window_output_length(in[a], window[a], stride[a], padding);
    if (!len) return std::nullopt;
    out.push_back(*len);
  }
  out.push_back(out_channels);
  return out;
}

std::size_t spatial_rank(LayerKind k) {
  switch (k) {
    case LayerKind::conv1d:
    case LayerKind::maxpooling1d:
    case LayerKind::averagepooling1d:
      return 1;
    default:
      return 2;
  }
}

Shape propagate(const LayerSpec& layer, const std::vector<std::int64_t>& in) {
  switch (layer.kind.kind) {
    case LayerKind::conv1d:
    case LayerKind::conv2d: {
      const std::size_t axes = spatial_rank(layer.kind.kind);
      if (in.size() != axes + 1) return std::nullopt;
      auto kernel = per_axis(layer.kernel_size, axes);
      if (!kernel) return std::nullopt;
      auto stride = per_axis(layer.strides, axes).value_or(std::vector<std::int64_t>(axes, 1));
      return sliding_window(in, axes, *kernel, stride, layer.padding.value_or(Padding::valid), *layer.filters);
    }
    case LayerKind::maxpooling1d:
    case LayerKind::maxpooling2d:
    case LayerKind::averagepooling1d:
    case LayerKind::averagepooling2d: {
      const std::size_t axes = spatial_rank(layer.kind.kind);
      if (in.size() != axes + 1) return std::nullopt;
      // Keras defaults: pool 2 per axis, stride equal to the pool size.
      auto pool = per_axis(layer.pool_size, axes).value_or(std::vector<std::int64_t>(axes, 2));
      auto stride = per_axis(layer.strides, axes).value_or(pool);
      return sliding_window(in, axes, pool, stride, layer.padding.value_or(Padding::valid), in.back());
    }
    case LayerKind::flatten:
      return std::vector<std::int64_t>{
          std::accumulate(in.begin(), in.end(), std::int64_t{1}, std::multiplies<>{})};
    case LayerKind::dense: {
      // Applied to the last axis.
      std::vector<std::int64_t> out = in;
      out.back() = *layer.units;
      return out;
    }
    case LayerKind::dropout:
    case LayerKind::batch_normalization:
    case LayerKind::activation:
      return in;
    case LayerKind::other:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::int64_t> window_output_length(std::int64_t input, std::int64_t window,
                                                 std::int64_t stride, Padding padding) {
  if (input < 1 || window < 1 || stride < 1) return std::nullopt;
  if (padding == Padding::same) return (input + stride - 1) / stride;
  if (input < window) return std::nullopt;
  return (input - window) / stride + 1;
}

std::vector<Shape> infer_shapes(const ModelSpec& spec) {
  std::vector<Shape> shapes;
  shapes.reserve(spec.layers.size());
  Shape current;
  if (!spec.dataset.input_shape.empty()) current = spec.dataset.input_shape;
  for (const LayerSpec& layer : spec.layers) {
    if (current) current = propagate(layer, *current);
    shapes.push_back(current);
  }
  return shapes;
}

Shape input_shape_of(const ModelSpec& spec, const std::vector<Shape>& shapes, std::size_t index) {
  if (index == 0) {
    if (spec.dataset.input_shape.empty()) return std::nullopt;
    return spec.dataset.input_shape;
  }
  return shapes.at(index - 1);
}

}  // namespace theia
