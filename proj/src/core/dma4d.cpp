#include "core/dma4d.hpp"

namespace hpdp {

void Dma4dDescriptor::check() const {
  if (base < 0) fail(errc::invalid_arg, "dma: base must be non-negative");
  for (const auto& l : levels)
    if (l.count < 1) fail(errc::invalid_arg, "dma: level count must be >= 1");
}

AddrBounds address_bounds(const Dma4dDescriptor& d) {
  AddrBounds b{d.base, d.base};
  for (const auto& l : d.levels) {
    int64_t span = (l.count - 1) * l.stride;
    b.min += std::min<int64_t>(span, 0);
    b.max += std::max<int64_t>(span, 0);
  }
  return b;
}

void validate_descriptor(const Dma4dDescriptor& d, AddrRegion region) {
  d.check();
  AddrBounds b = address_bounds(d);
  if (b.min < region.begin || b.max >= region.end) {
    fail(errc::validation,
         "dma: address range [" + std::to_string(b.min) + ", " + std::to_string(b.max) +
             "] escapes region [" + std::to_string(region.begin) + ", " +
             std::to_string(region.end) + ") (base=" + std::to_string(d.base) + " l3=" +
             std::to_string(d.levels[0].count) + ":" + std::to_string(d.levels[0].stride) +
             " l2=" + std::to_string(d.levels[1].count) + ":" +
             std::to_string(d.levels[1].stride) + " l1=" + std::to_string(d.levels[2].count) +
             ":" + std::to_string(d.levels[2].stride) + " l0=" +
             std::to_string(d.levels[3].count) + ":" + std::to_string(d.levels[3].stride) + ")");
  }
}

void for_each_address(const Dma4dDescriptor& d, const std::function<void(int64_t)>& fn) {
  d.check();
  for (int64_t i3 = 0; i3 < d.levels[0].count; ++i3)
    for (int64_t i2 = 0; i2 < d.levels[1].count; ++i2)
      for (int64_t i1 = 0; i1 < d.levels[2].count; ++i1)
        for (int64_t i0 = 0; i0 < d.levels[3].count; ++i0)
          fn(d.base + i3 * d.levels[0].stride + i2 * d.levels[1].stride +
             i1 * d.levels[2].stride + i0 * d.levels[3].stride);
}

std::vector<int64_t> addresses(const Dma4dDescriptor& d) {
  std::vector<int64_t> out;
  out.reserve(size_t(d.total()));
  for_each_address(d, [&](int64_t a) { out.push_back(a); });
  return out;
}

AddrStream::AddrStream(std::vector<Dma4dDescriptor> descs) : descs_(std::move(descs)) {
  for (const auto& d : descs_) {
    d.check();
    total_ += d.total();
  }
}

bool AddrStream::next(int64_t& addr) {
  while (di_ < descs_.size()) {
    const Dma4dDescriptor& d = descs_[di_];
    if (fresh_) {
      idx_ = {0, 0, 0, 0};
      fresh_ = false;
    } else {
      // advance innermost-first
      int lvl = 3;
      for (; lvl >= 0; --lvl) {
        if (++idx_[lvl] < d.levels[lvl].count) break;
        idx_[lvl] = 0;
      }
      if (lvl < 0) {
        ++di_;
        fresh_ = true;
        continue;
      }
    }
    addr = d.base;
    for (int i = 0; i < 4; ++i) addr += idx_[i] * d.levels[i].stride;
    return true;
  }
  return false;
}

std::vector<Dma4dDescriptor> conv_input_descriptors(const ConvLayerSpec& spec, TileRect tile,
                                                    int frame_w, int frame_y0, int frame_x0) {
  const ConvGeometry g = ConvGeometry::of(spec);
  if (tile.y0 < 0 || tile.x0 < 0 || tile.h < 1 || tile.w < 1 || tile.y0 + tile.h > g.out_h ||
      tile.x0 + tile.w > g.out_w)
    fail(errc::invalid_arg, "conv_input_descriptors: tile outside output dims");

  const int64_t c = spec.c;
  const int64_t row_words = int64_t(frame_w) * c;
  auto window_base = [&](int oy, int ox) {
    return (int64_t(oy * spec.stride - frame_y0) * frame_w + (ox * spec.stride - frame_x0)) * c;
  };

  std::vector<Dma4dDescriptor> out;
  if (spec.r == 1 && spec.s == 1) {
    // Raster-order consumption collapses to a single descriptor.
    Dma4dDescriptor d;
    d.base = window_base(tile.y0, tile.x0);
    d.levels[0] = {1, 0};
    d.levels[1] = {tile.h, int64_t(spec.stride) * row_words};
    d.levels[2] = {tile.w, int64_t(spec.stride) * c};
    d.levels[3] = {c, 1};
    out.push_back(d);
    return out;
  }

  out.reserve(size_t(tile.h));
  for (int oy = tile.y0; oy < tile.y0 + tile.h; ++oy) {
    Dma4dDescriptor d;
    d.base = window_base(oy, tile.x0);
    d.levels[0] = {tile.w, int64_t(spec.stride) * c}; // output column
    d.levels[1] = {spec.r, row_words};                // kernel row
    d.levels[2] = {spec.s, c};                        // kernel column
    d.levels[3] = {c, 1};                             // channel
    out.push_back(d);
  }
  return out;
}

std::vector<Dma4dDescriptor> conv_input_descriptors(const ConvLayerSpec& spec) {
  const ConvGeometry g = ConvGeometry::of(spec);
  return conv_input_descriptors(spec, TileRect{0, 0, g.out_h, g.out_w}, g.padded_w, 0, 0);
}

} // namespace hpdp
