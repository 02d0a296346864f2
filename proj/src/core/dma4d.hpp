#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "core/qtensor.hpp"

namespace hpdp {

struct DmaLevel {
  int64_t count = 1;  // >= 1
  int64_t stride = 0; // signed, word units
};

// Four nested (count, stride) loops around a base word address, outermost
// first; the innermost index runs fastest.
struct Dma4dDescriptor {
  int64_t base = 0;
  std::array<DmaLevel, 4> levels{};

  int64_t total() const {
    return levels[0].count * levels[1].count * levels[2].count * levels[3].count;
  }
  void check() const;
};

struct AddrRegion {
  int64_t begin = 0;
  int64_t end = 0; // exclusive
};

// Analytic address bounds: each level contributes min/max(0, (count-1)*stride)
// independently, so no enumeration is needed.
struct AddrBounds {
  int64_t min = 0;
  int64_t max = 0;
};
AddrBounds address_bounds(const Dma4dDescriptor& d);

// Throws errc::validation naming the offending loop limits if any generated
// address can fall outside the region.
void validate_descriptor(const Dma4dDescriptor& d, AddrRegion region);

// Streams every generated address in order without materializing the sequence.
void for_each_address(const Dma4dDescriptor& d, const std::function<void(int64_t)>& fn);

std::vector<int64_t> addresses(const Dma4dDescriptor& d);

// Restartable lazy cursor over a descriptor list.
class AddrStream {
public:
  explicit AddrStream(std::vector<Dma4dDescriptor> descs);
  bool next(int64_t& addr);
  int64_t total() const { return total_; }

private:
  std::vector<Dma4dDescriptor> descs_;
  size_t di_ = 0;
  std::array<int64_t, 4> idx_{};
  bool fresh_ = true;
  int64_t total_ = 0;
};

// Output-stationary gather order for the mapped convolution: for each output
// row (one descriptor per row, or a single merged descriptor for 1x1 kernels)
// the stream walks output column, kernel row, kernel column, channel —
// innermost fastest. Addresses are in the padded input frame; `frame_w`/`frame
// origin` let the same pattern address a locally stored tile.
struct TileRect {
  int y0 = 0, x0 = 0; // output coords
  int h = 0, w = 0;
};

std::vector<Dma4dDescriptor> conv_input_descriptors(const ConvLayerSpec& spec, TileRect tile,
                                                    int frame_w, int frame_y0, int frame_x0);

// Convenience: whole-image tile addressed in the padded input frame.
std::vector<Dma4dDescriptor> conv_input_descriptors(const ConvLayerSpec& spec);

} // namespace hpdp
