#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/common.hpp"

namespace hpdp {

// (height, width, channels), channel-last row-major layout.
struct Hwc {
  int h = 0;
  int w = 0;
  int c = 0;

  int64_t words() const { return int64_t(h) * w * c; }
  bool operator==(const Hwc&) const = default;
};

// int8 activation tensor with per-tensor affine quantization: r = scale * (q - zero_point).
struct QuantizedTensor {
  Hwc dims;
  std::vector<int8_t> data; // dims.words() entries, (h, w, c) row-major
  double scale = 1.0;
  int8_t zero_point = 0;

  int8_t at(int y, int x, int c) const {
    return data[(int64_t(y) * dims.w + x) * dims.c + c];
  }
  int8_t& at(int y, int x, int c) {
    return data[(int64_t(y) * dims.w + x) * dims.c + c];
  }
  void check() const;
};

// int8 weights, (K, R, S, C) row-major, symmetric per-output-channel quantization
// (zero point is 0 by construction).
struct WeightTensor {
  int k = 0, r = 0, s = 0, c = 0;
  std::vector<int8_t> data;
  std::vector<double> per_channel_scales; // K entries

  int64_t words() const { return int64_t(k) * r * s * c; }
  int8_t at(int ko, int ri, int si, int ci) const {
    return data[((int64_t(ko) * r + ri) * s + si) * c + ci];
  }
  void check() const;
};

// Fixed-point re-quantization: the real multiplier for channel k is
// m0[k] * 2^-(31 + n[k]) with m0 a normalized mantissa in [2^30, 2^31).
struct RequantChannel {
  int32_t m0 = 1 << 30;
  int shift = 0; // n, in [0, 31]
};

struct RequantParams {
  std::vector<RequantChannel> per_channel; // K entries
  int8_t z_out = 0;

  void check() const;
};

enum class Padding { same, valid };

struct ConvLayerSpec {
  Hwc input;
  int k = 0, r = 0, s = 0, c = 0; // kernel dims (K, R, S, C)
  int stride = 1;                 // both axes
  Padding padding = Padding::valid;
  int8_t z_in = 0;
  RequantParams requant;
  std::vector<int32_t> bias; // K entries
  double out_scale = 1.0;    // metadata carried onto the output tensor

  void check() const;
};

// Resolved output geometry for a layer. Padding pixels hold z_in, so padded
// taps contribute zero to the (q - z_in) sum.
struct ConvGeometry {
  int out_h = 0, out_w = 0;
  int pad_top = 0, pad_left = 0;
  int padded_h = 0, padded_w = 0;

  static ConvGeometry of(const ConvLayerSpec& spec);
  int64_t out_elems() const { return int64_t(out_h) * out_w; }
};

// 32-bit accumulator tensor (H_out, W_out, K).
struct AccTensor {
  Hwc dims;
  std::vector<int32_t> data;

  int32_t at(int y, int x, int k) const {
    return data[(int64_t(y) * dims.w + x) * dims.c + k];
  }
};

QuantizedTensor quantize(std::span<const double> values, Hwc dims, double scale,
                         int8_t zero_point);
std::vector<double> dequantize(const QuantizedTensor& t);

// Reference integer convolution, checked 32-bit accumulation, bias first.
AccTensor conv2d_ref(const QuantizedTensor& input, const WeightTensor& weights,
                     const ConvLayerSpec& spec);

// clamp(z_out + round(acc * m0 / 2^(31+n)), -128, 127), ties away from zero.
int8_t requantize(int32_t acc, int channel, const RequantParams& p);

// Decomposes real multipliers s_in * s_w[k] / s_out into (m0, n) pairs.
RequantParams compute_requant_params(double s_in, std::span<const double> s_w, double s_out,
                                     int8_t z_out);

QuantizedTensor requantize_tensor(const AccTensor& acc, const RequantParams& p,
                                  double out_scale = 1.0);

// Multiply-accumulate count of the layer; `dims_are_output` reinterprets the
// spec's image size as the output feature map size.
int64_t mac_count(const ConvLayerSpec& spec, bool dims_are_output = false);

// Input tensor extended by the padding border, filled with z_in.
QuantizedTensor pad_input(const QuantizedTensor& input, const ConvLayerSpec& spec);

} // namespace hpdp
