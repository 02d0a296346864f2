#include "core/qtensor.hpp"

#include <cmath>

namespace hpdp {

void QuantizedTensor::check() const {
  if (dims.h <= 0 || dims.w <= 0 || dims.c <= 0)
    fail(errc::invalid_arg, "tensor dims must be positive");
  if (int64_t(data.size()) != dims.words())
    fail(errc::invalid_arg, "tensor data length does not match dims");
  if (!(scale > 0.0)) fail(errc::invalid_arg, "tensor scale must be positive");
}

void WeightTensor::check() const {
  if (k <= 0 || r <= 0 || s <= 0 || c <= 0)
    fail(errc::invalid_arg, "weight dims must be positive");
  if (int64_t(data.size()) != words())
    fail(errc::invalid_arg, "weight data length does not match dims");
  if (!per_channel_scales.empty() && int(per_channel_scales.size()) != k)
    fail(errc::invalid_arg, "per-channel scale count must equal K");
}

void RequantParams::check() const {
  for (const auto& ch : per_channel) {
    if (ch.m0 < (1 << 30)) fail(errc::invalid_arg, "requant mantissa below 2^30");
    if (ch.shift < 0 || ch.shift > 31) fail(errc::invalid_arg, "requant shift outside [0, 31]");
  }
}

void ConvLayerSpec::check() const {
  if (input.h <= 0 || input.w <= 0 || input.c <= 0)
    fail(errc::invalid_arg, "input dims must be positive");
  if (k <= 0 || r <= 0 || s <= 0 || c <= 0) fail(errc::invalid_arg, "kernel dims must be positive");
  if (c != input.c) fail(errc::invalid_arg, "kernel channel count does not match input");
  if (stride < 1) fail(errc::invalid_arg, "stride must be >= 1");
  if (padding == Padding::valid && (r > input.h || s > input.w))
    fail(errc::invalid_arg, "kernel larger than input under valid padding");
  if (int(bias.size()) != k) fail(errc::invalid_arg, "bias length must equal K");
  if (int(requant.per_channel.size()) != k)
    fail(errc::invalid_arg, "requant channel count must equal K");
  requant.check();
}

ConvGeometry ConvGeometry::of(const ConvLayerSpec& spec) {
  ConvGeometry g;
  if (spec.padding == Padding::same) {
    g.out_h = (spec.input.h + spec.stride - 1) / spec.stride;
    g.out_w = (spec.input.w + spec.stride - 1) / spec.stride;
    int pad_h = std::max((g.out_h - 1) * spec.stride + spec.r - spec.input.h, 0);
    int pad_w = std::max((g.out_w - 1) * spec.stride + spec.s - spec.input.w, 0);
    g.pad_top = pad_h / 2;
    g.pad_left = pad_w / 2;
    g.padded_h = spec.input.h + pad_h;
    g.padded_w = spec.input.w + pad_w;
  } else {
    g.out_h = (spec.input.h - spec.r) / spec.stride + 1;
    g.out_w = (spec.input.w - spec.s) / spec.stride + 1;
    g.pad_top = g.pad_left = 0;
    g.padded_h = spec.input.h;
    g.padded_w = spec.input.w;
  }
  return g;
}

QuantizedTensor quantize(std::span<const double> values, Hwc dims, double scale,
                         int8_t zero_point) {
  if (!(scale > 0.0)) fail(errc::invalid_arg, "quantize: scale must be positive");
  if (int64_t(values.size()) != dims.words())
    fail(errc::invalid_arg, "quantize: value count does not match dims");
  QuantizedTensor t;
  t.dims = dims;
  t.scale = scale;
  t.zero_point = zero_point;
  t.data.reserve(values.size());
  for (double v : values) {
    // llround rounds half away from zero, matching the fixed-point path.
    int64_t q = std::llround(v / scale) + zero_point;
    t.data.push_back(clamp_i8(q));
  }
  return t;
}

std::vector<double> dequantize(const QuantizedTensor& t) {
  std::vector<double> out;
  out.reserve(t.data.size());
  for (int8_t q : t.data) out.push_back(t.scale * (int(q) - int(t.zero_point)));
  return out;
}

AccTensor conv2d_ref(const QuantizedTensor& input, const WeightTensor& weights,
                     const ConvLayerSpec& spec) {
  spec.check();
  input.check();
  weights.check();
  if (input.dims != spec.input) fail(errc::invalid_arg, "conv2d_ref: input dims mismatch");
  if (weights.k != spec.k || weights.r != spec.r || weights.s != spec.s || weights.c != spec.c)
    fail(errc::invalid_arg, "conv2d_ref: weight dims mismatch");

  const ConvGeometry g = ConvGeometry::of(spec);
  AccTensor acc;
  acc.dims = {g.out_h, g.out_w, spec.k};
  acc.data.resize(acc.dims.words());

  const int zi = spec.z_in;
  for (int oy = 0; oy < g.out_h; ++oy) {
    for (int ox = 0; ox < g.out_w; ++ox) {
      for (int k = 0; k < spec.k; ++k) {
        int32_t sum = spec.bias[k];
        for (int r = 0; r < spec.r; ++r) {
          int iy = oy * spec.stride + r - g.pad_top;
          if (iy < 0 || iy >= spec.input.h) continue; // padding tap, contributes 0
          for (int s = 0; s < spec.s; ++s) {
            int ix = ox * spec.stride + s - g.pad_left;
            if (ix < 0 || ix >= spec.input.w) continue;
            for (int c = 0; c < spec.c; ++c) {
              int32_t d = int32_t(input.at(iy, ix, c)) - zi;
              int32_t prod = checked_mul(d, int32_t(weights.at(k, r, s, c)), "conv2d_ref");
              sum = checked_add(sum, prod, "conv2d_ref");
            }
          }
        }
        acc.data[(int64_t(oy) * g.out_w + ox) * spec.k + k] = sum;
      }
    }
  }
  return acc;
}

int8_t requantize(int32_t acc, int channel, const RequantParams& p) {
  const RequantChannel& ch = p.per_channel.at(channel);
  int64_t prod = int64_t(acc) * ch.m0;
  int64_t rounded = round_shift_away(prod, 31 + ch.shift);
  return clamp_i8(int64_t(p.z_out) + rounded);
}

RequantParams compute_requant_params(double s_in, std::span<const double> s_w, double s_out,
                                     int8_t z_out) {
  if (!(s_in > 0.0) || !(s_out > 0.0)) fail(errc::invalid_arg, "scales must be positive");
  RequantParams p;
  p.z_out = z_out;
  p.per_channel.reserve(s_w.size());
  for (double sw : s_w) {
    if (!(sw > 0.0)) fail(errc::invalid_arg, "weight scale must be positive");
    double m = s_in * sw / s_out;
    if (!(m > 0.0) || m >= 1.0)
      fail(errc::invalid_arg,
           "unsupported multiplier " + std::to_string(m) + ": must lie in (0, 1)");
    int n = 0;
    while (m < 0.5) {
      m *= 2.0;
      ++n;
      if (n > 31) fail(errc::invalid_arg, "unsupported multiplier: shift exceeds 31");
    }
    int64_t m0 = std::llround(m * 2147483648.0); // m * 2^31, in [2^30, 2^31]
    if (m0 == (int64_t(1) << 31)) {
      // m rounded up to exactly 1.0 * 2^31; renormalizing would need n-1.
      if (n == 0) fail(errc::invalid_arg, "unsupported multiplier: rounds to 1.0");
      --n;
      m0 = int64_t(1) << 30;
    }
    p.per_channel.push_back({int32_t(m0), n});
  }
  p.check();
  return p;
}

QuantizedTensor requantize_tensor(const AccTensor& acc, const RequantParams& p,
                                  double out_scale) {
  QuantizedTensor out;
  out.dims = acc.dims;
  out.scale = out_scale;
  out.zero_point = p.z_out;
  out.data.reserve(acc.data.size());
  const int k = acc.dims.c;
  for (int64_t i = 0; i < int64_t(acc.data.size()); ++i)
    out.data.push_back(requantize(acc.data[i], int(i % k), p));
  return out;
}

int64_t mac_count(const ConvLayerSpec& spec, bool dims_are_output) {
  int64_t out_h, out_w;
  if (dims_are_output) {
    out_h = spec.input.h;
    out_w = spec.input.w;
  } else {
    const ConvGeometry g = ConvGeometry::of(spec);
    out_h = g.out_h;
    out_w = g.out_w;
  }
  return out_h * out_w * spec.k * spec.r * spec.s * spec.c;
}

QuantizedTensor pad_input(const QuantizedTensor& input, const ConvLayerSpec& spec) {
  const ConvGeometry g = ConvGeometry::of(spec);
  QuantizedTensor p;
  p.dims = {g.padded_h, g.padded_w, input.dims.c};
  p.scale = input.scale;
  p.zero_point = input.zero_point;
  p.data.assign(p.dims.words(), spec.z_in);
  for (int y = 0; y < input.dims.h; ++y)
    for (int x = 0; x < input.dims.w; ++x)
      for (int c = 0; c < input.dims.c; ++c)
        p.at(y + g.pad_top, x + g.pad_left, c) = input.at(y, x, c);
  return p;
}

} // namespace hpdp
