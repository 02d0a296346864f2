#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace hpdp {

enum class errc {
  invalid_arg,
  parse,
  validation,
  resource,
  timeout,
  mismatch,
  overflow,
  io,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline int32_t checked_add(int32_t a, int32_t b, const char* what) {
  int32_t r;
  if (__builtin_add_overflow(a, b, &r))
    fail(errc::overflow, std::string(what) + ": int32 add overflow (" + std::to_string(a) + " + " +
                             std::to_string(b) + ")");
  return r;
}

inline int32_t checked_mul(int32_t a, int32_t b, const char* what) {
  int32_t r;
  if (__builtin_mul_overflow(a, b, &r))
    fail(errc::overflow, std::string(what) + ": int32 mul overflow (" + std::to_string(a) + " * " +
                             std::to_string(b) + ")");
  return r;
}

inline int32_t checked_shl(int32_t v, int s, const char* what) {
  if (s < 0 || s > 31) fail(errc::invalid_arg, std::string(what) + ": shift out of range");
  int64_t wide = static_cast<int64_t>(v) << s;
  if (wide > std::numeric_limits<int32_t>::max() || wide < std::numeric_limits<int32_t>::min())
    fail(errc::overflow, std::string(what) + ": int32 shl overflow");
  return static_cast<int32_t>(wide);
}

// Round v / 2^s to nearest, ties away from zero. Exact for any int64 v, s in [0, 63].
inline int64_t round_shift_away(int64_t v, int s) {
  if (s == 0) return v;
  __int128 w = v;
  __int128 half = static_cast<__int128>(1) << (s - 1);
  if (w >= 0) return static_cast<int64_t>((w + half) >> s);
  return -static_cast<int64_t>(((-w) + half) >> s);
}

inline int8_t clamp_i8(int64_t v) {
  if (v < -128) return -128;
  if (v > 127) return 127;
  return static_cast<int8_t>(v);
}

} // namespace hpdp
