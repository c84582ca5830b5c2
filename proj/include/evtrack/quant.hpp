#pragma once

#include "evtrack/events.hpp"

namespace evtrack {

/// Fixed-point format Qi.f: `integer_bits` integer bits (sign included
/// when signed) and `fraction_bits` fractional bits, at most 32 total.
class FixedFormat {
 public:
  FixedFormat(int integer_bits, int fraction_bits, bool is_signed);

  /// Map a real value onto the format's grid: scale by 2^f, round to the
  /// nearest integer with ties away from zero, saturate to the
  /// representable range, scale back. NaN is a domain error.
  double quantize(double v) const;

  double min_value() const { return lo_scaled_ / scale_; }
  double max_value() const { return hi_scaled_ / scale_; }
  double resolution() const { return 1.0 / scale_; }

  int integer_bits() const { return integer_bits_; }
  int fraction_bits() const { return fraction_bits_; }
  bool is_signed() const { return signed_; }

 private:
  int integer_bits_;
  int fraction_bits_;
  bool signed_;
  double scale_;      // 2^fraction_bits
  double lo_scaled_;  // saturation bounds, in grid steps
  double hi_scaled_;
};

/// Arithmetic backend for the tracker update equations. In the default
/// (disabled) state both hooks are the identity and the tracker runs in
/// double precision; when enabled, every intermediate position-like and
/// velocity-like value is pushed through the corresponding format,
/// emulating a fixed-point datapath.
struct ArithModel {
  bool enabled = false;
  FixedFormat position{9, 0, false};  // unsigned Q9.0: pixel coordinates
  FixedFormat velocity{8, 4, true};   // signed Q8.4: pixels per second

  double pos(double v) const { return enabled ? position.quantize(v) : v; }
  double vel(double v) const { return enabled ? velocity.quantize(v) : v; }
};

/// Fixed-point emulation settings (config group `fx.*`).
struct FixedPointConfig {
  bool enabled = false;
  int pos_int_bits = 9;
  int pos_frac_bits = 0;
  int vel_int_bits = 8;
  int vel_frac_bits = 4;
};

ArithModel make_arith_model(const FixedPointConfig& cfg);

/// Restrict a blending weight to the values an adder/shifter datapath
/// can realize: {0, 0.25, 0.5, 0.75, 1}. Picks the nearest grid value;
/// on a tie the smaller one wins.
double snap_alpha(double alpha);

}  // namespace evtrack
