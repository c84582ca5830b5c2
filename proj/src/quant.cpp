#include "evtrack/quant.hpp"

#include <algorithm>
#include <cmath>

namespace evtrack {

FixedFormat::FixedFormat(int integer_bits, int fraction_bits, bool is_signed)
    : integer_bits_(integer_bits), fraction_bits_(fraction_bits), signed_(is_signed) {
  if (integer_bits < (is_signed ? 1 : 0) || fraction_bits < 0 ||
      integer_bits + fraction_bits > 32 || integer_bits + fraction_bits < 1)
    throw ConfigError("invalid fixed-point format Q" + std::to_string(integer_bits) + "." +
                      std::to_string(fraction_bits));
  scale_ = std::ldexp(1.0, fraction_bits_);
  if (signed_) {
    lo_scaled_ = -std::ldexp(1.0, integer_bits_ - 1) * scale_;
    hi_scaled_ = std::ldexp(1.0, integer_bits_ - 1) * scale_ - 1.0;
  } else {
    lo_scaled_ = 0.0;
    hi_scaled_ = std::ldexp(1.0, integer_bits_) * scale_ - 1.0;
  }
}

double FixedFormat::quantize(double v) const {
  if (std::isnan(v)) throw BoundsError("cannot quantize NaN");
  double s = std::round(v * scale_);  // ties away from zero
  s = std::clamp(s, lo_scaled_, hi_scaled_);
  return s / scale_;
}

ArithModel make_arith_model(const FixedPointConfig& cfg) {
  ArithModel m;
  m.enabled = cfg.enabled;
  m.position = FixedFormat(cfg.pos_int_bits, cfg.pos_frac_bits, false);
  m.velocity = FixedFormat(cfg.vel_int_bits, cfg.vel_frac_bits, true);
  return m;
}

double snap_alpha(double alpha) {
  static constexpr double kGrid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  double best = kGrid[0];
  double best_d = std::abs(alpha - kGrid[0]);
  for (double g : kGrid) {
    const double d = std::abs(alpha - g);
    if (d < best_d) {  // ties keep the smaller value
      best_d = d;
      best = g;
    }
  }
  return best;
}

}  // namespace evtrack
