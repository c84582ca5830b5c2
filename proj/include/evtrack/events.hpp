#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace evtrack {

/// A single change-detection event from the sensor.
struct Event {
  std::uint64_t t_us = 0;  ///< microseconds since stream start
  std::uint16_t x = 0;     ///< column, 0 at the left
  std::uint16_t y = 0;     ///< row, 0 at the top
  bool on = false;         ///< polarity: true = brightness increase

  bool operator==(const Event&) const = default;
};

/// Sensor resolution. Defaults match a 240x180 DVS.
struct SensorGeometry {
  int width = 240;
  int height = 180;

  bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

/// Binary activity frame aggregated over a fixed time window
/// [t_start_us, t_end_us). One byte per pixel, row-major, nonzero = active.
struct BinaryFrame {
  int width = 0;
  int height = 0;
  std::uint64_t index = 0;
  std::uint64_t t_start_us = 0;
  std::uint64_t t_end_us = 0;
  std::vector<std::uint8_t> bits;

  BinaryFrame() = default;
  BinaryFrame(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  bool test(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v = true) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t active_count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b != 0;
    return n;
  }
};

/// Base class for errors raised by the engine. Every failure mode below
/// derives from this so callers can catch one type at the CLI boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input bytes (bad field count, non-numeric text, truncated
/// binary record, unreadable file).
struct ParseError : Error {
  using Error::Error;
};

/// A value that parsed fine but is outside its allowed domain
/// (coordinates off-sensor, polarity not in {0,1}, bad region).
struct BoundsError : Error {
  using Error::Error;
};

/// Timestamps that violate the required monotone ordering.
struct OrderingError : Error {
  using Error::Error;
};

/// Invalid configuration value or unknown configuration key.
struct ConfigError : Error {
  using Error::Error;
};

/// An operation was invoked in a state that does not support it.
struct StateError : Error {
  using Error::Error;
};

}  // namespace evtrack
