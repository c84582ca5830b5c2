#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evtrack/events.hpp"
#include "evtrack/geometry.hpp"

namespace evtrack {

/// Small binary image, one byte per pixel, row-major.
struct BitImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BitImage() = default;
  BitImage(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  bool test(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v = true) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t active_count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b != 0;
    return n;
  }
  bool operator==(const BitImage&) const = default;
};

/// Copy the pixels of `region` out of a frame. The region must be
/// non-empty and lie inside the frame (BoundsError otherwise).
BitImage crop_track(const BinaryFrame& frame, const Region& region);

/// Nearest-neighbor resample to size x size. Source pixel for output
/// (r, c) is floor(c * w / size), floor(r * h / size). The input must be
/// non-empty (BoundsError).
BitImage resize_to_fixed(const BitImage& crop, int size);

/// One set pixel of an exported crop, in row-major order.
struct Spike {
  int row = 0;
  int col = 0;
  bool operator==(const Spike&) const = default;
};

/// Set pixels of the image, row-major (row, then column ascending).
std::vector<Spike> encode_spikes(const BitImage& image);

/// Number of spike packets needed to ship a w x h binary crop when one
/// packet carries `bits_per_spike` pixels: ceil(w*h / bits_per_spike).
long long break_even_spikes(int w, int h, int bits_per_spike);

/// Time-multiplexed classifier slots. A fixed pool of 8 slots is
/// assigned to locked tracks; a track keeps its slot while it stays
/// locked, new tracks take the lowest free slot in ascending id order,
/// and surplus tracks wait unscheduled until a slot frees up.
class SlotSchedule {
 public:
  static constexpr int kSlots = 8;

  /// Advance one frame given the ids of the currently locked tracks.
  void update(std::span<const std::uint64_t> locked_ids);

  std::optional<int> slot_of(std::uint64_t id) const;
  const std::vector<std::uint64_t>& unscheduled() const { return unscheduled_; }
  int occupied() const;

 private:
  std::uint64_t slots_[kSlots] = {};  // 0 = free
  std::vector<std::uint64_t> unscheduled_;
};

/// Majority vote over the per-frame labels of one track; ties go to the
/// label that first reached the winning count.
std::string majority_vote(std::span<const std::string> labels);

/// Downstream classifier interface fed with fixed-size crops.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string classify(const BitImage& crop) = 0;
};

/// Deterministic stand-in classifier for end-to-end runs without a
/// trained model: hashes the crop content and the seed onto a fixed
/// label set.
class StubClassifier : public Classifier {
 public:
  StubClassifier(std::vector<std::string> labels, std::uint64_t seed);
  std::string classify(const BitImage& crop) override;

 private:
  std::vector<std::string> labels_;
  std::uint64_t seed_;
};

}  // namespace evtrack
