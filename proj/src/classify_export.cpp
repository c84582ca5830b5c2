#include "evtrack/classify_export.hpp"

#include <algorithm>
#include <map>

namespace evtrack {

BitImage crop_track(const BinaryFrame& frame, const Region& region) {
  if (region.empty() || region.x < 0 || region.y < 0 || region.right() > frame.width ||
      region.bottom() > frame.height)
    throw BoundsError("crop region (" + std::to_string(region.x) + "," +
                      std::to_string(region.y) + "," + std::to_string(region.w) + "," +
                      std::to_string(region.h) + ") outside frame");
  BitImage out(region.w, region.h);
  for (int y = 0; y < region.h; ++y)
    for (int x = 0; x < region.w; ++x)
      out.set(x, y, frame.test(region.x + x, region.y + y));
  return out;
}

BitImage resize_to_fixed(const BitImage& crop, int size) {
  if (crop.width < 1 || crop.height < 1) throw BoundsError("cannot resize an empty crop");
  if (size < 1) throw ConfigError("export size must be positive");
  BitImage out(size, size);
  for (int r = 0; r < size; ++r) {
    const int sy = r * crop.height / size;
    for (int c = 0; c < size; ++c) {
      const int sx = c * crop.width / size;
      out.set(c, r, crop.test(sx, sy));
    }
  }
  return out;
}

std::vector<Spike> encode_spikes(const BitImage& image) {
  std::vector<Spike> spikes;
  for (int r = 0; r < image.height; ++r)
    for (int c = 0; c < image.width; ++c)
      if (image.test(c, r)) spikes.push_back(Spike{r, c});
  return spikes;
}

long long break_even_spikes(int w, int h, int bits_per_spike) {
  if (w < 1 || h < 1 || bits_per_spike < 1)
    throw ConfigError("break_even_spikes requires positive arguments");
  const long long bits = static_cast<long long>(w) * h;
  return (bits + bits_per_spike - 1) / bits_per_spike;
}

void SlotSchedule::update(std::span<const std::uint64_t> locked_ids) {
  unscheduled_.clear();

  // free slots of departed tracks
  for (auto& slot : slots_) {
    if (slot == 0) continue;
    if (std::find(locked_ids.begin(), locked_ids.end(), slot) == locked_ids.end()) slot = 0;
  }

  // retained tracks keep their slots; newcomers take the lowest free slot
  // in ascending id order
  std::vector<std::uint64_t> newcomers;
  for (std::uint64_t id : locked_ids)
    if (!slot_of(id)) newcomers.push_back(id);
  std::sort(newcomers.begin(), newcomers.end());

  for (std::uint64_t id : newcomers) {
    bool placed = false;
    for (auto& slot : slots_) {
      if (slot == 0) {
        slot = id;
        placed = true;
        break;
      }
    }
    if (!placed) unscheduled_.push_back(id);
  }
}

std::optional<int> SlotSchedule::slot_of(std::uint64_t id) const {
  if (id == 0) return std::nullopt;
  for (int i = 0; i < kSlots; ++i)
    if (slots_[i] == id) return i;
  return std::nullopt;
}

int SlotSchedule::occupied() const {
  int n = 0;
  for (auto slot : slots_) n += slot != 0;
  return n;
}

std::string majority_vote(std::span<const std::string> labels) {
  if (labels.empty()) throw StateError("majority_vote over an empty label list");
  std::map<std::string, int> counts;
  std::map<std::string, std::size_t> last_seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++counts[labels[i]];
    last_seen[labels[i]] = i;
  }

  // modal label; a tie goes to whichever label reached the winning count
  // first, i.e. whose final occurrence comes earliest in the stream
  int best = 0;
  for (const auto& [label, n] : counts) best = std::max(best, n);
  const std::string* winner = nullptr;
  for (const auto& [label, n] : counts)
    if (n == best && (!winner || last_seen[label] < last_seen[*winner])) winner = &label;
  return *winner;
}

StubClassifier::StubClassifier(std::vector<std::string> labels, std::uint64_t seed)
    : labels_(std::move(labels)), seed_(seed) {
  if (labels_.empty()) throw ConfigError("stub classifier needs at least one label");
}

std::string StubClassifier::classify(const BitImage& crop) {
  // FNV-1a over the crop content, mixed with the seed: deterministic and
  // sensitive to the actual pixels
  std::uint64_t h = 1469598103934665603ULL ^ seed_;
  for (std::uint8_t b : crop.bits) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  h ^= static_cast<std::uint64_t>(crop.width) << 32 | static_cast<std::uint64_t>(crop.height);
  h *= 1099511628211ULL;
  return labels_[h % labels_.size()];
}

}  // namespace evtrack
