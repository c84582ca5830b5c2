#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "evtrack/events.hpp"

namespace evtrack {

enum class EventFormat { Csv, Raw };

/// Parse an event stream.
///
/// Csv: one event per line as `t_us,x,y,polarity`; lines starting with
/// '#' and blank lines are skipped; polarity must be 0 or 1.
/// Raw: packed little-endian records of four uint32 (t_us, x, y, polarity);
/// a trailing partial record is a parse error.
///
/// Events must lie inside `sensor` and timestamps must be non-decreasing.
/// Throws ParseError / BoundsError / OrderingError with the offending line
/// (csv) or byte offset (raw) in the message.
std::vector<Event> parse_events(std::string_view data, EventFormat format,
                                const SensorGeometry& sensor = {});

/// File-reading convenience over parse_events. ParseError if the file
/// cannot be read.
std::vector<Event> load_events(const std::string& path, EventFormat format,
                               const SensorGeometry& sensor = {});

/// Serialize events in the csv format accepted by parse_events.
std::string events_to_csv(const std::vector<Event>& events);

/// Serialize events in the raw format accepted by parse_events.
std::string events_to_raw(const std::vector<Event>& events);

/// Aggregate one window [t_start_us, t_start_us + period_us) into a binary
/// frame: a pixel is set when at least `min_count` events (either polarity)
/// fell on it. Events outside the window are a contract violation and
/// raise OrderingError.
BinaryFrame aggregate_frame(const std::vector<Event>& window_events,
                            std::uint64_t t_start_us, std::uint64_t period_us,
                            const SensorGeometry& sensor, int min_count = 1);

/// Cut a full stream into consecutive frames of `period_us`. The first
/// window starts at the frame boundary at or below the first event
/// ((t_first / period) * period), and empty intermediate windows still
/// produce (empty) frames. Frame `index` and window bounds are filled in.
std::vector<BinaryFrame> aggregate_frames(const std::vector<Event>& events,
                                          std::uint64_t period_us,
                                          const SensorGeometry& sensor,
                                          int min_count = 1);

}  // namespace evtrack
