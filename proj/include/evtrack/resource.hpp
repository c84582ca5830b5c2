#pragma once

#include <cstdint>
#include <string>

namespace evtrack {

/// Abstract cost summary of one tracking run. `state_bytes` is the peak
/// footprint of the tracker's persistent working state (fixed pools and
/// bookkeeping tables; input buffers and recorded outputs excluded);
/// `ops` counts the arithmetic operations of the documented cost model,
/// not wall-clock time, so runs are comparable across machines.
struct ResourceReport {
  std::string label;
  std::size_t state_bytes = 0;
  unsigned long long ops = 0;
  unsigned long long frames = 0;
  unsigned long long events = 0;

  double ops_per_event() const { return events ? static_cast<double>(ops) / events : 0.0; }
};

/// Ratios of run b over run a (memory_ratio > 1 means b uses more).
struct ResourceComparison {
  ResourceReport a;
  ResourceReport b;
  double memory_ratio = 0.0;
  double ops_ratio = 0.0;
};

ResourceComparison resource_compare(const ResourceReport& a, const ResourceReport& b);

std::string to_text(const ResourceReport& r);
std::string to_text(const ResourceComparison& c);

}  // namespace evtrack
