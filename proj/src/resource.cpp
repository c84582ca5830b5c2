#include "evtrack/resource.hpp"

#include <sstream>

namespace evtrack {

ResourceComparison resource_compare(const ResourceReport& a, const ResourceReport& b) {
  ResourceComparison c;
  c.a = a;
  c.b = b;
  c.memory_ratio = a.state_bytes ? static_cast<double>(b.state_bytes) / a.state_bytes : 0.0;
  c.ops_ratio = a.ops ? static_cast<double>(b.ops) / a.ops : 0.0;
  return c;
}

std::string to_text(const ResourceReport& r) {
  std::ostringstream out;
  out << "resources[" << r.label << "]\n";
  out << "  state_bytes = " << r.state_bytes << "\n";
  out << "  ops = " << r.ops << "\n";
  out << "  frames = " << r.frames << "\n";
  out << "  events = " << r.events << "\n";
  return out.str();
}

std::string to_text(const ResourceComparison& c) {
  std::ostringstream out;
  out << to_text(c.a) << to_text(c.b);
  out << "comparison (" << c.b.label << " / " << c.a.label << ")\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "  memory_ratio = %.3f\n", c.memory_ratio);
  out << buf;
  std::snprintf(buf, sizeof buf, "  ops_ratio = %.3f\n", c.ops_ratio);
  out << buf;
  return out.str();
}

}  // namespace evtrack
