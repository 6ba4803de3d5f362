#include "tlcp/io.hpp"

#include <cstdio>

namespace tlcp::io {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& os,
                  const std::map<std::string, std::string>& config) {
  os << "# version=" << kToolVersion << "\n";
  for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
}

}  // namespace tlcp::io
