#pragma once

#include <map>
#include <ostream>
#include <string>

namespace tlcp::io {

inline constexpr const char* kToolVersion = "tlcp 1.0.0";

// 17 significant digits; round-trips doubles exactly and is byte-stable.
std::string fmt_g17(double v);

// Reproducibility header written at the top of every output file:
// "# key=value" lines, keys in the given (sorted) map order, starting with
// the tool version.
void write_header(std::ostream& os,
                  const std::map<std::string, std::string>& config);

}  // namespace tlcp::io
