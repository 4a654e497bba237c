#ifndef COMMITREP_FORMAT_HPP
#define COMMITREP_FORMAT_HPP

#include <charconv>
#include <string>

namespace commitrep {

// Shortest text that parses back to the same double; locale independent.
inline std::string FormatDouble(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace commitrep

#endif  // COMMITREP_FORMAT_HPP
