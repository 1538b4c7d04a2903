// core/src/text_format.hpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef WSCI_SRC_TEXT_FORMAT_HPP_
#define WSCI_SRC_TEXT_FORMAT_HPP_

#include <cstdio>
#include <cstdlib>
#include <string>

namespace wsci::detail {

/// Shortest text form that round-trips a double exactly.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// strtod with full-token validation; returns false on trailing garbage.
inline bool parse_double(const std::string &tok, double *out) {
  if (tok.empty()) return false;
  char *end = nullptr;
  *out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size();
}

inline bool parse_int(const std::string &tok, int *out) {
  if (tok.empty()) return false;
  char *end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size()) return false;
  *out = static_cast<int>(v);
  return true;
}

}  // namespace wsci::detail

#endif  // WSCI_SRC_TEXT_FORMAT_HPP_
