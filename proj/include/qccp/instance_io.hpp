#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qccp/instance.hpp"

namespace qccp {

// Line-based text format, version 1:
//
//   QCCP v1 <n> <m> <successor|general>
//   <tail> <head>            (m lines; arc id = 0-based line order)
//   COSTS <k>
//   <e> <f> <cost>           (k lines)
//
// Costs are written in shortest round-trip form, so write/read is lossless.
// Blank lines and lines starting with '#' are ignored.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_instance(const QccpInstance& inst, std::ostream& out);
void write_instance(const QccpInstance& inst, const std::string& path);
QccpInstance read_instance(std::istream& in);
QccpInstance read_instance(const std::string& path);

std::string format_double(double v);

}  // namespace qccp
