#pragma once

#include <iosfwd>

namespace leafy::cli {

// exit statuses
constexpr int kOk = 0;
constexpr int kNegative = 1;  // Empty, rejected, not local, diverges
constexpr int kUnknown = 2;
constexpr int kUsage = 64;
constexpr int kBadInput = 65;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace leafy::cli
