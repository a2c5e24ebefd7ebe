#pragma once

// Command-line front end. Exit codes: 0 success, 1 domain error, 2 usage
// error.

#include <ostream>
#include <string>

namespace endo {

inline constexpr const char* kVersion = "1.0.0";

// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace endo
