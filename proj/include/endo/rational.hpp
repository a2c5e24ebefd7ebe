#pragma once

#include <gmpxx.h>

#include <string>

namespace endo {

using Rational = mpq_class;

// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& r);
Rational make_rational(long num, long den = 1);

}  // namespace endo
