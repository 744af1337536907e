#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace urmflow {

using Rational = mpq_class;
using Natural = mpz_class;
using RationalVector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws ParseError.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

}  // namespace urmflow
