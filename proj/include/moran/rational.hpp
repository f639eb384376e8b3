#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>
#include <string_view>

namespace moran {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// "p/q" in lowest terms; integers keep the "/1" so every value has the same shape.
std::string to_string(const Rational& r);

/// Accepts "p/q" or a bare integer "p". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace moran
