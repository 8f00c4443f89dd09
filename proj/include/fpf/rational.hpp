#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace fpf {

using Rational = mpq_class;
using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;

// Accepts "p", "p/q", "-p/q". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view s);
// Canonical form is always "p/q" with q >= 1.
std::string format_rational(const Rational& r);

double nearest_double(const Rational& r);
inline double to_double(const Rational& r) { return nearest_double(r); }
std::vector<double> to_doubles(const RVec& v);
RVec to_rationals(const std::vector<double>& v);

std::size_t bit_length(const Rational& r);

}  // namespace fpf
