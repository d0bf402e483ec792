#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <string_view>

namespace mlc {

using Int = boost::multiprecision::cpp_int;

// Exact rational scalar. All structure data (metric tables, predicate
// tables, formula constants, thresholds) is held as Rat; doubles are
// converted on the way in (exactly) and on the way out (nearest).
using Rat = boost::multiprecision::cpp_rational;

// Accepts "p/q" (q > 0 after sign normalization), plain integers, and
// decimal literals like "0.25" or "-3.5". No exponents.
std::optional<Rat> rat_parse(std::string_view text);

// Canonical form: lowest terms, "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

double rat_to_double(const Rat& r);

// Exact binary expansion of a finite double.
Rat rat_from_double(double x);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline const Rat& rat_min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

// floor(r) as a big integer.
Int rat_floor(const Rat& r);

} // namespace mlc
