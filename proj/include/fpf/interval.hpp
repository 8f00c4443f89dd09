#pragma once

#include <cmath>
#include <limits>

namespace fpf {

// Closed interval with outward rounding on every operation.
struct Interval {
    double lo = 0.0, hi = 0.0;

    static Interval point(double v) { return {v, v}; }
    static Interval whole() {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {-inf, inf};
    }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return contains(0.0); }
    double width() const { return hi - lo; }
};

Interval widen(double lo, double hi);
Interval operator+(Interval a, Interval b);
Interval operator-(Interval a, Interval b);
Interval operator*(Interval a, Interval b);
Interval square(Interval a);
// Caller checks b.contains_zero() first.
Interval operator/(Interval a, Interval b);
Interval max(Interval a, Interval b);
Interval min(Interval a, Interval b);

}  // namespace fpf
