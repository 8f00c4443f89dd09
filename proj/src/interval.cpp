#include "fpf/interval.hpp"

#include "fpf/circuit.hpp"

#include <algorithm>
#include <initializer_list>

namespace fpf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Interval hull(std::initializer_list<double> vs) {
    double lo = kInf, hi = -kInf;
    for (double v : vs) {
        if (std::isnan(v)) return Interval::whole();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return widen(lo, hi);
}
}  // namespace

Interval widen(double lo, double hi) {
    return {std::nextafter(lo, -kInf), std::nextafter(hi, kInf)};
}

Interval operator+(Interval a, Interval b) { return widen(a.lo + b.lo, a.hi + b.hi); }
Interval operator-(Interval a, Interval b) { return widen(a.lo - b.hi, a.hi - b.lo); }

Interval operator*(Interval a, Interval b) {
    return hull({a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi});
}

Interval square(Interval a) {
    if (a.lo >= 0) return widen(a.lo * a.lo, a.hi * a.hi);
    if (a.hi <= 0) return widen(a.hi * a.hi, a.lo * a.lo);
    return {0.0, std::nextafter(std::max(a.lo * a.lo, a.hi * a.hi), kInf)};
}

Interval operator/(Interval a, Interval b) {
    return hull({a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi});
}

Interval max(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }
Interval min(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }

WellDefinedness check_well_defined(const Circuit& c, const Box& domain) {
    if (domain.dim() != c.input_arity()) throw InvalidWiring("domain dimension != input arity");
    const auto& nodes = c.nodes();
    std::vector<Interval> v(nodes.size());
    WellDefinedness verdict;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        switch (n.op) {
            case Op::Const: {
                double d = c.constant_d(n);
                v[i] = Rational(d) == c.constant(n) ? Interval::point(d) : widen(d, d);
                break;
            }
            case Op::Input: {
                double lo = to_double(domain.lo[n.index]), hi = to_double(domain.hi[n.index]);
                v[i] = (Rational(lo) == domain.lo[n.index] && Rational(hi) == domain.hi[n.index])
                           ? Interval{lo, hi}
                           : widen(lo, hi);
                break;
            }
            case Op::Add: v[i] = v[n.lhs] + v[n.rhs]; break;
            case Op::Sub: v[i] = v[n.lhs] - v[n.rhs]; break;
            case Op::Mul: v[i] = n.lhs == n.rhs ? square(v[n.lhs]) : v[n.lhs] * v[n.rhs]; break;
            case Op::Div:
                if (v[n.rhs].contains_zero()) {
                    if (verdict.safe) verdict = {false, static_cast<NodeId>(i)};
                    v[i] = Interval::whole();
                } else {
                    v[i] = v[n.lhs] / v[n.rhs];
                }
                break;
            case Op::Max: v[i] = max(v[n.lhs], v[n.rhs]); break;
            case Op::Min: v[i] = min(v[n.lhs], v[n.rhs]); break;
        }
    }
    return verdict;
}

}  // namespace fpf
