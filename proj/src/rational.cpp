#include "fpf/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace fpf {

Rational parse_rational(std::string_view s) {
    std::string t(s);
    if (t.empty()) throw std::invalid_argument("empty rational");
    auto slash = t.find('/');
    auto valid_int = [](const std::string& p, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && i < p.size() && p[i] == '-') ++i;
        if (i == p.size()) return false;
        for (; i < p.size(); ++i)
            if (p[i] < '0' || p[i] > '9') return false;
        return true;
    };
    Rational r;
    if (slash == std::string::npos) {
        if (!valid_int(t, true)) throw std::invalid_argument("bad rational '" + t + "'");
        r = Rational(mpz_class(t));
    } else {
        std::string p = t.substr(0, slash), q = t.substr(slash + 1);
        if (!valid_int(p, true) || !valid_int(q, false))
            throw std::invalid_argument("bad rational '" + t + "'");
        mpz_class den(q);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + t + "'");
        r = Rational(mpz_class(p), den);
        r.canonicalize();
    }
    return r;
}

std::string format_rational(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

double nearest_double(const Rational& r) {
    double d = r.get_d();
    if (!std::isfinite(d)) return d;
    double best = d;
    Rational err = abs(r - Rational(d));
    for (double c : {std::nextafter(d, -INFINITY), std::nextafter(d, INFINITY)}) {
        if (!std::isfinite(c)) continue;
        Rational e = abs(r - Rational(c));
        if (e < err) { err = e; best = c; }
    }
    return best;
}

std::vector<double> to_doubles(const RVec& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& r : v) out.push_back(nearest_double(r));
    return out;
}

RVec to_rationals(const std::vector<double>& v) {
    RVec out;
    out.reserve(v.size());
    for (double d : v) out.emplace_back(d);
    return out;
}

std::size_t bit_length(const Rational& r) {
    auto bits = [](const mpz_class& z) -> std::size_t {
        return z == 0 ? 1 : mpz_sizeinbase(z.get_mpz_t(), 2);
    };
    return bits(r.get_num()) + bits(r.get_den());
}

}  // namespace fpf
