#include "polybound/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace polybound {

std::string rational_to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) {
        s += "/" + denominator(q).str();
    }
    return s;
}

std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t slash = text.find('/');
    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    try {
        if (slash == std::string::npos) {
            if (!is_int(text)) return std::nullopt;
            return Rational(BigInt(text));
        }
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return std::nullopt;
        BigInt d(den);
        if (d == 0) return std::nullopt;
        return Rational(BigInt(num), d);
    } catch (...) {
        return std::nullopt;
    }
}

Rational dyadic_from_double(double x, unsigned bits) {
    if (!std::isfinite(x)) return Rational(0);
    double scaled = std::ldexp(x, static_cast<int>(bits));
    // llround saturates for huge inputs; bounds used here stay far below that.
    BigInt num = static_cast<long long>(std::llround(scaled));
    BigInt den = BigInt(1) << bits;
    return Rational(num, den);
}

}  // namespace polybound
