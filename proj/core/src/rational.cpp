#include "hgrl/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hgrl {
namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits_int64(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    *this = from_wide(numerator, denominator);
}

Rational Rational::from_wide(__int128 numerator, __int128 denominator) {
    if (denominator == 0) throw std::domain_error("rational with zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    __int128 g = gcd128(numerator, denominator);
    if (g > 1) {
        numerator /= g;
        denominator /= g;
    }
    if (!fits_int64(numerator) || !fits_int64(denominator)) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(numerator);
    r.den_ = static_cast<std::int64_t>(denominator);
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                               static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (auto slash = s.find('/'); slash != std::string::npos) {
        try {
            std::size_t used_n = 0, used_d = 0;
            long long n = std::stoll(s.substr(0, slash), &used_n);
            long long d = std::stoll(s.substr(slash + 1), &used_d);
            if (used_n != slash || used_d != s.size() - slash - 1) throw std::invalid_argument(s);
            return Rational(n, d);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("malformed rational literal '" + s + "'");
        }
    }
    // Decimal with optional exponent: mantissa digits are scaled by a power of ten.
    std::size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
    __int128 mantissa = 0;
    int scale = 0;
    bool any_digit = false, seen_point = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c >= '0' && c <= '9') {
            any_digit = true;
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point) ++scale;
            if (mantissa > (static_cast<__int128>(1) << 100)) throw std::invalid_argument("rational literal too long");
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (pos < s.size()) {
        if (s[pos] != 'e' && s[pos] != 'E') throw std::invalid_argument("malformed rational literal '" + s + "'");
        std::size_t used = 0;
        int exponent = 0;
        try {
            exponent = std::stoi(s.substr(pos + 1), &used);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("malformed rational literal '" + s + "'");
        }
        if (used != s.size() - pos - 1) throw std::invalid_argument("malformed rational literal '" + s + "'");
        scale -= exponent;
    }
    __int128 num = negative ? -mantissa : mantissa;
    __int128 den = 1;
    for (; scale > 0; --scale) den *= 10;
    for (; scale < 0; ++scale) num *= 10;
    return from_wide(num, den);
}

Rational Rational::approximate(double value, std::int64_t max_denominator) {
    if (!std::isfinite(value)) throw std::domain_error("cannot approximate a non-finite value");
    // Convergents h/k of the continued fraction of value.
    __int128 h_prev = 1, h = static_cast<__int128>(std::floor(value));
    __int128 k_prev = 0, k = 1;
    double frac = value - std::floor(value);
    while (frac > 1e-18) {
        double inv = 1.0 / frac;
        auto a = static_cast<__int128>(std::floor(inv));
        __int128 k_next = a * k + k_prev;
        if (k_next > max_denominator) break;
        __int128 h_next = a * h + h_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        frac = inv - std::floor(inv);
        if (static_cast<double>(h) / static_cast<double>(k) == value) break;
    }
    return from_wide(h, k);
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace hgrl
