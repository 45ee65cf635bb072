#include "polypin/rational.hpp"

#include "polypin/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace polypin {

namespace {

__extension__ typedef __int128 i128;

Rational reduce(i128 num, i128 den) {
    if (den == 0) throw ParameterError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 a = num < 0 ? -num : num, b = den;
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
    if (num > lim || num < -lim || den > lim) throw ParameterError("rational overflow");
    return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<Rational> try_parse(const std::string& text) {
    std::string_view s(text);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto p = parse_int(s.substr(0, slash));
        const auto q = parse_int(s.substr(slash + 1));
        if (!p || !q || *q == 0) return std::nullopt;
        return reduce(*p, *q);
    }
    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    const auto dot = s.find('.');
    const std::string_view ip = s.substr(0, dot);
    const std::string_view fp = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (ip.empty() && fp.empty()) return std::nullopt;
    if (fp.size() > 17) return std::nullopt;
    for (char c : ip)
        if (c < '0' || c > '9') return std::nullopt;
    for (char c : fp)
        if (c < '0' || c > '9') return std::nullopt;
    i128 num = 0, den = 1;
    for (char c : ip) {
        num = num * 10 + (c - '0');
        if (num > std::numeric_limits<std::int64_t>::max()) return std::nullopt;
    }
    for (char c : fp) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    return reduce(neg ? -num : num, den);
}

} // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) { return reduce(num, den); }

Rational Rational::parse(const std::string& text) {
    if (auto r = try_parse(text)) return *r;
    throw ParameterError("not a rational number: '" + text + "'");
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::strong_ordering operator<=>(const Rational& x, const Rational& y) noexcept {
    return static_cast<i128>(x.num) * y.den <=> static_cast<i128>(y.num) * x.den;
}

Rational operator+(const Rational& x, const Rational& y) {
    return reduce(static_cast<i128>(x.num) * y.den + static_cast<i128>(y.num) * x.den,
                  static_cast<i128>(x.den) * y.den);
}
Rational operator-(const Rational& x, const Rational& y) {
    return reduce(static_cast<i128>(x.num) * y.den - static_cast<i128>(y.num) * x.den,
                  static_cast<i128>(x.den) * y.den);
}
Rational operator*(const Rational& x, const Rational& y) {
    return reduce(static_cast<i128>(x.num) * y.num, static_cast<i128>(x.den) * y.den);
}

Exponent Exponent::parse(const std::string& text) {
    if (auto r = try_parse(text)) return Exponent(*r);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size() || !std::isfinite(v))
        throw ParameterError("not a number: '" + text + "'");
    return from_double(v);
}

std::string Exponent::str() const {
    if (exact_) return exact_->str();
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value_, std::chars_format::scientific);
    return std::string(buf, p);
}

int Exponent::compare(const Exponent& x, const Exponent& y) noexcept {
    if (x.exact_ && y.exact_) {
        const auto c = *x.exact_ <=> *y.exact_;
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    const double d = x.value_ - y.value_;
    if (std::fabs(d) <= kExponentTieTolerance) return 0;
    return d < 0 ? -1 : 1;
}

Exponent Exponent::affine(std::int64_t p, std::int64_t q) const {
    if (exact_) return Exponent(Rational::make(p, 1) * *exact_ + Rational::make(q, 1));
    return from_double(static_cast<double>(p) * value_ + static_cast<double>(q));
}

} // namespace polypin
