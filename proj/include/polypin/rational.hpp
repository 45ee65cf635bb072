#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace polypin {

/// Exact rational num/den with den > 0, kept in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den);
    /// Parses "3", "-0.35", "7/20".
    static Rational parse(const std::string& text);

    double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;

    friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) noexcept;
    friend bool operator==(const Rational& x, const Rational& y) noexcept = default;
};

Rational operator+(const Rational& x, const Rational& y);
Rational operator-(const Rational& x, const Rational& y);
Rational operator*(const Rational& x, const Rational& y);

/// Exponent value that remembers whether it is exact.
///
/// Comparisons are exact when both sides are rational, otherwise they treat values
/// within 1e-12 as equal.
class Exponent {
public:
    Exponent() = default;
    Exponent(Rational r) : value_(r.to_double()), exact_(r) {}
    static Exponent from_double(double v) { Exponent e; e.value_ = v; return e; }
    /// Decimal or p/q text parses exactly; anything else (e.g. "1e-1") falls back to double.
    static Exponent parse(const std::string& text);

    double value() const noexcept { return value_; }
    const std::optional<Rational>& exact() const noexcept { return exact_; }
    bool is_exact() const noexcept { return exact_.has_value(); }
    /// Text that parses back to the same value and exactness.
    std::string str() const;

    /// Sign of (x - y) with the tie rule above.
    static int compare(const Exponent& x, const Exponent& y) noexcept;
    /// p x + q for integer p, q (exactness preserved).
    Exponent affine(std::int64_t p, std::int64_t q) const;

private:
    double value_ = 0.0;
    std::optional<Rational> exact_;
};

inline constexpr double kExponentTieTolerance = 1e-12;

} // namespace polypin
