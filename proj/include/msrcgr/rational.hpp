#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace msrcgr {

// Exact rational backed by GMP. Always held in canonical form:
// den > 0 and gcd(|num|, den) = 1.
class Rational {
public:
    Rational() = default;
    Rational(long num) : value_(num) {}
    Rational(long num, unsigned long den);
    Rational(const mpz_class& num, const mpz_class& den);
    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    mpz_class num() const { return value_.get_num(); }
    mpz_class den() const { return value_.get_den(); }
    const mpq_class& raw() const noexcept { return value_; }

    double to_double() const { return value_.get_d(); }

    // "num/den" in base 10; integers are still written as "n/1".
    std::string to_string() const;
    static Rational parse(std::string_view text);

    Rational half() const;
    Rational twice() const;

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational(mpq_class(-value_)); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }

    int sign() const { return sgn(value_); }
    Rational abs() const { return Rational(mpq_class(::abs(value_))); }

private:
    mpq_class value_;
};

struct Point2 {
    Rational x;
    Rational y;

    friend bool operator==(const Point2&, const Point2&) = default;
    // Lexicographic, for sorted-uniqueness checks.
    friend bool operator<(const Point2& a, const Point2& b) {
        if (a.x == b.x) return a.y < b.y;
        return a.x < b.x;
    }
};

Point2 midpoint(const Point2& a, const Point2& b);

// Smallest power of two >= 4m.
std::uint64_t grid_modulus(std::uint64_t alphabet_size);

// Trig values within this distance of an integer are snapped to it before flooring.
inline constexpr double kSnapEpsilon = 1e-12;

// floor(q * x) / q after snapping near-integers; q must be a power of two.
Rational snap_round_q(double x, std::uint64_t q);

// The same value as a double (exact, since q is a power of two).
double snap_round_q_double(double x, std::uint64_t q);

}  // namespace msrcgr
