#include "msrcgr/rational.hpp"

#include "msrcgr/error.hpp"

#include <bit>
#include <cmath>

namespace msrcgr {

Rational::Rational(long num, unsigned long den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.sign() == 0) throw Error(ErrorCode::InvalidArgument, "division by zero");
    return Rational(mpq_class(a.value_ / b.value_));
}

std::string Rational::to_string() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    mpz_class num;
    mpz_class den = 1;
    const std::string num_text(text.substr(0, slash));
    if (num_text.empty() || num.set_str(num_text, 10) != 0)
        throw Error(ErrorCode::Parse, "malformed rational '" + std::string(text) + "'");
    if (slash != std::string_view::npos) {
        const std::string den_text(text.substr(slash + 1));
        if (den_text.empty() || den_text[0] == '-' || den.set_str(den_text, 10) != 0 || den == 0)
            throw Error(ErrorCode::Parse, "malformed rational '" + std::string(text) + "'");
    }
    return Rational(num, den);
}

Rational Rational::half() const {
    Rational r;
    mpq_div_2exp(r.value_.get_mpq_t(), value_.get_mpq_t(), 1);
    return r;
}

Rational Rational::twice() const {
    Rational r;
    mpq_mul_2exp(r.value_.get_mpq_t(), value_.get_mpq_t(), 1);
    return r;
}

Point2 midpoint(const Point2& a, const Point2& b) {
    return {(a.x + b.x).half(), (a.y + b.y).half()};
}

std::uint64_t grid_modulus(std::uint64_t alphabet_size) {
    if (alphabet_size == 0) throw Error(ErrorCode::InvalidAlphabet, "alphabet size must be positive");
    if (alphabet_size > (std::uint64_t{1} << 61))
        throw Error(ErrorCode::AlphabetTooLarge, "alphabet size overflows the grid modulus");
    return std::bit_ceil(4 * alphabet_size);
}

namespace {

double snapped_grid_floor(double x, std::uint64_t q) {
    if (!std::isfinite(x) || std::fabs(x) > 1.0 + kSnapEpsilon)
        throw Error(ErrorCode::OutOfRange, "value outside [-1, 1] cannot be projected onto the grid");
    if (!std::has_single_bit(q)) throw Error(ErrorCode::InvalidArgument, "grid modulus must be a power of two");
    const double nearest = std::round(x);
    if (std::fabs(x - nearest) <= kSnapEpsilon) x = nearest;
    // q is a power of two, so q * x is exact.
    return std::floor(static_cast<double>(q) * x);
}

}  // namespace

Rational snap_round_q(double x, std::uint64_t q) {
    const double cells = snapped_grid_floor(x, q);
    return Rational(mpz_class(static_cast<long>(cells)), mpz_class(static_cast<unsigned long>(q)));
}

double snap_round_q_double(double x, std::uint64_t q) {
    return snapped_grid_floor(x, q) / static_cast<double>(q);
}

}  // namespace msrcgr
