#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>

#include "sil/errors.hpp"

namespace sil {

using Int = mpz_class;
using Rat = mpq_class;

// gmpxx has no long overloads; these keep 64-bit values exact.
inline Int int_of(long v) { return Int(v); }
inline Rat rat_of(long v) { return Rat(v); }

Int floor_q(const Rat& a);
Int ceil_q(const Rat& a);
// E(a) = min{k in Z : k >= a}; identical to ceil_q, named for the role it
// plays in the iteration formulas.
inline Int upper_int(const Rat& a) { return ceil_q(a); }
Rat frac_q(const Rat& a); // a - floor(a), in [0,1)

Rat rat_from_string(const std::string& s); // "p/q", "p", or decimal "0.25"
std::string rat_to_string(const Rat& r);

// Parse a decimal literal with an explicit digit count: value is the
// truncation, so the represented real lies in [v, v + 10^-digits].
Rat decimal_to_rat(const std::string& decimal, int* fractional_digits = nullptr);

// A certified enclosure of a real number.  Exact rationals have lo == hi.
// All arithmetic is outward-rounded in the only sense exact rationals need:
// interval endpoints are combined so the result encloses every possible
// value of the operands.
class ExactReal {
public:
    ExactReal() : lo_(0), hi_(0) {}
    explicit ExactReal(Rat v) : lo_(v), hi_(std::move(v)) {}
    ExactReal(Rat lo, Rat hi);

    static ExactReal exact(const Rat& v) { return ExactReal(v); }
    static ExactReal of_int(long v) { return ExactReal(Rat(v)); }

    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }
    bool is_exact() const { return lo_ == hi_; }
    Rat width() const { return hi_ - lo_; }
    const Rat& exact_value() const; // throws PrecisionError unless exact

    ExactReal operator+(const ExactReal& o) const;
    ExactReal operator-(const ExactReal& o) const;
    ExactReal operator*(const ExactReal& o) const;
    ExactReal operator/(const ExactReal& o) const; // o must exclude 0
    ExactReal operator-() const;
    ExactReal& operator+=(const ExactReal& o) { return *this = *this + o; }

    bool contains(const Rat& v) const { return lo_ <= v && v <= hi_; }
    bool contains_integer() const;

    // Three-way certified comparisons: engaged optional when decidable.
    std::optional<bool> certainly_lt(const Rat& v) const;
    std::optional<bool> certainly_gt(const Rat& v) const;

    // Sign: +1, -1, or 0 (0 only when exactly zero); throws PrecisionError
    // when the enclosure straddles zero without being the exact point.
    int sign() const;

    std::string str() const;

private:
    Rat lo_, hi_;
};

ExactReal operator*(const Rat& k, const ExactReal& x);

// floor over an enclosure; engaged only when both endpoints agree.
std::optional<Int> floor_opt(const ExactReal& x);

// Certified floor/E.  The plain forms treat the enclosure as closed; the
// irrational forms use open-interval semantics (the enclosed value is
// declared irrational, so the rational endpoints are excluded).  An
// enclosure spanning an integer is a precision fault, never a guess.
Int floor_cert(const ExactReal& x, const char* what = "floor");
Int floor_cert_irrational(const ExactReal& x, const char* what = "floor");
Int upper_int_cert(const ExactReal& x, bool declared_irrational,
                   const char* what = "E");

// Fractional part of an enclosure together with its floor.  Fails loudly
// when the enclosure straddles an integer.
std::pair<ExactReal, Int> frac_cert(const ExactReal& x, const char* what = "frac");

} // namespace sil
