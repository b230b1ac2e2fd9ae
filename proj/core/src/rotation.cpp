#include "sil/rotation.hpp"

namespace sil {

RotationNumber RotationNumber::rational(const Rat& v) {
    if (v <= 0 || v >= 1)
        throw Error("rotation number must lie in (0,1): " + rat_to_string(v));
    RotationNumber r;
    r.kind_ = Kind::Rational;
    r.exact_ = v;
    r.exact_.canonicalize();
    r.range_ = ExactReal(r.exact_);
    return r;
}

RotationNumber RotationNumber::rational(long p, long q) {
    return rational(Rat(p, q));
}

RotationNumber RotationNumber::irrational(const std::string& decimal, int digits,
                                          std::string id) {
    if (digits < kMinDigits)
        throw Error("irrational rotation numbers need at least " +
                    std::to_string(kMinDigits) + " digits, got " +
                    std::to_string(digits));
    int have = 0;
    Rat lo = decimal_to_rat(decimal, &have);
    if (have < digits)
        throw Error("decimal literal shorter than declared precision: " + decimal);
    Int den = 1;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, digits);
    Rat ulp(Int(1), den);
    ulp.canonicalize();
    RotationNumber r;
    r.kind_ = Kind::Irrational;
    r.range_ = ExactReal(lo, lo + ulp);
    r.digits_ = digits;
    r.id_ = std::move(id);
    r.decimal_ = decimal;
    if (r.range_.lo() <= 0 || r.range_.hi() >= 1)
        throw Error("rotation number must lie in (0,1): " + decimal);
    return r;
}

RotationNumber RotationNumber::derived(const ExactReal& range, int digits,
                                       std::string id) {
    if (range.lo() <= 0 || range.hi() >= 1)
        throw Error("derived rotation number must lie in (0,1): " + range.str());
    RotationNumber r;
    r.kind_ = Kind::Irrational;
    r.range_ = range;
    r.digits_ = digits;
    r.id_ = std::move(id);
    return r;
}

const Rat& RotationNumber::exact_value() const {
    if (kind_ != Kind::Rational)
        throw PrecisionError("irrational rotation number has no exact value");
    return exact_;
}

ExactReal RotationNumber::value() const { return range_; }

bool RotationNumber::same_as(const RotationNumber& o) const {
    if (kind_ != o.kind_) return false;
    if (kind_ == Kind::Rational) return exact_ == o.exact_;
    if (!id_.empty() && id_ == o.id_) return true;
    return range_.lo() == o.range_.lo() && range_.hi() == o.range_.hi();
}

std::string RotationNumber::str() const {
    if (kind_ == Kind::Rational) return rat_to_string(exact_);
    if (!decimal_.empty()) return decimal_ + "~";
    return range_.str();
}

ExactReal CirclePoint::t() const {
    ExactReal v = rho.value();
    if (!reflected) return v;
    return ExactReal(Rat(1) - v.hi(), Rat(1) - v.lo());
}

ExactReal CirclePoint::theta_over_pi() const {
    ExactReal v = t();
    return ExactReal(2 * v.lo(), 2 * v.hi());
}

bool CirclePoint::same_point(const CirclePoint& o) const {
    if (rho.same_as(o.rho) && reflected == o.reflected) return true;
    if (rho.is_rational() && o.rho.is_rational()) {
        // Canonical comparison: t values may match across reflection,
        // e.g. rho=1/3 reflected equals rho=2/3 plain, and t=1/2 is its own
        // conjugate.
        return t().exact_value() == o.t().exact_value();
    }
    return false;
}

std::string CirclePoint::str() const {
    return (reflected ? "1-" : "") + rho.str();
}

} // namespace sil
