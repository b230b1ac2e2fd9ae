#include "sil/exact.hpp"

#include <sstream>

namespace sil {

Int floor_q(const Rat& a) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
    return q;
}

Int ceil_q(const Rat& a) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
    return q;
}

Rat frac_q(const Rat& a) { return a - Rat(floor_q(a)); }

Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat r;
        if (r.set_str(s, 10) != 0) throw ParseError("bad rational literal: " + s);
        r.canonicalize();
        return r;
    }
    if (s.find('.') != std::string::npos) return decimal_to_rat(s);
    Rat r;
    if (r.set_str(s, 10) != 0) throw ParseError("bad integer literal: " + s);
    r.canonicalize();
    return r;
}

std::string rat_to_string(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

Rat decimal_to_rat(const std::string& decimal, int* fractional_digits) {
    std::string s = decimal;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    auto dot = s.find('.');
    std::string ip = dot == std::string::npos ? s : s.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    for (char c : ip + fp)
        if (c < '0' || c > '9') throw ParseError("bad decimal literal: " + decimal);
    Int num(ip + fp, 10);
    Int den = 1;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    if (fractional_digits) *fractional_digits = static_cast<int>(fp.size());
    Rat r(num, den);
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

ExactReal::ExactReal(Rat lo, Rat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_) throw Error("ExactReal: inverted bounds");
}

const Rat& ExactReal::exact_value() const {
    if (!is_exact()) throw PrecisionError("value is not exact: " + str());
    return lo_;
}

ExactReal ExactReal::operator+(const ExactReal& o) const {
    return ExactReal(lo_ + o.lo_, hi_ + o.hi_);
}

ExactReal ExactReal::operator-(const ExactReal& o) const {
    return ExactReal(lo_ - o.hi_, hi_ - o.lo_);
}

ExactReal ExactReal::operator*(const ExactReal& o) const {
    Rat a = lo_ * o.lo_, b = lo_ * o.hi_, c = hi_ * o.lo_, d = hi_ * o.hi_;
    Rat lo = a, hi = a;
    for (const Rat* v : {&b, &c, &d}) {
        if (*v < lo) lo = *v;
        if (*v > hi) hi = *v;
    }
    return ExactReal(lo, hi);
}

ExactReal ExactReal::operator/(const ExactReal& o) const {
    if (o.lo_ <= 0 && o.hi_ >= 0)
        throw PrecisionError("division by enclosure containing zero");
    Rat a = lo_ / o.lo_, b = lo_ / o.hi_, c = hi_ / o.lo_, d = hi_ / o.hi_;
    Rat lo = a, hi = a;
    for (const Rat* v : {&b, &c, &d}) {
        if (*v < lo) lo = *v;
        if (*v > hi) hi = *v;
    }
    return ExactReal(lo, hi);
}

ExactReal ExactReal::operator-() const { return ExactReal(-hi_, -lo_); }

ExactReal operator*(const Rat& k, const ExactReal& x) {
    return ExactReal(k) * x;
}

bool ExactReal::contains_integer() const {
    return Rat(floor_q(hi_)) >= lo_;
}

std::optional<bool> ExactReal::certainly_lt(const Rat& v) const {
    if (hi_ < v) return true;
    if (lo_ >= v) return false;
    return std::nullopt;
}

std::optional<bool> ExactReal::certainly_gt(const Rat& v) const {
    if (lo_ > v) return true;
    if (hi_ <= v) return false;
    return std::nullopt;
}

int ExactReal::sign() const {
    if (lo_ > 0) return 1;
    if (hi_ < 0) return -1;
    if (lo_ == 0 && hi_ == 0) return 0;
    throw PrecisionError("sign undecidable for " + str());
}

std::string ExactReal::str() const {
    if (is_exact()) return rat_to_string(lo_);
    return "[" + rat_to_string(lo_) + ", " + rat_to_string(hi_) + "]";
}

std::optional<Int> floor_opt(const ExactReal& x) {
    Int flo = floor_q(x.lo());
    Int fhi = floor_q(x.hi());
    if (flo == fhi) return flo;
    // Half-open reading: an exact integer upper endpoint still has a
    // determined floor when nothing below it is enclosed.
    if (x.is_exact()) return flo;
    return std::nullopt;
}

Int floor_cert(const ExactReal& x, const char* what) {
    auto f = floor_opt(x);
    if (!f)
        throw PrecisionError(std::string(what) +
                             ": enclosure straddles an integer: " + x.str());
    return *f;
}

Int floor_cert_irrational(const ExactReal& x, const char* what) {
    if (x.is_exact()) return floor_q(x.lo());
    Int k = floor_q(x.lo()) + 1; // least integer strictly above lo
    if (Rat(k) < x.hi())
        throw PrecisionError(std::string(what) +
                             ": enclosure of an irrational spans an integer: " +
                             x.str());
    // No interior integer and both endpoints excluded: floor is constant.
    return k - 1;
}

Int upper_int_cert(const ExactReal& x, bool declared_irrational, const char* what) {
    if (x.is_exact()) return ceil_q(x.lo());
    if (declared_irrational) {
        // Open-interval semantics: the enclosed value is irrational, so the
        // rational endpoints are excluded.  E is constant iff no integer lies
        // strictly inside.
        Int k = floor_q(x.lo()) + 1; // least integer strictly above lo
        if (Rat(k) < x.hi())
            throw PrecisionError(std::string(what) +
                                 ": enclosure of an irrational spans an integer: " +
                                 x.str());
        return k;
    }
    // Closed enclosure: E is constant on (k-1, k].
    Int flo = floor_q(x.lo());
    if (Rat(flo) == x.lo() || x.hi() > Rat(flo) + 1)
        throw PrecisionError(std::string(what) +
                             ": enclosure straddles an integer: " + x.str());
    return flo + 1;
}

std::pair<ExactReal, Int> frac_cert(const ExactReal& x, const char* what) {
    Int f = floor_cert(x, what);
    Rat fr(f);
    return {ExactReal(x.lo() - fr, x.hi() - fr), f};
}

} // namespace sil
