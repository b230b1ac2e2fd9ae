#pragma once

#include <string>
#include <vector>

#include "sil/cij.hpp"
#include "sil/models.hpp"
#include "sil/surface.hpp"

namespace silt {

using namespace sil;

// 50-digit truncations of the irrational constants used across the suite.
inline constexpr const char* kGolden =
    "0.61803398874989484820458683436563811772030917980576"; // (sqrt5-1)/2
inline constexpr const char* kGoldenConj =
    "0.38196601125010515179541316563436188227969082019423"; // 1-(sqrt5-1)/2
inline constexpr const char* kGoldenHalf =
    "0.30901699437494742410229341718281905886015458990288"; // (sqrt5-1)/4
inline constexpr const char* kPhi =
    "1.61803398874989484820458683436563811772030917980576";
inline constexpr const char* kPhi2 =
    "2.61803398874989484820458683436563811772030917980576";
inline constexpr const char* kSqrt2m1 =
    "0.41421356237309504880168872420969807856967187537694"; // sqrt2 - 1
inline constexpr const char* kSqrt2o2 =
    "0.70710678118654752440084436210484903928483593768847"; // sqrt2 / 2

inline RotationNumber irr(const char* decimal, const std::string& id = "") {
    return RotationNumber::irrational(decimal, 50, id);
}

inline PathGerm germ_of(long i1, std::vector<BasicBlock> blocks,
                        std::string label = "y") {
    return PathGerm{i1, NormalForm(std::move(blocks)), std::move(label)};
}

// The two zero-mean-profile germs of the n=3 analysis: r=0 (hyperbolic rest)
// and r=2 with rho2 = 1 - rho1 declared.
inline PrimeCharacteristic zero_mean_r0() {
    PrimeCharacteristic c;
    c.name = "z0";
    c.germ = germ_of(-1, {BlockN1{1, 1}, BlockD{1}, BlockD{-1}}, "z0");
    return c;
}

inline PrimeCharacteristic zero_mean_r2() {
    PrimeCharacteristic c;
    c.name = "z2";
    c.germ = germ_of(-1,
                     {BlockN1{1, 1}, BlockR{irr(kGolden, "z2.1")},
                      BlockR{irr(kGoldenConj, "z2.2")}},
                     "z2");
    return c;
}

inline RelationSet zero_mean_relation() {
    Relation rel;
    rel.terms = {{Rat(1), "z2.1"}, {Rat(1), "z2.2"}};
    rel.rhs = Rat(1);
    return RelationSet({rel});
}

// Golden-ratio ellipsoid in R^4: axes (1, phi); both rotation numbers equal
// (sqrt5-1)/2 and the mean indices are 1+sqrt5 and 3+sqrt5.
inline EllipsoidSpec golden_ellipsoid2() {
    EllipsoidSpec spec;
    spec.axes.push_back(AxisValue::from_rat(Rat(1)));
    spec.axes.push_back(AxisValue::from_decimal(kPhi, 50));
    return spec;
}

// Golden-power ellipsoid in R^6: axes (1, phi, phi^2); every ratio has
// fractional part (sqrt5-1)/2 except a1/a3 whose fractional part is its
// complement, and the mean indices are (4, 4phi, 4phi^2).  The power-law
// structure is declared so the exact rational mean of y1 is available.
inline EllipsoidSpec golden_ellipsoid3() {
    EllipsoidSpec spec;
    spec.axes.push_back(AxisValue::from_rat(Rat(1)));
    spec.axes.push_back(AxisValue::from_decimal(kPhi, 50));
    spec.axes.push_back(AxisValue::from_decimal(kPhi2, 50));
    auto eq = [](const char* a, const char* b) {
        Relation r;
        r.terms = {{Rat(1), a}, {Rat(-1), b}};
        r.rhs = Rat(0);
        return r;
    };
    Relation sum1;
    sum1.terms = {{Rat(1), "a1/a2"}, {Rat(1), "a1/a3"}};
    sum1.rhs = Rat(1);
    spec.relations = {eq("a2/a1", "a1/a2"), eq("a2/a3", "a1/a2"),
                      eq("a3/a1", "a1/a2"), eq("a3/a2", "a1/a2"), sum1};
    return spec;
}

// sqrt2 ellipsoid in R^4: axes (1, 1+sqrt2); rotation numbers sqrt2-1.
inline EllipsoidSpec sqrt2_ellipsoid2() {
    EllipsoidSpec spec;
    spec.axes.push_back(AxisValue::from_rat(Rat(1)));
    spec.axes.push_back(AxisValue::from_decimal(
        "2.41421356237309504880168872420969807856967187537694", 50));
    return spec;
}

// Hyperbolic negative-mean pairs whose resonance contributions cancel
// exactly: chi-hat/mean sums to zero within the pair.  The initial indices
// are chosen per dimension parity so every good iterate clears the
// forbidden index set.
inline std::vector<PrimeCharacteristic> hyperbolic_pair(int n, long i_half,
                                                        long i_full,
                                                        const std::string& tag) {
    // First germ: chi-hat = ±1/2 at mean i_half+1; partner: chi-hat = ±1 at
    // mean i_full+1 = 2(i_half+1).
    std::vector<BasicBlock> fill;
    for (int k = 1; k < n; ++k) fill.push_back(BlockD{k % 2 ? 1 : -1});
    std::vector<PrimeCharacteristic> out;
    PrimeCharacteristic a;
    a.name = tag + "1";
    std::vector<BasicBlock> ba = {BlockN1{1, 1}};
    ba.insert(ba.end(), fill.begin(), fill.end());
    a.germ = germ_of(i_half, ba, a.name);
    PrimeCharacteristic b;
    b.name = tag + "2";
    std::vector<BasicBlock> bb = {BlockN1{1, 1}};
    bb.insert(bb.end(), fill.begin(), fill.end());
    b.germ = germ_of(i_full, bb, b.name);
    out.push_back(std::move(a));
    out.push_back(std::move(b));
    return out;
}

inline std::vector<PrimeCharacteristic> negative_pair_a(int n) {
    return n % 2 == 0 ? hyperbolic_pair(n, -2, -3, "h")
                      : hyperbolic_pair(n, -4, -7, "h");
}

inline std::vector<PrimeCharacteristic> negative_pair_b(int n) {
    return n % 2 == 0 ? hyperbolic_pair(n, -4, -7, "g")
                      : hyperbolic_pair(n, -6, -11, "g");
}

// Mixed-sign perfect models for the multiplicity pipeline: an ellipsoid core
// plus exactly-cancelling hyperbolic negative pairs.
inline SurfaceModel mixed_model(const EllipsoidSpec& core,
                                const std::vector<int>& pairs) {
    SurfaceModel base = ellipsoid(core);
    std::vector<PrimeCharacteristic> chars = base.characteristics();
    for (int which : pairs) {
        auto pair = which == 0 ? negative_pair_a(base.n()) : negative_pair_b(base.n());
        for (auto& c : pair) {
            c.name += which == 0 ? "a" : "b";
            c.germ.label = c.name;
            chars.push_back(std::move(c));
        }
    }
    return SurfaceModel(base.n(), std::move(chars), base.relations());
}

// ---------------------------------------------------------------------------
// Test-side oracle: plain brute-force scan verifying the abstract displays
// at every N for every vertex, with none of the production scanner's
// classification machinery.  Deliberately simple and slow.

struct OracleTriple {
    long N;
    std::vector<long> m;
    std::vector<long> Delta;
};

inline std::vector<OracleTriple> oracle_abstract_scan(
    const AbstractJumpInstance& inst, long count, long limit, const Rat& eps) {
    std::vector<OracleTriple> out;
    const long q = inst.q();
    for (long N = 1; N <= limit && static_cast<long>(out.size()) < count; ++N) {
        // Try every vertex assignment for the base components; the rotation
        // sides follow from the fractional parts themselves.
        for (long mask = 0; mask < (1 << q); ++mask) {
            std::vector<Int> m(q);
            std::vector<long> Delta(q, 0);
            bool ok = true;
            for (long i = 0; i < q && ok; ++i) {
                int chi = (mask >> i) & 1;
                ExactReal absD = inst.varrho(i) > 0 ? inst.D(i) : -inst.D(i);
                ExactReal x = ExactReal(rat_of(N)) /
                              (ExactReal(Rat(inst.M())) * absD);
                Int fl = x.is_exact() ? floor_q(x.exact_value())
                                      : floor_cert_irrational(x);
                ExactReal fr(x.lo() - Rat(fl), x.hi() - Rat(fl));
                Rat dist = chi == 0 ? fr.hi() : Rat(1) - fr.lo();
                if (!(dist < eps)) {
                    ok = false;
                    break;
                }
                m[i] = (fl + chi) * inst.M();
                if (m[i] < 1) {
                    ok = false;
                    break;
                }
                // Displays (3.12)-(3.15).
                Int lhs = m[i] * inst.rows()[i].beta;
                for (const auto& a : inst.rows()[i].alphas) {
                    ExactReal y = ExactReal(Rat(m[i])) * a.value();
                    if (a.rational) {
                        Rat yv = y.exact_value();
                        if (frac_q(yv) != 0) {
                            ok = false;
                            break;
                        }
                        lhs += floor_q(yv);
                    } else {
                        Int k = floor_cert_irrational(y);
                        ExactReal f(y.lo() - Rat(k), y.hi() - Rat(k));
                        lhs += k + 1;
                        if (f.hi() <= inst.delta())
                            Delta[i]++;
                        else if (!(f.lo() >= Rat(1) - inst.delta())) {
                            ok = false; // (3.13) fails or undecidable
                            break;
                        }
                    }
                }
                if (!ok) break;
                if (lhs != Int(inst.varrho(i)) * N + Delta[i]) ok = false;
            }
            if (ok) {
                OracleTriple t;
                t.N = N;
                for (auto& mi : m) t.m.push_back(mi.get_si());
                t.Delta = Delta;
                out.push_back(std::move(t));
                break; // one vertex per N
            }
        }
    }
    return out;
}

} // namespace silt
