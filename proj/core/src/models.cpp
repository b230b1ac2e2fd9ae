#include "sil/models.hpp"

#include <sstream>

#include "sil/model_io.hpp"

namespace sil {

ExactReal AxisValue::value() const {
    if (rational) return ExactReal(exact);
    int have = 0;
    Rat lo = decimal_to_rat(decimal, &have);
    Int den = 1;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, digits);
    Rat ulp(Int(1), den);
    ulp.canonicalize();
    return ExactReal(lo, lo + ulp);
}

AxisValue AxisValue::from_rat(Rat v) {
    if (v <= 0) throw Error("axis must be positive");
    AxisValue a;
    a.rational = true;
    a.exact = std::move(v);
    a.exact.canonicalize();
    return a;
}

AxisValue AxisValue::from_decimal(const std::string& decimal, int digits) {
    AxisValue a;
    a.rational = false;
    a.decimal = decimal;
    a.digits = digits;
    int have = 0;
    Rat lo = decimal_to_rat(decimal, &have);
    if (have < digits)
        throw ParseError("axis literal shorter than declared digits: " + decimal);
    if (lo <= 0) throw Error("axis must be positive");
    return a;
}

namespace {

struct RatioData {
    ExactReal value;
    Int whole;       // certified floor
    ExactReal frac;  // value - whole, in (0,1)
};

RatioData axis_ratio(const AxisValue& num, const AxisValue& den, int j, int k) {
    if (num.rational && den.rational)
        throw CheckFailure("degenerate ellipsoid: ratio a" + std::to_string(j + 1) +
                           "/a" + std::to_string(k + 1) + " is rational");
    RatioData r;
    r.value = num.value() / den.value();
    try {
        r.whole = floor_cert_irrational(r.value, "axis ratio");
    } catch (const PrecisionError&) {
        throw CheckFailure("degenerate ellipsoid: ratio a" + std::to_string(j + 1) +
                           "/a" + std::to_string(k + 1) +
                           " is within precision of an integer");
    }
    Rat w(r.whole);
    r.frac = ExactReal(r.value.lo() - w, r.value.hi() - w);
    return r;
}

} // namespace

long ellipsoid_crossing_index(const EllipsoidSpec& spec, int j, long m) {
    const int n = static_cast<int>(spec.axes.size());
    if (j < 0 || j >= n) throw Error("orbit index out of range");
    if (m < 1) throw Error("iterate count must be positive");
    // Orbit plane: one crossing at t=0 (+1), a definite crossing at each full
    // turn before the endpoint (+2 each); the endpoint shear contributes 0.
    long total = 1 + 2 * (m - 1);
    for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        ExactReal ratio = spec.axes[j].value() / spec.axes[k].value();
        // Sweep the crossing times t = s/ratio, counting s with s < m*ratio.
        ExactReal bound = rat_of(m) * ratio;
        long crossings = 0;
        for (Int s = 1;; ++s) {
            Rat sv(s);
            if (sv < bound.lo()) {
                ++crossings;
            } else if (sv > bound.hi()) {
                break;
            } else {
                throw PrecisionError("crossing time within precision of the period");
            }
        }
        total += 1 + 2 * crossings;
    }
    return total;
}

SurfaceModel ellipsoid(const EllipsoidSpec& spec) {
    const int n = static_cast<int>(spec.axes.size());
    if (n < 1) throw Error("ellipsoid needs at least one axis");
    for (int j = 0; j + 1 < n; ++j) {
        ExactReal a = spec.axes[j].value(), b = spec.axes[j + 1].value();
        bool strict = a.hi() < b.lo() ||
                      (a.hi() == b.lo() && !(a.is_exact() && b.is_exact()));
        if (!strict)
            throw Error("axes must be strictly increasing and separated at the "
                        "stored precision");
    }
    std::vector<PrimeCharacteristic> chars;
    for (int j = 0; j < n; ++j) {
        std::vector<BasicBlock> blocks;
        blocks.push_back(BlockN1{1, 1});
        long idx = n;
        int digits = 0;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            RatioData r = axis_ratio(spec.axes[j], spec.axes[k], j, k);
            idx += 2 * r.whole.get_si();
            const int kNoLimit = 1 << 20;
            int source = std::min(spec.axes[j].rational ? kNoLimit : spec.axes[j].digits,
                                  spec.axes[k].rational ? kNoLimit : spec.axes[k].digits);
            digits = std::max(RotationNumber::kMinDigits, source - 2);
            std::ostringstream id;
            id << "a" << j + 1 << "/a" << k + 1;
            blocks.push_back(
                BlockR{RotationNumber::derived(r.frac, digits, id.str())});
        }
        PrimeCharacteristic c;
        c.name = "y" + std::to_string(j + 1);
        c.germ = PathGerm{idx, NormalForm(std::move(blocks)), c.name};
        chars.push_back(std::move(c));
    }
    SurfaceModel model(n, std::move(chars), RelationSet(spec.relations));

    // Mandatory oracle gate: the germ data must reproduce the crossing count.
    const long kOracleIterates = 12;
    for (int j = 0; j < n; ++j) {
        const auto& germ = model.characteristics()[j].germ;
        for (long m = 1; m <= kOracleIterates; ++m) {
            long oracle = ellipsoid_crossing_index(spec, j, m);
            long formula = index_at(germ, m);
            if (oracle != formula)
                throw CheckFailure(
                    "ellipsoid oracle disagreement at orbit " + std::to_string(j + 1) +
                    ", m=" + std::to_string(m) + ": crossing count " +
                    std::to_string(oracle) + " vs iteration formula " +
                    std::to_string(formula));
        }
    }
    // Resonance identity gate.
    auto res = resonance_residuals(model, Rat(1, 1000000000));
    if (!res.admissible || !res.minus_empty)
        throw CheckFailure("ellipsoid failed the resonance identity gate");
    return model;
}

SyntheticAnnotations annotate(const SurfaceModel& model, const Rat& resonance_tol) {
    SyntheticAnnotations ann;
    for (const auto& c : model.characteristics()) {
        MeanIndex mi = mean_index(c.germ);
        int s = mi.is_structurally_zero(model.relations())
                    ? 0
                    : mi.sign(model.relations());
        ann.mean_signs.push_back(s);
        if (s > 0) ann.q0++;
        if (!c.nondegenerate()) ann.all_nondegenerate = false;
    }
    try {
        ann.resonance = resonance_residuals(model, resonance_tol);
        if (!ann.resonance->admissible) ann.resonance_note = "inadmissible";
    } catch (const Error& e) {
        ann.resonance_note = e.what();
    }
    try {
        ann.perfect = is_perfect(model);
        if (!ann.perfect->perfect) ann.perfect_note = "violations present";
    } catch (const Error& e) {
        ann.perfect_note = e.what();
    }
    ann.admissible = ann.all_nondegenerate && ann.resonance &&
                     ann.resonance->admissible && ann.perfect &&
                     ann.perfect->perfect;
    return ann;
}

std::pair<SurfaceModel, SyntheticAnnotations> synthetic(
    const std::string& config_json, const Rat& resonance_tol) {
    SurfaceModel model = parse_model(config_json);
    SyntheticAnnotations ann = annotate(model, resonance_tol);
    return {std::move(model), std::move(ann)};
}

} // namespace sil
