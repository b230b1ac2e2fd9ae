#include "sil/normal_form.hpp"

#include <sstream>

namespace sil {

namespace {

void check_rho(const RotationNumber& rho, const char* block) {
    if (rho.is_rational() && rho.exact_value() == Rat(1, 2))
        throw Error(std::string(block) + " block requires theta != pi (rho != 1/2)");
}

// Per-point splitting/nullity contributions of a single block.  The whole
// table lives here as data, so a corrected entry is a one-line change.
struct PointData {
    CirclePoint pt;
    long splus, sminus, nu;
};

struct BlockData {
    std::vector<PointData> points; // theta in (0,2pi)
    long splus_one = 0;       // at omega = +1
    long nu_one = 0;
};

BlockData block_data(const BasicBlock& blk) {
    BlockData d;
    if (const auto* n1 = std::get_if<BlockN1>(&blk)) {
        long nu = n1->b == 0 ? 2 : 1;
        if (n1->lambda == 1) {
            d.splus_one = n1->b >= 0 ? 1 : 0;
            d.nu_one = nu;
        } else {
            long s = n1->b <= 0 ? 1 : 0;
            d.points.push_back(
                {CirclePoint{RotationNumber::rational(1, 2), false}, s, s, nu});
        }
    } else if (std::holds_alternative<BlockD>(blk)) {
        // no circle spectrum
    } else if (const auto* r = std::get_if<BlockR>(&blk)) {
        d.points.push_back({CirclePoint{r->rho, false}, 0, 1, 1});
        d.points.push_back({CirclePoint{r->rho, true}, 1, 0, 1});
    } else if (const auto* n2 = std::get_if<BlockN2>(&blk)) {
        long s = n2->trivial ? 0 : 1;
        d.points.push_back({CirclePoint{n2->rho, false}, s, s, 1});
        d.points.push_back({CirclePoint{n2->rho, true}, s, s, 1});
    } else {
        // OffCircle: spectrum avoids U entirely
    }
    return d;
}

} // namespace

int block_half_dim(const BasicBlock& b) {
    if (std::holds_alternative<BlockN1>(b)) return 1;
    if (std::holds_alternative<BlockD>(b)) return 1;
    if (std::holds_alternative<BlockR>(b)) return 1;
    if (std::holds_alternative<BlockN2>(b)) return 2;
    return std::get<BlockOffCircle>(b).half_dim;
}

std::string block_str(const BasicBlock& b) {
    std::ostringstream os;
    if (const auto* n1 = std::get_if<BlockN1>(&b)) {
        os << "N1(" << n1->lambda << "," << n1->b << ")";
    } else if (const auto* dd = std::get_if<BlockD>(&b)) {
        os << "D(" << (dd->sign > 0 ? "+" : "-") << ")";
    } else if (const auto* r = std::get_if<BlockR>(&b)) {
        os << "R(" << r->rho.str() << ")";
    } else if (const auto* n2 = std::get_if<BlockN2>(&b)) {
        os << "N2(" << n2->rho.str() << "," << (n2->trivial ? "trivial" : "nontrivial")
           << ")";
    } else {
        os << "OffCircle(" << std::get<BlockOffCircle>(b).half_dim << ")";
    }
    return os.str();
}

NormalForm::NormalForm(std::vector<BasicBlock> blocks) : blocks_(std::move(blocks)) {
    for (const auto& b : blocks_) {
        if (const auto* n1 = std::get_if<BlockN1>(&b)) {
            if (n1->lambda != 1 && n1->lambda != -1)
                throw Error("N1 lambda must be ±1");
            if (n1->b < -1 || n1->b > 1) throw Error("N1 b must be in {-1,0,1}");
        } else if (const auto* dd = std::get_if<BlockD>(&b)) {
            if (dd->sign != 1 && dd->sign != -1) throw Error("D sign must be ±1");
        } else if (const auto* r = std::get_if<BlockR>(&b)) {
            check_rho(r->rho, "R");
        } else if (const auto* n2 = std::get_if<BlockN2>(&b)) {
            check_rho(n2->rho, "N2");
        } else if (const auto* oc = std::get_if<BlockOffCircle>(&b)) {
            if (oc->half_dim < 1) throw Error("OffCircle half_dim must be >= 1");
        }
        n_ += block_half_dim(b);
        BlockData d = block_data(b);
        splus_one_ += d.splus_one;
        nu_one_ += d.nu_one;
        for (auto& p : d.points)
            points_.push_back({p.pt, p.splus, p.sminus, p.nu});
    }
}

long NormalForm::elliptic_count() const {
    long c = 0;
    for (const auto& p : points_) c += p.sminus;
    return c;
}

NormalForm::Census NormalForm::census() const {
    Census c;
    for (const auto& b : blocks_) {
        if (const auto* n1 = std::get_if<BlockN1>(&b)) {
            (n1->lambda == 1 ? c.n1_pos : c.n1_neg)++;
        } else if (std::holds_alternative<BlockD>(b)) {
            c.s++;
        } else if (std::holds_alternative<BlockR>(b)) {
            c.r++;
        } else if (const auto* n2 = std::get_if<BlockN2>(&b)) {
            (n2->trivial ? c.r_zero : c.r_star)++;
        } else {
            // Off-circle spectrum deforms to hyperbolic pairs without touching
            // the unit circle; it counts into s for the (4.2)-style census.
            c.off++;
            c.s += std::get<BlockOffCircle>(b).half_dim;
        }
    }
    return c;
}

std::string NormalForm::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < blocks_.size(); ++i) {
        if (i) os << " <> ";
        os << block_str(blocks_[i]);
    }
    return os.str();
}

NormalForm diamond_sum(const NormalForm& a, const NormalForm& b) {
    std::vector<BasicBlock> blocks = a.blocks();
    blocks.insert(blocks.end(), b.blocks().begin(), b.blocks().end());
    return NormalForm(std::move(blocks));
}

namespace {

// Can the given omega coincide with the stored point?  Exact matching only:
// rational points compare by value, irrational ones by stored identity.
bool omega_matches(const Omega& omega, const CirclePoint& pt, bool* undecidable) {
    if (std::holds_alternative<OmegaOne>(omega)) return false; // t=0 not stored
    if (std::holds_alternative<OmegaMinusOne>(omega)) {
        if (pt.is_rational()) return pt.t().exact_value() == Rat(1, 2);
        // Declared irrational: never equal to 1/2.
        return false;
    }
    const auto& q = std::get<CirclePoint>(omega);
    if (q.same_point(pt)) return true;
    if (q.rho.is_rational() != pt.rho.is_rational()) return false;
    if (q.rho.is_rational()) return false; // exact comparison already done
    // Two distinct irrational ids: equality is not decidable from enclosures.
    if (!q.rho.same_as(pt.rho)) {
        ExactReal a = q.t(), b = pt.t();
        if (a.hi() < b.lo() || b.hi() < a.lo()) return false; // disjoint
        *undecidable = true;
    }
    return false;
}

} // namespace

Splitting splitting_pair(const NormalForm& nf, const Omega& omega) {
    if (std::holds_alternative<OmegaOne>(omega))
        return {nf.splus_one(), nf.splus_one()}; // S^+(1) = S^-(1) at ±1
    Splitting total;
    bool undecidable = false;
    for (const auto& p : nf.circle_points()) {
        if (omega_matches(omega, p.pt, &undecidable)) total += {p.splus, p.sminus};
    }
    if (undecidable)
        throw PrecisionError(
            "omega is not exactly representable against the stored rotation numbers");
    return total;
}

long circle_nullity(const NormalForm& nf, const Omega& omega) {
    if (std::holds_alternative<OmegaOne>(omega)) return nf.nullity_one();
    long total = 0;
    bool undecidable = false;
    for (const auto& p : nf.circle_points()) {
        if (omega_matches(omega, p.pt, &undecidable)) total += p.nu;
    }
    if (undecidable)
        throw PrecisionError(
            "omega is not exactly representable against the stored rotation numbers");
    return total;
}

} // namespace sil
