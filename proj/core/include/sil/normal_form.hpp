#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sil/rotation.hpp"

namespace sil {

// Basic symplectic normal-form blocks.  N1 and D are 2x2, R is the 2x2
// rotation by 2*pi*rho, N2 is the 4x4 block built on a rotation pair, and
// OffCircle stands for any block whose spectrum avoids both the unit circle
// and the reals (only its dimension matters for index theory).
struct BlockN1 {
    int lambda; // +1 or -1
    int b;      // -1, 0, +1
};
struct BlockD {
    int sign; // +1 or -1 (representative eigenvalue ±2)
};
struct BlockR {
    RotationNumber rho; // != 1/2
};
struct BlockN2 {
    RotationNumber rho; // != 1/2
    bool trivial;       // sign of (b2-b3)sin(theta): trivial if positive
};
struct BlockOffCircle {
    int half_dim; // >= 1
};

using BasicBlock = std::variant<BlockN1, BlockD, BlockR, BlockN2, BlockOffCircle>;

int block_half_dim(const BasicBlock& b);
std::string block_str(const BasicBlock& b);

// Splitting pair (S^+, S^-) at a point of the unit circle.
struct Splitting {
    long plus = 0;
    long minus = 0;
    Splitting& operator+=(const Splitting& o) {
        plus += o.plus;
        minus += o.minus;
        return *this;
    }
    bool operator==(const Splitting&) const = default;
};

// A point of evaluation on U: +1, -1, or a stored rotation point.
struct OmegaOne {};
struct OmegaMinusOne {};
using Omega = std::variant<OmegaOne, OmegaMinusOne, CirclePoint>;

// Diamond-sum of basic blocks with derived circle data.  Immutable value.
class NormalForm {
public:
    NormalForm() = default;
    explicit NormalForm(std::vector<BasicBlock> blocks);

    const std::vector<BasicBlock>& blocks() const { return blocks_; }
    int n() const { return n_; } // half-dimension

    // Data attached to one stored spectrum point in (0,1) (theta/2pi scale).
    struct SpecPoint {
        CirclePoint pt;
        long splus = 0;
        long sminus = 0;
        long nu = 0;
    };

    // All circle spectrum with theta in (0, 2pi), one entry per stored point;
    // the -1 eigenvalue appears as the rational point 1/2.
    const std::vector<SpecPoint>& circle_points() const { return points_; }

    long splus_one() const { return splus_one_; }   // S^+(1)
    long nullity_one() const { return nu_one_; }    // nu_1
    long elliptic_count() const;                    // C(M)

    // Block census (r, s, r*, r0) and the count of N1(1,1) factors.
    struct Census {
        int r = 0, s = 0, r_star = 0, r_zero = 0, n1_pos = 0, n1_neg = 0,
            off = 0;
    };
    Census census() const;

    std::string str() const;

private:
    std::vector<BasicBlock> blocks_;
    int n_ = 0;
    std::vector<SpecPoint> points_;
    long splus_one_ = 0;
    long nu_one_ = 0;
};

NormalForm diamond_sum(const NormalForm& a, const NormalForm& b);

// Per-block table lookup summed by additivity.  The omega must be ±1 or
// match a stored rotation point exactly; anything else is a precision error.
Splitting splitting_pair(const NormalForm& nf, const Omega& omega);
long circle_nullity(const NormalForm& nf, const Omega& omega);

} // namespace sil
