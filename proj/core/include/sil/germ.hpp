#pragma once

#include <span>
#include <string>
#include <utility>

#include "sil/mean_index.hpp"
#include "sil/normal_form.hpp"

namespace sil {

// Everything the iteration formula needs about a symplectic path: its
// initial Maslov-type index and the normal form of its end matrix.
struct PathGerm {
    long initial_index = 0;
    NormalForm end_form;
    std::string label;
};

// Maslov-type index of the m-th iterate, computed exactly from the stored
// germ.  Throws PrecisionError when a fractional part m*rho is not decidable
// at the stored precision.
long index_at(const PathGerm& germ, long m);

// Nullity of the m-th iterate: sum of circle nullities over all stored
// spectrum points that become m-th roots of unity (plus the omega=1 data).
long nullity_at(const PathGerm& germ, long m);

// index_at shifted to the closed-characteristic grading: i(y^m) = i(y,m) - n.
long viterbo_index(const PathGerm& germ, long m, int n);

MeanIndex mean_index(const PathGerm& germ);

// (low, high) with -low <= index_at(m) - m*mean < high + 1 for every m >= 1.
std::pair<long, long> deviation_bound(const PathGerm& germ);

// Incremental iterate walker: visits m = 1, 2, ... keeping exact per-point
// remainders, much cheaper than repeated index_at calls over a long range.
class IterateWalker {
public:
    explicit IterateWalker(const PathGerm& germ);
    // Advance to the next m and return its Maslov-type index.
    long next();
    long current_m() const { return m_; }
    long nullity() const;
    bool good() const; // parity of the current index matches the prime's

private:
    const PathGerm* germ_;
    long m_ = 0;
    long base_coeff_ = 0; // i1 + S^+(1) - C
    long tail_ = 0;       // S^+(1) + C
    struct PointState {
        // running enclosure of m * t as (num_lo / den, width numerator w*m)
        Int den;
        Int step_lo;   // t_lo * den
        Int width;     // per-step width numerator (0 when exact)
        Int num_lo;    // m * step_lo, reduced mod den lazily through floor
        Int flo;       // floor(m * t_lo)
        bool rational; // exact values
        long sminus;
        long nu;
        Int qden;      // for rational points: denominator q of t
    };
    std::vector<PointState> pts_;
    long parity_anchor_ = 0;
    long idx_ = 0;
};

// Certified horizon for synchronized jumps: the smallest bound mbar such
// that for every germ, every m >= mbar and every l >= 1,
//   index_at(m+l) >= index_at(l) + n + 1   (positive mean index), or
//   index_at(m+l) <= index_at(l) - n - 1   (negative mean index).
// The analytic bound ceil((n+1+low+high+1)/|mean|) always works; when a germ
// carries rotation data the bound is tightened by a certified downward scan.
long stable_jump_horizon(std::span<const PathGerm> germs, int n,
                              const RelationSet& relations = {});

} // namespace sil
