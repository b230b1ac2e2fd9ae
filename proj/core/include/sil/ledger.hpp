#pragma once

#include <map>

#include "sil/surface.hpp"

namespace sil {

// Good iterate: the Maslov-type index of the m-th iterate has the parity of
// the prime's.  Bad iterates are homologically invisible and count nowhere.
bool is_good_iterate(const PrimeCharacteristic& c, long m);

// Average Euler characteristic of a nondegenerate prime characteristic,
// evaluated on Viterbo indices: (-1)^i(y) when i(y^2)-i(y) is even, half
// that otherwise.
Rat average_euler_char(const PrimeCharacteristic& c, int n);

struct ResonanceReport {
    ExactReal r_plus;  // sum over positive means of chi-hat/mean - 1/2
    ExactReal r_minus; // sum over negative means of chi-hat/mean
    bool admissible = false;
    bool minus_empty = false;
};

// The two resonance residuals, interval-certified against tol.
ResonanceReport resonance_residuals(const SurfaceModel& model, const Rat& tol);

struct PerfectReport {
    bool perfect = true;
    struct Violation {
        std::string orbit;
        long m;
        long index; // Maslov-type
    };
    std::vector<Violation> violations;
};

// Scans good iterates over the certified horizon where the forbidden index
// values can still occur.  Zero-mean characteristics are decided through the
// constant-index profile (n=3) or rejected.
PerfectReport is_perfect(const SurfaceModel& model);

// Exact Morse-type numbers M_p over a closed window of Viterbo indices:
// counts of good iterates per index value.  Throws InfiniteMorseCount when a
// zero-mean characteristic makes some count infinite.
std::map<long, long> morse_numbers(const SurfaceModel& model,
                                             const JumpCertificate* cert,
                                             long window_lo,
                                             long window_hi);

long betti_number(long p); // 1 for even p >= 0, else 0
Int betti_alternating_sum(long lo, long hi); // sum (-1)^p b_p

struct AlternatingSumReport {
    Int morse_side;
    Int betti_side;
    bool holds = false;      // (2.16) over odd windows, (2.17) over even ones
    bool odd_window = true;  // both endpoints odd
};

AlternatingSumReport alternating_sum_check(const SurfaceModel& model,
                                           const JumpCertificate* cert,
                                           long window_lo, long window_hi);

// Counts of the 2m_k-iterates against the window thresholds ((4.21)-(4.24)
// for n even, the H-variants for n odd) plus the per-characteristic interior
// tables with their symmetry.
struct JumpCounts {
    long plus_even = 0, plus_odd = 0, minus_even = 0, minus_odd = 0;
    // Per-characteristic membership in the four counts, same order as the
    // model: 'e' / 'o' / 0.
    std::vector<char> in_plus, in_minus;
    struct InteriorTable {
        long plus_even = 0, plus_odd = 0, minus_even = 0, minus_odd = 0;
    };
    std::vector<InteriorTable> interior; // per characteristic
    bool interior_symmetry = true;       // M_+^e(k) == M_-^e(k), odd likewise
    Rat claim1_residual;                 // sum 2 m_k chi-hat - N (exact)
};

JumpCounts jump_counts(const SurfaceModel& model, const JumpCertificate& cert);

struct LedgerReport {
    long window_lo = 0, window_hi = 0;
    std::map<long, long> morse;
    Int morse_alt_sum;
    Int betti_alt_sum;
    JumpCounts counts;       // primary certificate
    JumpCounts counts_dual;  // dual certificate
    JumpCertificate cert;
    JumpCertificate dual;
    long multiplicity_bound = 0;
    std::vector<std::string> non_hyperbolic;
    std::vector<std::string> log;
    int eps_halvings = 0;
};

struct ReportOptions {
    Rat delta = Rat(1, 20);
    Rat eps = Rat(1, 1000);
    long scan_limit = 10000000;
    int workers = 1;
    int max_eps_halvings = 3;
    Rat resonance_tol = Rat(1, 1000000000);
};

// The Morse-theoretic multiplicity pipeline: horizon, certificate pair,
// jump counts at both vertices, window Morse inequality, and the final
// lower bound with the non-hyperbolic sublist.
LedgerReport multiplicity_report(const SurfaceModel& model,
                                 const ReportOptions& opts = {});

// Constant Viterbo index of a zero-mean characteristic in R^6 models:
// returns -4 after verifying the profile over m <= verify_up_to.
long zero_mean_profile(const PrimeCharacteristic& c, int n,
                            const RelationSet& relations,
                            long verify_up_to = 10000);

} // namespace sil
