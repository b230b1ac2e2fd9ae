#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sil/germ.hpp"

namespace sil {

// A positive real entering an abstract jump instance: exact rational, or a
// certified enclosure declared irrational.  Path instances produce these as
// theta/pi values of stored spectrum points.
struct AlphaValue {
    bool rational = true;
    Rat exact;
    ExactReal range;
    std::string id; // identity for vertex bookkeeping (irrational case)

    ExactReal value() const { return rational ? ExactReal(exact) : range; }
    static AlphaValue from_rat(Rat v);
    static AlphaValue from_irrational(ExactReal range, std::string id);
    static AlphaValue from_point(const CirclePoint& pt); // theta/pi = 2t
};

struct AbstractRow {
    long beta = 0;
    std::vector<AlphaValue> alphas; // one entry per unit of multiplicity
    std::string label;
    // Optional sharper enclosure of D = beta + sum(alphas), e.g. the reduced
    // mean-index value of the germ that induced this row.
    std::optional<ExactReal> D_override;
};

// Instance of the abstract jump problem: rows (beta_i, alpha_{i,j}) with
// certified nonzero D_i, and the window width delta for near-integer
// fractional parts.
class AbstractJumpInstance {
public:
    AbstractJumpInstance(std::vector<AbstractRow> rows, Rat delta);

    const std::vector<AbstractRow>& rows() const { return rows_; }
    int q() const { return static_cast<int>(rows_.size()); }
    const Rat& delta() const { return delta_; }
    const Int& M() const { return M_; } // clearing modulus
    ExactReal D(int i) const { return D_[i]; }
    int varrho(int i) const { return varrho_[i]; }
    long l() const; // q + total alpha count

private:
    std::vector<AbstractRow> rows_;
    Rat delta_;
    Int M_;
    std::vector<ExactReal> D_;
    std::vector<int> varrho_;
};

// Least positive M with M*alpha integral for every rational alpha; 1 when
// all alphas are irrational.
Int clearing_modulus(const AbstractJumpInstance& instance);

struct AbstractSolution {
    Int N;
    std::vector<Int> m;
    std::vector<long> Delta;
    std::vector<int> chi;                  // base vertex components
    std::vector<std::vector<int>> chi_rot; // per row, per alpha
    Rat eps_achieved;                      // certified upper bound
};

struct ScanOptions {
    Rat eps = Rat(1, 1000);
    long scan_limit = 10000000;
    int workers = 1;
    Int start = 1;
    // Required vertex sides, flattened as [base components..., rotation
    // components row-major].  Unconstrained entries are nullopt.  Used for
    // the dual-vertex search.
    std::vector<std::optional<int>> required_vertex;
};

template <typename Solution>
struct SolveOutcome {
    std::vector<Solution> found;
    bool exhausted = false;     // scan limit reached before `count`
    Int last_scanned = 0;
    long dropped = 0;      // candidates that failed exact verification
    long uncertain = 0;    // N skipped on precision grounds
};

SolveOutcome<AbstractSolution> solve_abstract(const AbstractJumpInstance& instance,
                                              long count,
                                              const ScanOptions& opts = {});

// ---------------------------------------------------------------------------

// Symplectic-path instance: germs with certified nonzero mean indices, the
// half-dimension, delta, the clearing modulus, and the synchronized-jump
// horizon mbar.
class JumpInstance {
public:
    static JumpInstance make(std::vector<PathGerm> germs, int n,
                             RelationSet relations = {}, Rat delta = Rat(1, 20),
                             std::optional<long> mbar = std::nullopt);

    const std::vector<PathGerm>& germs() const { return germs_; }
    int n() const { return n_; }
    const Rat& delta() const { return delta_; }
    const RelationSet& relations() const { return relations_; }
    long mbar() const { return mbar_; }
    const Int& M() const { return abstract_.M(); }
    int varrho(int i) const { return abstract_.varrho(i); }
    const AbstractJumpInstance& induced() const { return abstract_; }

    // Torus vector of the vertex search: 1/(M|D_i|) then alpha_{i,j}/|D_i|.
    std::vector<ExactReal> torus_vector() const;

private:
    JumpInstance(std::vector<PathGerm> germs, int n, RelationSet relations,
                 Rat delta, long mbar, AbstractJumpInstance abstract);
    std::vector<PathGerm> germs_;
    int n_;
    Rat delta_;
    RelationSet relations_;
    long mbar_;
    AbstractJumpInstance abstract_;
};

struct CheckRecord {
    std::string display; // e.g. "(3.26)"
    std::string orbit;
    long m = 0; // 0 when not per-iterate
    std::string lhs, rhs;
    bool pass = true;
};

struct JumpCertificate {
    Int N;
    std::vector<int> chi;
    std::vector<std::vector<int>> chi_rot;
    std::vector<Int> m;
    std::vector<long> Delta;
    std::vector<long> C;
    std::vector<int> varrho;
    long mbar = 0;
    Rat delta, eps, eps_achieved;
    Int M;
    std::vector<std::map<long, long>> Q; // nonzero Q_i(m) entries
    std::vector<CheckRecord> checks;
};

SolveOutcome<JumpCertificate> solve_paths(const JumpInstance& instance,
                                          long count,
                                          const ScanOptions& opts = {});

// Search at the opposite vertex (irrational components flipped) for a fresh
// certificate with Delta'_k + Delta_k = C(M_k) for every k, verified exactly.
SolveOutcome<JumpCertificate> dual_certificate(const JumpInstance& instance,
                                               const JumpCertificate& cert,
                                               const ScanOptions& opts = {});

struct VerifyReport {
    bool all_pass = true;
    std::string first_violation; // display name, empty when all pass
    std::vector<CheckRecord> checks;
};

// Independent re-checker: recomputes every display from the instance and the
// certificate head (N, chi, m) and trusts nothing else in the body.
VerifyReport verify_certificate(const JumpInstance& instance,
                                const JumpCertificate& cert);

} // namespace sil
