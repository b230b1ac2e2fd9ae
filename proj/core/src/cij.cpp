#include "sil/cij.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace sil {

namespace {

long to_ll(const Int& v, const char* what) {
    if (!v.fits_slong_p()) throw Error(std::string(what) + ": value out of range");
    return v.get_si();
}

std::string int_str(const Int& v) { return v.get_str(); }

} // namespace

AlphaValue AlphaValue::from_rat(Rat v) {
    v.canonicalize();
    if (v <= 0) throw Error("alpha must be positive");
    AlphaValue a;
    a.rational = true;
    a.exact = v;
    a.range = ExactReal(a.exact);
    return a;
}

AlphaValue AlphaValue::from_irrational(ExactReal range, std::string id) {
    if (range.lo() <= 0) throw Error("alpha must be positive");
    AlphaValue a;
    a.rational = false;
    a.range = std::move(range);
    a.id = std::move(id);
    return a;
}

AlphaValue AlphaValue::from_point(const CirclePoint& pt) {
    if (pt.is_rational()) return from_rat(Rat(2) * pt.t().exact_value());
    std::string id = pt.rho.id().empty() ? pt.rho.str() : pt.rho.id();
    if (pt.reflected) id += "~r";
    return from_irrational(pt.theta_over_pi(), id);
}

AbstractJumpInstance::AbstractJumpInstance(std::vector<AbstractRow> rows, Rat delta)
    : rows_(std::move(rows)), delta_(std::move(delta)) {
    delta_.canonicalize();
    if (delta_ <= 0 || delta_ >= Rat(1, 2))
        throw HypothesisError("delta must lie in (0, 1/2)");
    size_t mu_max = 0;
    for (const auto& r : rows_) mu_max = std::max(mu_max, r.alphas.size());
    if (delta_ * Rat(static_cast<long>(mu_max)) >= Rat(1, 2))
        throw HypothesisError("delta * max(mu_i) must be < 1/2");
    // Clearing modulus: least M with M*alpha integral for rational alphas.
    M_ = 1;
    for (const auto& r : rows_)
        for (const auto& a : r.alphas)
            if (a.rational) {
                Int den = a.exact.get_den();
                Int g;
                mpz_gcd(g.get_mpz_t(), M_.get_mpz_t(), den.get_mpz_t());
                M_ = M_ / g * den;
            }
    for (const auto& r : rows_) {
        ExactReal D = r.D_override ? *r.D_override : [&] {
            ExactReal d{Rat(r.beta)};
            for (const auto& a : r.alphas) d += a.value();
            return d;
        }();
        int s = D.sign();
        if (s == 0)
            throw HypothesisError("D_i must be nonzero (row " + r.label + ")");
        D_.push_back(D);
        varrho_.push_back(s);
    }
}

long AbstractJumpInstance::l() const {
    long total = q();
    for (const auto& r : rows_) total += static_cast<long>(r.alphas.size());
    return total;
}

Int clearing_modulus(const AbstractJumpInstance& instance) { return instance.M(); }

// ---------------------------------------------------------------------------
// Scan machinery.
//
// Every vertex condition is a fractional-part test {N*w} < eps or > 1-eps.
// Components are held as integers scaled by a common denominator times the
// denominator of eps, so the per-N work is integer adds and compares; the
// enclosure width of inexact components grows linearly in N and is carried
// along exactly.  Any N whose classification is not certain is skipped, never
// accepted.

namespace {

enum class Side { Zero, One, Reject, Uncertain };

struct ScanComp {
    bool exact = true;
    bool is_base = true;
    int row = 0;
    int alpha_idx = -1;
    Int den;     // scaled denominator (includes the eps denominator)
    Int step;    // scaled w_lo, reduced mod den
    Int width;   // per-N width numerator (0 when exact)
    Int a0;      // accept side 0: value-numerator < / <= bounds against a0
    Int a1;      // accept side 1 threshold
    std::optional<int> required;
    Rat selectivity;
    int orig = 0;

    Side classify(const Int& rem, const Int& total_width) const {
        Side s;
        if (exact) {
            if (rem < a0)
                s = Side::Zero;
            else if (rem >= a1)
                s = Side::One;
            else
                s = Side::Reject;
        } else {
            Int hi = rem + total_width;
            if (hi > den) return Side::Uncertain; // wraps an integer
            if (hi <= a0)
                s = Side::Zero;
            else if (rem >= a1)
                s = Side::One;
            else if (rem >= a0 && hi <= a1)
                s = Side::Reject;
            else
                return Side::Uncertain;
        }
        if (s == Side::Zero && required && *required != 0) return Side::Reject;
        if (s == Side::One && required && *required != 1) return Side::Reject;
        return s;
    }
};

// Scaled representation of w against eps = pe/qe: den = D*qe where D is a
// power of ten large enough for the enclosure, step/width scaled to match.
ScanComp make_comp(const ExactReal& w, bool w_exact, const Rat& eps) {
    ScanComp c;
    Int pe = eps.get_num(), qe = eps.get_den();
    if (w_exact) {
        Rat v = w.lo();
        Int den = v.get_den() * qe;
        Int step = v.get_num() * qe;
        mpz_mod(step.get_mpz_t(), step.get_mpz_t(), den.get_mpz_t());
        c.exact = true;
        c.den = den;
        c.step = step;
        c.width = 0;
        c.a0 = pe * v.get_den();              // rem <  a0  <=> {Nw} < eps
        c.a1 = (qe - pe) * v.get_den() + 1;   // rem >= a1  <=> {Nw} > 1-eps
        // Selectivity estimate: accepted residues / den.
        Int acc = c.a0 + (c.den - c.a1 + 1);
        c.selectivity = Rat(acc) / Rat(c.den);
    } else {
        // Scale to 10^60 before multiplying in qe.
        Int G;
        mpz_ui_pow_ui(G.get_mpz_t(), 10, 60);
        Int lo = floor_q(w.lo() * Rat(G));
        Int hi = ceil_q(w.hi() * Rat(G));
        c.exact = false;
        c.den = G * qe;
        c.step = lo * qe;
        mpz_mod(c.step.get_mpz_t(), c.step.get_mpz_t(), c.den.get_mpz_t());
        c.width = (hi - lo) * qe;
        c.a0 = pe * G;
        c.a1 = (qe - pe) * G;
        c.selectivity = 2 * eps;
    }
    return c;
}

struct ScanStats {
    long dropped = 0;
    long uncertain = 0;
};

// Deterministic chunked scan: workers classify and verify candidates, the
// collector consumes chunks in order, so results are independent of the
// worker count.
template <typename Solution, typename VerifyFn>
SolveOutcome<Solution> scan_core(const std::vector<ScanComp>& comps_in,
                                 long count, const ScanOptions& opts,
                                 VerifyFn&& verify) {
    std::vector<ScanComp> comps = comps_in;
    std::stable_sort(comps.begin(), comps.end(),
                     [](const ScanComp& a, const ScanComp& b) {
                         if (a.selectivity != b.selectivity)
                             return a.selectivity < b.selectivity;
                         return a.orig < b.orig;
                     });
    const long start = to_ll(opts.start, "scan start");
    const long end = start + opts.scan_limit;
    const long kChunk = 1 << 15;
    const long nchunks = (opts.scan_limit + kChunk - 1) / kChunk;

    struct ChunkResult {
        std::vector<std::pair<long, Solution>> sols;
        ScanStats stats;
    };

    std::atomic<long> next_chunk{0};
    std::atomic<bool> stop{false};
    std::map<long, ChunkResult> done;
    std::mutex mu;
    std::condition_variable cv;

    auto run_chunk = [&](long ci) {
        ChunkResult res;
        long lo = start + ci * kChunk;
        long hi = std::min(end, lo + kChunk);
        // Incremental state for the leading component.
        Int rem0, w0;
        if (!comps.empty()) {
            rem0 = int_of(lo - 1) * comps[0].step;
            mpz_mod(rem0.get_mpz_t(), rem0.get_mpz_t(), comps[0].den.get_mpz_t());
            w0 = int_of(lo - 1) * comps[0].width;
        }
        std::vector<int> sides(comps.size());
        for (long N = lo; N < hi; ++N) {
            bool ok = true, uncertain = false;
            if (!comps.empty()) {
                rem0 += comps[0].step;
                if (rem0 >= comps[0].den) rem0 -= comps[0].den;
                w0 += comps[0].width;
                Side s = comps[0].classify(rem0, w0);
                if (s == Side::Reject) continue;
                if (s == Side::Uncertain) {
                    res.stats.uncertain++;
                    continue;
                }
                sides[0] = s == Side::One ? 1 : 0;
            }
            for (size_t j = 1; j < comps.size() && ok; ++j) {
                Int rem = int_of(N) * comps[j].step;
                mpz_mod(rem.get_mpz_t(), rem.get_mpz_t(), comps[j].den.get_mpz_t());
                Side s = comps[j].classify(rem, int_of(N) * comps[j].width);
                if (s == Side::Reject) ok = false;
                else if (s == Side::Uncertain) {
                    uncertain = true;
                    ok = false;
                } else {
                    sides[j] = s == Side::One ? 1 : 0;
                }
            }
            if (!ok) {
                if (uncertain) res.stats.uncertain++;
                continue;
            }
            // Unscramble sides to original component order.
            std::vector<int> orig_sides(comps.size());
            for (size_t j = 0; j < comps.size(); ++j)
                orig_sides[comps[j].orig] = sides[j];
            auto sol = verify(N, orig_sides, &res.stats);
            if (sol) res.sols.emplace_back(N, std::move(*sol));
        }
        return res;
    };

    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            long ci = next_chunk.fetch_add(1);
            if (ci >= nchunks) return;
            ChunkResult res = run_chunk(ci);
            {
                std::lock_guard<std::mutex> lk(mu);
                done.emplace(ci, std::move(res));
            }
            cv.notify_all();
        }
    };

    SolveOutcome<Solution> out;
    int nw = std::max(1, opts.workers);
    if (nw == 1) {
        for (long ci = 0; ci < nchunks; ++ci) {
            ChunkResult res = run_chunk(ci);
            out.dropped += res.stats.dropped;
            out.uncertain += res.stats.uncertain;
            for (auto& [N, sol] : res.sols) {
                if (static_cast<long>(out.found.size()) < count)
                    out.found.push_back(std::move(sol));
            }
            out.last_scanned = std::min<long>(end - 1, start + (ci + 1) * kChunk - 1);
            if (static_cast<long>(out.found.size()) >= count) break;
        }
    } else {
        std::vector<std::thread> threads;
        threads.reserve(nw);
        for (int i = 0; i < nw; ++i) threads.emplace_back(worker);
        for (long ci = 0; ci < nchunks; ++ci) {
            ChunkResult res;
            {
                std::unique_lock<std::mutex> lk(mu);
                cv.wait(lk, [&] { return done.count(ci) > 0; });
                res = std::move(done.at(ci));
                done.erase(ci);
            }
            out.dropped += res.stats.dropped;
            out.uncertain += res.stats.uncertain;
            for (auto& [N, sol] : res.sols) {
                if (static_cast<long>(out.found.size()) < count)
                    out.found.push_back(std::move(sol));
            }
            out.last_scanned = std::min<long>(end - 1, start + (ci + 1) * kChunk - 1);
            if (static_cast<long>(out.found.size()) >= count) {
                stop.store(true);
                break;
            }
        }
        stop.store(true);
        cv.notify_all();
        for (auto& t : threads) t.join();
    }
    out.exhausted = static_cast<long>(out.found.size()) < count;
    return out;
}

// Per-row data shared by the abstract and path evaluators.
struct RowCtx {
    long beta = 0;
    std::vector<AlphaValue> alphas;
    ExactReal absD;
    bool D_rational = false;
    ExactReal w_base; // 1 / (M |D|)
    int varrho = 1;
    std::string label;
};

std::vector<RowCtx> build_rows(const AbstractJumpInstance& inst) {
    std::vector<RowCtx> rows;
    ExactReal Mr{Rat(inst.M())};
    for (int i = 0; i < inst.q(); ++i) {
        const auto& r = inst.rows()[i];
        RowCtx c;
        c.beta = r.beta;
        c.alphas = r.alphas;
        c.varrho = inst.varrho(i);
        c.label = r.label.empty() ? ("row" + std::to_string(i + 1)) : r.label;
        ExactReal D = inst.D(i);
        c.absD = c.varrho > 0 ? D : -D;
        c.D_rational = D.is_exact();
        c.w_base = ExactReal(Rat(1)) / (Mr * c.absD);
        rows.push_back(std::move(c));
    }
    return rows;
}

std::vector<ScanComp> build_comps(const std::vector<RowCtx>& rows, const Rat& eps,
                                  const std::vector<std::optional<int>>& required) {
    std::vector<ScanComp> comps;
    int idx = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        ScanComp c = make_comp(rows[i].w_base, rows[i].D_rational, eps);
        c.is_base = true;
        c.row = static_cast<int>(i);
        c.orig = idx++;
        comps.push_back(std::move(c));
    }
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < rows[i].alphas.size(); ++j) {
            const auto& a = rows[i].alphas[j];
            ExactReal w = a.value() / rows[i].absD;
            bool ex = a.rational && rows[i].D_rational;
            ScanComp c = make_comp(w, ex, eps);
            c.is_base = false;
            c.row = static_cast<int>(i);
            c.alpha_idx = static_cast<int>(j);
            c.orig = idx++;
            comps.push_back(std::move(c));
        }
    }
    if (!required.empty()) {
        if (required.size() != comps.size())
            throw Error("required vertex length mismatch");
        for (size_t k = 0; k < comps.size(); ++k)
            comps[k].required = required[k];
    }
    return comps;
}

// Exact evaluation of one row at a candidate N: m_i, E-values, Delta, and
// the achieved vertex distance.  Returns false when the candidate must be
// dropped (a display fails) and throws PrecisionError when undecidable.
struct RowEval {
    Int m;
    long Delta = 0;
    std::vector<Int> E;        // E(m_i alpha_j)
    std::vector<int> frac_side; // observed side of {m_i alpha_j}
    Rat eps_hi = 0;            // certified upper bound on |{N w}-chi|
    bool ok = true;
    bool m_valid = true;       // m could be derived from (N, chi)
    std::string fail_display;
};

RowEval eval_row(const RowCtx& row, const Int& M, const Rat& delta, const Int& N,
                 int chi_base) {
    RowEval ev;
    ExactReal x = Rat(N) * row.w_base;
    Int fl;
    ExactReal fr{Rat(0)};
    if (row.D_rational) {
        Rat xv = x.exact_value();
        fl = floor_q(xv);
        fr = ExactReal(frac_q(xv));
    } else {
        fl = floor_cert_irrational(x, "floor(N/(M|D|))");
        fr = ExactReal(x.lo() - Rat(fl), x.hi() - Rat(fl));
    }
    ev.m = (fl + chi_base) * M;
    if (ev.m < 1) {
        ev.ok = false;
        ev.m_valid = false;
        ev.fail_display = "(3.30)";
        return ev;
    }
    ev.eps_hi = chi_base == 0 ? fr.hi() : Rat(1) - fr.lo();
    Rat mr(ev.m);
    for (const auto& a : row.alphas) {
        if (a.rational) {
            Rat y = mr * a.exact;
            if (y.get_den() != 1) {
                // (3.14) fails: M did not clear this alpha at this m.
                ev.ok = false;
                ev.fail_display = "(3.14)";
                return ev;
            }
            ev.E.push_back(Int(y.get_num()));
            ev.frac_side.push_back(0); // {y} = 0
        } else {
            ExactReal y = mr * a.range;
            Int k = floor_cert_irrational(y, "floor(m*alpha)");
            ExactReal f(y.lo() - Rat(k), y.hi() - Rat(k));
            ev.E.push_back(k + 1);
            if (f.hi() <= delta) {
                ev.Delta++;
                ev.frac_side.push_back(0);
            } else if (f.lo() >= Rat(1) - delta) {
                ev.frac_side.push_back(1);
            } else if (f.lo() >= delta && f.hi() <= Rat(1) - delta) {
                // (3.13) certifiably fails.
                ev.ok = false;
                ev.fail_display = "(3.13)";
                return ev;
            } else {
                throw PrecisionError("(3.13) membership undecidable");
            }
        }
    }
    // (3.12): m beta + sum E = varrho N + Delta.
    Int lhs = ev.m * row.beta;
    for (const auto& e : ev.E) lhs += e;
    Int rhs = Int(row.varrho) * N + ev.Delta;
    if (lhs != rhs) {
        ev.ok = false;
        ev.fail_display = "(3.12)";
    }
    return ev;
}

} // namespace

SolveOutcome<AbstractSolution> solve_abstract(const AbstractJumpInstance& instance,
                                              long count,
                                              const ScanOptions& opts) {
    if (opts.eps <= 0 || opts.eps >= Rat(1, 2))
        throw HypothesisError("eps must lie in (0, 1/2)");
    auto rows = build_rows(instance);
    auto comps = build_comps(rows, opts.eps, opts.required_vertex);
    const Int M = instance.M();
    const Rat delta = instance.delta();
    const int q = instance.q();

    auto verify = [&](long Nll, const std::vector<int>& sides,
                      ScanStats* stats) -> std::optional<AbstractSolution> {
        Int N(Nll);
        AbstractSolution sol;
        sol.N = N;
        sol.eps_achieved = 0;
        sol.chi.resize(q);
        sol.chi_rot.resize(q);
        int flat = q;
        try {
            for (int i = 0; i < q; ++i) {
                sol.chi[i] = sides[i];
                RowEval ev = eval_row(rows[i], M, delta, N, sides[i]);
                if (!ev.ok) {
                    stats->dropped++;
                    return std::nullopt;
                }
                sol.m.push_back(ev.m);
                sol.Delta.push_back(ev.Delta);
                sol.eps_achieved = std::max(sol.eps_achieved, ev.eps_hi);
                auto& cr = sol.chi_rot[i];
                for (size_t j = 0; j < rows[i].alphas.size(); ++j)
                    cr.push_back(sides[flat + static_cast<int>(j)]);
                flat += static_cast<int>(rows[i].alphas.size());
            }
        } catch (const PrecisionError&) {
            stats->uncertain++;
            return std::nullopt;
        }
        return sol;
    };

    return scan_core<AbstractSolution>(comps, count, opts, verify);
}

// ---------------------------------------------------------------------------

JumpInstance::JumpInstance(std::vector<PathGerm> germs, int n, RelationSet relations,
                           Rat delta, long mbar, AbstractJumpInstance abstract)
    : germs_(std::move(germs)),
      n_(n),
      delta_(std::move(delta)),
      relations_(std::move(relations)),
      mbar_(mbar),
      abstract_(std::move(abstract)) {}

JumpInstance JumpInstance::make(std::vector<PathGerm> germs, int n,
                                RelationSet relations, Rat delta,
                                std::optional<long> mbar) {
    if (germs.empty()) throw Error("JumpInstance: no germs");
    for (const auto& g : germs)
        if (g.end_form.n() != n)
            throw DimensionError("germ " + g.label + " has half-dimension " +
                                 std::to_string(g.end_form.n()) +
                                 ", expected n=" + std::to_string(n));
    long mb =
        mbar ? *mbar : stable_jump_horizon(std::span<const PathGerm>(germs), n, relations);
    std::vector<AbstractRow> rows;
    for (const auto& g : germs) {
        AbstractRow r;
        r.label = g.label;
        MeanIndex mi = mean_index(g);
        r.beta = g.initial_index + g.end_form.splus_one() -
                 g.end_form.elliptic_count();
        for (const auto& p : g.end_form.circle_points())
            for (long s = 0; s < p.sminus; ++s)
                r.alphas.push_back(AlphaValue::from_point(p.pt));
        // Reduced mean-index enclosure: certified sign even when it rests on
        // declared relations.
        int sign = mi.sign(relations);
        if (sign == 0)
            throw HypothesisError("zero mean index (" + g.label +
                                  ") is excluded from the jump search");
        r.D_override = mi.reduced_value(relations);
        rows.push_back(std::move(r));
    }
    AbstractJumpInstance abstract(std::move(rows), delta);
    return JumpInstance(std::move(germs), n, std::move(relations), delta, mb,
                        std::move(abstract));
}

std::vector<ExactReal> JumpInstance::torus_vector() const {
    std::vector<ExactReal> v;
    auto rows = build_rows(abstract_);
    for (const auto& r : rows) v.push_back(r.w_base);
    for (const auto& r : rows)
        for (const auto& a : r.alphas) v.push_back(a.value() / r.absD);
    return v;
}

namespace {

// Q_i(m): S^- mass at rational spectrum points cleared by m_i whose angle is
// an m-th root of unity.
long q_value(const PathGerm& germ, const Int& m_i, long m) {
    long total = 0;
    for (const auto& p : germ.end_form.circle_points()) {
        if (p.sminus == 0 || !p.pt.is_rational()) continue;
        Rat t = p.pt.t().exact_value();
        if (frac_q(Rat(m_i) * 2 * t) != 0) continue;
        if (frac_q(Rat(m) * t) != 0) continue;
        total += p.sminus;
    }
    return total;
}

struct PathEval {
    bool ok = true;
    bool uncertain = false;
    std::string fail_display;
    JumpCertificate cert;
};

// Full exact evaluation of a path certificate at (N, sides).  When `record`
// is set every display becomes a CheckRecord; verification failures mark the
// record and stop at the first violation.
PathEval eval_paths(const JumpInstance& inst, const std::vector<RowCtx>& rows,
                    const Int& N, const std::vector<int>& base_sides,
                    const std::vector<std::vector<int>>& rot_sides, const Rat& eps,
                    bool record) {
    PathEval pe;
    JumpCertificate& cert = pe.cert;
    const int q = static_cast<int>(rows.size());
    const long mbar = inst.mbar();
    cert.N = N;
    cert.M = inst.M();
    cert.mbar = mbar;
    cert.delta = inst.delta();
    cert.eps = eps;
    cert.eps_achieved = 0;
    cert.chi = base_sides;
    cert.chi_rot = rot_sides;

    auto fail = [&](const std::string& display) {
        pe.ok = false;
        pe.fail_display = display;
    };
    auto note = [&](const std::string& display, const std::string& orbit, long m,
                    const Int& lhs, const Int& rhs) {
        bool pass = lhs == rhs;
        if (record || !pass)
            cert.checks.push_back({display, orbit, m, int_str(lhs), int_str(rhs), pass});
        if (!pass) fail(display);
        return pass;
    };

    try {
        for (int i = 0; i < q && pe.ok; ++i) {
            const PathGerm& germ = inst.germs()[i];
            RowEval ev = eval_row(rows[i], inst.M(), inst.delta(), N, base_sides[i]);
            if (!ev.ok) {
                fail(ev.fail_display);
                break;
            }
            cert.m.push_back(ev.m);
            cert.Delta.push_back(ev.Delta);
            cert.C.push_back(germ.end_form.elliptic_count());
            cert.varrho.push_back(rows[i].varrho);
            cert.eps_achieved = std::max(cert.eps_achieved, ev.eps_hi);

            // (3.31): certified vertex distance strictly below eps.
            bool pass31 = ev.eps_hi < eps;
            if (record || !pass31)
                cert.checks.push_back({"(3.31)", germ.label, 0,
                                       rat_to_string(ev.eps_hi), rat_to_string(eps),
                                       pass31});
            if (!pass31) {
                fail("(3.31)");
                break;
            }

            long two_mi = to_ll(2 * ev.m, "2m_i");
            if (mbar + 2 > two_mi) {
                fail("(4.4)");
                break;
            }

            long splus = germ.end_form.splus_one();
            long C = cert.C.back();
            Int rhoN = Int(rows[i].varrho) * N;

            // (3.28): i(2m_i) = 2 varrho N - (S^+ + C - 2 Delta).
            Int lhs28(index_at(germ, two_mi));
            Int rhs28 = 2 * rhoN - (splus + C - 2 * ev.Delta);
            if (!note("(3.28)", germ.label, 0, lhs28, rhs28)) break;

            std::map<long, long> Qi;
            for (long m = 1; m <= mbar && pe.ok; ++m) {
                Int nu_m(nullity_at(germ, m));
                if (!note("(3.25)", germ.label, m, Int(nullity_at(germ, two_mi - m)),
                          nu_m))
                    break;
                if (!note("(3.25)", germ.label, m, Int(nullity_at(germ, two_mi + m)),
                          nu_m))
                    break;
                Int im(index_at(germ, m));
                if (!note("(3.26)", germ.label, m, Int(index_at(germ, two_mi + m)),
                          2 * rhoN + im))
                    break;
                long Qm = q_value(germ, ev.m, m);
                if (Qm != 0) Qi[m] = Qm;
                if (!note("(3.27)", germ.label, m, Int(index_at(germ, two_mi - m)),
                          2 * rhoN - im - 2 * (splus + Qm)))
                    break;
            }
            cert.Q.push_back(std::move(Qi));

            if (record && pe.ok) {
                // Abstract displays for the certificate body.
                Int lhs12 = ev.m * rows[i].beta;
                for (const auto& e : ev.E) lhs12 += e;
                cert.checks.push_back({"(3.12)", germ.label, 0, int_str(lhs12),
                                       int_str(rhoN + ev.Delta), true});
                cert.checks.push_back({"(3.30)", germ.label, 0, int_str(ev.m),
                                       int_str(ev.m), true});
            }
        }
    } catch (const PrecisionError&) {
        pe.ok = false;
        pe.uncertain = true;
    }
    return pe;
}

std::vector<std::vector<int>> split_rot_sides(const std::vector<RowCtx>& rows,
                                              const std::vector<int>& sides) {
    std::vector<std::vector<int>> out(rows.size());
    size_t flat = rows.size();
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].alphas.size(); ++j)
            out[i].push_back(sides[flat++]);
    return out;
}

} // namespace

SolveOutcome<JumpCertificate> solve_paths(const JumpInstance& instance,
                                          long count,
                                          const ScanOptions& opts) {
    if (opts.eps <= 0 || opts.eps >= Rat(1, 2))
        throw HypothesisError("eps must lie in (0, 1/2)");
    auto rows = build_rows(instance.induced());
    auto comps = build_comps(rows, opts.eps, opts.required_vertex);

    auto verify = [&](long Nll, const std::vector<int>& sides,
                      ScanStats* stats) -> std::optional<JumpCertificate> {
        Int N(Nll);
        std::vector<int> base(sides.begin(), sides.begin() + rows.size());
        auto rot = split_rot_sides(rows, sides);
        PathEval pe = eval_paths(instance, rows, N, base, rot, opts.eps, true);
        if (!pe.ok) {
            if (pe.uncertain)
                stats->uncertain++;
            else
                stats->dropped++;
            return std::nullopt;
        }
        return pe.cert;
    };

    return scan_core<JumpCertificate>(comps, count, opts, verify);
}

SolveOutcome<JumpCertificate> dual_certificate(const JumpInstance& instance,
                                               const JumpCertificate& cert,
                                               const ScanOptions& opts) {
    auto rows = build_rows(instance.induced());
    // Required sides at the opposite vertex: inexact components flip; exact
    // components flip only when some achievable residue of {N w} lies above
    // 1 - eps (residues are multiples of gcd(step, den)).
    std::vector<std::optional<int>> required;
    auto flip_exact = [&](const ExactReal& w, bool w_exact, int side) -> int {
        if (!w_exact) return 1 - side;
        ScanComp c = make_comp(w, true, opts.eps);
        Int g;
        mpz_gcd(g.get_mpz_t(), c.step.get_mpz_t(), c.den.get_mpz_t());
        bool side1_feasible = c.den - g >= c.a1;
        if (side == 0) return side1_feasible ? 1 : 0;
        return 1 - side; // side 0 ({x} = 0) is always reachable
    };
    for (size_t i = 0; i < rows.size(); ++i)
        required.push_back(
            flip_exact(rows[i].w_base, rows[i].D_rational, cert.chi[i]));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].alphas.size(); ++j) {
            const auto& a = rows[i].alphas[j];
            ExactReal w = a.value() / rows[i].absD;
            bool ex = a.rational && rows[i].D_rational;
            required.push_back(flip_exact(w, ex, cert.chi_rot[i][j]));
        }

    ScanOptions dual_opts = opts;
    dual_opts.required_vertex = std::move(required);

    // Scan in windows, filtering on the Delta symmetry.
    SolveOutcome<JumpCertificate> out;
    Int start = dual_opts.start;
    long budget = dual_opts.scan_limit;
    const long window = 1 << 18;
    while (budget > 0) {
        ScanOptions w = dual_opts;
        w.start = start;
        w.scan_limit = std::min(window, budget);
        auto res = solve_paths(instance, 64, w);
        out.dropped += res.dropped;
        out.uncertain += res.uncertain;
        out.last_scanned = res.last_scanned;
        for (auto& c : res.found) {
            if (c.N == cert.N) continue; // the dual tuple must be fresh
            bool sym = true;
            for (size_t k = 0; k < c.Delta.size(); ++k)
                if (c.Delta[k] + cert.Delta[k] != cert.C[k]) sym = false;
            if (sym) {
                out.found.push_back(std::move(c));
                return out;
            }
            out.dropped++;
        }
        budget -= w.scan_limit;
        start += w.scan_limit;
    }
    out.exhausted = true;
    return out;
}

VerifyReport verify_certificate(const JumpInstance& instance,
                                const JumpCertificate& cert) {
    const int q = static_cast<int>(instance.germs().size());
    if (static_cast<int>(cert.chi.size()) != q ||
        static_cast<int>(cert.m.size()) != q ||
        static_cast<int>(cert.Delta.size()) != q)
        throw ParseError("malformed certificate: field sizes do not match instance");
    VerifyReport report;
    auto rows = build_rows(instance.induced());
    auto flag = [&](const std::string& display) {
        if (report.all_pass) {
            report.all_pass = false;
            report.first_violation = display;
        }
    };

    // (3.30) first: the m_i must re-derive from (N, chi).
    std::vector<RowEval> evs;
    for (int i = 0; i < q; ++i) {
        RowEval ev = eval_row(rows[i], instance.M(), instance.delta(), cert.N,
                              cert.chi[i]);
        bool pass = ev.m_valid && ev.m == cert.m[i];
        report.checks.push_back({"(3.30)", rows[i].label, 0, int_str(cert.m[i]),
                                 ev.m_valid ? int_str(ev.m) : "<invalid>", pass});
        if (!pass) flag("(3.30)");
        evs.push_back(std::move(ev));
    }
    if (!report.all_pass) return report;

    // (3.31), then the recomputed displays in the order (3.28), (3.25)-(3.27),
    // then the abstract family (3.12)-(3.15).
    for (int i = 0; i < q; ++i) {
        bool pass = evs[i].eps_hi < cert.eps;
        report.checks.push_back({"(3.31)", rows[i].label, 0,
                                 rat_to_string(evs[i].eps_hi),
                                 rat_to_string(cert.eps), pass});
        if (!pass) flag("(3.31)");
    }
    if (!report.all_pass) return report;

    // An eval that stopped inside the alpha displays cannot support the index
    // recomputation below; report that display directly.
    for (int i = 0; i < q; ++i) {
        if (!evs[i].ok &&
            (evs[i].fail_display == "(3.13)" || evs[i].fail_display == "(3.14)")) {
            report.checks.push_back(
                {evs[i].fail_display, rows[i].label, 0, "violated", "", false});
            flag(evs[i].fail_display);
            return report;
        }
    }

    for (int i = 0; i < q; ++i) {
        const PathGerm& germ = instance.germs()[i];
        long splus = germ.end_form.splus_one();
        long C = germ.end_form.elliptic_count();
        Int rhoN = Int(rows[i].varrho) * cert.N;
        long two_mi = to_ll(2 * cert.m[i], "2m_i");
        auto check = [&](const std::string& display, long m, const Int& lhs,
                         const Int& rhs) {
            bool pass = lhs == rhs;
            report.checks.push_back(
                {display, germ.label, m, int_str(lhs), int_str(rhs), pass});
            if (!pass) flag(display);
            return pass;
        };
        try {
            if (!check("(3.28)", 0, Int(index_at(germ, two_mi)),
                       2 * rhoN - (splus + C - 2 * evs[i].Delta)))
                return report;
            for (long m = 1; m <= cert.mbar; ++m) {
                Int nu_m(nullity_at(germ, m));
                if (!check("(3.25)", m, Int(nullity_at(germ, two_mi - m)), nu_m))
                    return report;
                if (!check("(3.25)", m, Int(nullity_at(germ, two_mi + m)), nu_m))
                    return report;
                Int im(index_at(germ, m));
                if (!check("(3.26)", m, Int(index_at(germ, two_mi + m)),
                           2 * rhoN + im))
                    return report;
                long Qm = q_value(germ, cert.m[i], m);
                if (!check("(3.27)", m, Int(index_at(germ, two_mi - m)),
                           2 * rhoN - im - 2 * (splus + Qm)))
                    return report;
            }
            // (3.12) with the claimed Delta, then the recomputations of the
            // (3.29) quantities the certificate carries.
            Int lhs12 = cert.m[i] * rows[i].beta;
            for (const auto& e : evs[i].E) lhs12 += e;
            if (!check("(3.12)", 0, lhs12, rhoN + cert.Delta[i])) return report;
            if (!check("(3.29)", 0, Int(evs[i].Delta), Int(cert.Delta[i])))
                return report;
            if (static_cast<int>(cert.Q.size()) == q) {
                std::map<long, long> q_re;
                for (long m = 1; m <= cert.mbar; ++m) {
                    long qm = q_value(germ, cert.m[i], m);
                    if (qm != 0) q_re[m] = qm;
                }
                if (q_re != cert.Q[i]) {
                    report.checks.push_back({"(3.29)", germ.label, 0,
                                             "Q table", "recomputed", false});
                    flag("(3.29)");
                    return report;
                }
            }
        } catch (const PrecisionError& e) {
            report.checks.push_back({"precision", germ.label, 0, e.what(), "", false});
            flag("precision");
            return report;
        }
    }
    return report;
}

} // namespace sil
