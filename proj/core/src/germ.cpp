#include "sil/germ.hpp"

#include <algorithm>

namespace sil {

namespace {

long to_ll(const Int& v, const char* what) {
    if (!v.fits_slong_p()) throw Error(std::string(what) + ": value out of range");
    return v.get_si();
}

// E(m * t) for a stored spectrum point, certified.
Int iterate_E(const CirclePoint& pt, long m) {
    ExactReal t = pt.t();
    ExactReal mt = rat_of(m) * t;
    return upper_int_cert(mt, !pt.is_rational(), "E(m*rho)");
}

} // namespace

long index_at(const PathGerm& germ, long m) {
    if (m < 1) throw Error("iterate count must be positive");
    const NormalForm& nf = germ.end_form;
    long splus = nf.splus_one();
    long C = nf.elliptic_count();
    Int total = int_of(m) * int_of(germ.initial_index + splus - C);
    for (const auto& p : nf.circle_points()) {
        if (p.sminus == 0) continue;
        total += int_of(2 * p.sminus) * iterate_E(p.pt, m);
    }
    total -= int_of(splus + C);
    return to_ll(total, "index_at");
}

long nullity_at(const PathGerm& germ, long m) {
    if (m < 1) throw Error("iterate count must be positive");
    const NormalForm& nf = germ.end_form;
    long total = nf.nullity_one();
    for (const auto& p : nf.circle_points()) {
        if (!p.pt.is_rational()) continue; // irrational: never a root of unity
        Rat t = p.pt.t().exact_value();
        if (frac_q(rat_of(m) * t) == 0) total += p.nu;
    }
    return total;
}

long viterbo_index(const PathGerm& germ, long m, int n) {
    if (germ.end_form.n() != n)
        throw DimensionError("germ half-dimension " +
                             std::to_string(germ.end_form.n()) +
                             " does not match n=" + std::to_string(n));
    return index_at(germ, m) - n;
}

MeanIndex mean_index(const PathGerm& germ) {
    const NormalForm& nf = germ.end_form;
    Rat rational_part = rat_of(germ.initial_index + nf.splus_one() - nf.elliptic_count());
    std::vector<MeanIndex::Term> terms;
    for (const auto& p : nf.circle_points()) {
        if (p.sminus == 0) continue;
        Rat coeff = rat_of(2 * p.sminus);
        if (!p.pt.reflected) {
            terms.push_back({coeff, p.pt.rho});
        } else {
            // theta/pi = 2(1 - rho): keep the term keyed on the stored rho so
            // declared relations still apply.
            rational_part += coeff;
            terms.push_back({-coeff, p.pt.rho});
        }
    }
    return MeanIndex(std::move(rational_part), std::move(terms));
}

std::pair<long, long> deviation_bound(const PathGerm& germ) {
    long splus = germ.end_form.splus_one();
    long C = germ.end_form.elliptic_count();
    return {splus + C, std::max<long>(0, C - splus)};
}

IterateWalker::IterateWalker(const PathGerm& germ) : germ_(&germ) {
    const NormalForm& nf = germ.end_form;
    base_coeff_ = germ.initial_index + nf.splus_one() - nf.elliptic_count();
    tail_ = nf.splus_one() + nf.elliptic_count();
    parity_anchor_ = ((germ.initial_index % 2) + 2) % 2;
    for (const auto& p : nf.circle_points()) {
        if (p.sminus == 0 && p.nu == 0) continue;
        PointState st;
        ExactReal t = p.pt.t();
        st.rational = p.pt.is_rational();
        st.sminus = p.sminus;
        st.nu = p.nu;
        if (st.rational) {
            Rat tv = t.exact_value();
            st.den = tv.get_den();
            st.step_lo = tv.get_num();
            st.width = 0;
        } else {
            // Common-denominator rescale of the enclosure.
            Rat lo = t.lo(), w = t.width();
            st.den = lo.get_den() * w.get_den();
            st.step_lo = lo.get_num() * w.get_den();
            st.width = w.get_num() * lo.get_den();
        }
        st.num_lo = 0; // running remainder of m * step_lo mod den
        st.flo = 0;
        pts_.push_back(std::move(st));
    }
}

long IterateWalker::next() {
    ++m_;
    Int total = int_of(m_) * int_of(base_coeff_);
    for (auto& st : pts_) {
        st.num_lo += st.step_lo;
        while (st.num_lo >= st.den) {
            st.num_lo -= st.den;
            st.flo += 1;
        }
        if (st.sminus != 0) {
            Int e;
            if (st.rational) {
                e = st.num_lo == 0 ? st.flo : st.flo + 1;
            } else {
                // Open enclosure (m*t_lo, m*t_lo + m*width): E is constant
                // iff no integer lies strictly inside.
                if (st.num_lo + int_of(m_) * st.width > st.den)
                    throw PrecisionError(
                        "fractional part of m*rho undecidable at stored precision "
                        "(m=" + std::to_string(m_) + ")");
                e = st.flo + 1;
            }
            total += int_of(2 * st.sminus) * e;
        }
    }
    total -= tail_;
    idx_ = to_ll(total, "IterateWalker");
    return idx_;
}

long IterateWalker::nullity() const {
    long total = germ_->end_form.nullity_one();
    for (const auto& st : pts_)
        if (st.rational && st.num_lo == 0) total += st.nu;
    return total;
}

bool IterateWalker::good() const {
    return ((idx_ % 2) + 2) % 2 == parity_anchor_;
}

long stable_jump_horizon(std::span<const PathGerm> germs, int n,
                              const RelationSet& relations) {
    if (germs.empty()) throw Error("stable_jump_horizon: no germs");
    long mbar = 1;
    for (const auto& germ : germs) {
        MeanIndex mi = mean_index(germ);
        int sign = mi.sign(relations);
        if (sign == 0)
            throw HypothesisError("stable_jump_horizon requires nonzero mean index (" +
                                  germ.label + ")");
        auto [low, high] = deviation_bound(germ);
        ExactReal v = mi.reduced_value(relations);
        Rat abs_lo = sign > 0 ? v.lo() : -v.hi();
        if (abs_lo <= 0)
            throw PrecisionError("mean index enclosure too wide for horizon bound (" +
                                 germ.label + ")");
        Rat need = rat_of(n + 1 + low + high + 1);
        long m_cert = to_ll(ceil_q(need / abs_lo), "horizon");
        if (m_cert < 1) m_cert = 1;
        long m_germ = m_cert;
        if (!germ.end_form.circle_points().empty()) {
            // Certified downward tightening: for m below the analytic bound,
            //   min_l (i(m+l) - i(l)) >= m*a + 2*sum(floor(m*t)*S^-)   (mean > 0)
            //   max_l (i(m+l) - i(l)) <= m*a + 2*sum(ceil(m*t)*S^-)    (mean < 0)
            long a = germ.initial_index + germ.end_form.splus_one() -
                          germ.end_form.elliptic_count();
            for (long m = m_cert - 1; m >= 1; --m) {
                Int bound = int_of(m) * int_of(a);
                bool ok = true;
                try {
                    for (const auto& p : germ.end_form.circle_points()) {
                        if (p.sminus == 0) continue;
                        ExactReal mt = rat_of(m) * p.pt.t();
                        Int r;
                        if (sign > 0)
                            r = p.pt.is_rational()
                                    ? floor_cert(mt, "horizon floor")
                                    : floor_cert_irrational(mt, "horizon floor");
                        else
                            r = upper_int_cert(mt, !p.pt.is_rational(),
                                               "horizon ceil");
                        bound += int_of(2 * p.sminus) * r;
                    }
                } catch (const PrecisionError&) {
                    ok = false;
                }
                if (ok) {
                    if (sign > 0)
                        ok = bound >= Int(n + 1);
                    else
                        ok = bound <= Int(-(n + 1));
                }
                if (!ok) break;
                m_germ = m;
            }
        }
        mbar = std::max(mbar, m_germ);
    }
    return mbar;
}

} // namespace sil
