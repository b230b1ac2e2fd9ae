#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

using namespace sil;
using namespace silt;

namespace {

JumpInstance golden_instance() {
    std::vector<PathGerm> germs = {
        germ_of(2, {BlockN1{1, 1}, BlockR{irr(kGolden, "y1.1")}}, "y1")};
    return JumpInstance::make(germs, 2, {}, Rat(1, 20));
}

JumpInstance n11_instance() {
    std::vector<PathGerm> germs = {germ_of(1, {BlockN1{1, 1}}, "y1")};
    return JumpInstance::make(germs, 1, {}, Rat(1, 20));
}

JumpInstance two_rotation_instance() {
    // The zero-mean shape with the mean shifted positive: two conjugate
    // rotations, C = 2.
    std::vector<PathGerm> germs = {
        germ_of(1, {BlockN1{1, 1}, BlockR{irr(kGolden, "w.1")},
                    BlockR{irr(kGoldenConj, "w.2")}},
                "w")};
    Relation rel;
    rel.terms = {{Rat(1), "w.1"}, {Rat(1), "w.2"}};
    rel.rhs = Rat(1);
    return JumpInstance::make(germs, 3, RelationSet({rel}), Rat(1, 20));
}

AbstractJumpInstance sqrt2_instance() {
    AbstractRow row;
    row.beta = -1;
    row.label = "r1";
    RotationNumber frac = irr(kSqrt2m1, "r1.a");
    row.alphas.push_back(
        AlphaValue::from_irrational(frac.value() + ExactReal(Rat(1)), "r1.a"));
    return AbstractJumpInstance({row}, Rat(1, 10));
}

} // namespace

TEST_CASE("clearing modulus") {
    AbstractRow r;
    r.beta = 1;
    r.alphas.push_back(AlphaValue::from_rat(Rat(1, 3)));
    r.alphas.push_back(AlphaValue::from_rat(Rat(1, 4)));
    CHECK(clearing_modulus(AbstractJumpInstance({r}, Rat(1, 20))) == 12);

    AbstractRow ri;
    ri.beta = 1;
    ri.alphas.push_back(AlphaValue::from_irrational(irr(kGolden).value(), "x"));
    CHECK(clearing_modulus(AbstractJumpInstance({ri}, Rat(1, 20))) == 1);

    AbstractRow rm;
    rm.beta = 1;
    rm.alphas.push_back(AlphaValue::from_rat(Rat(1, 2)));
    rm.alphas.push_back(AlphaValue::from_irrational(irr(kSqrt2m1).value(), "y"));
    CHECK(clearing_modulus(AbstractJumpInstance({rm}, Rat(1, 20))) == 2);
}

TEST_CASE("instance hypotheses enforced") {
    AbstractRow r;
    r.beta = 1;
    CHECK_THROWS_AS(AbstractJumpInstance({r}, Rat(2, 3)), HypothesisError);
    AbstractRow r2;
    r2.beta = 0; // D = 0
    CHECK_THROWS_AS(AbstractJumpInstance({r2}, Rat(1, 20)), HypothesisError);
    AbstractRow r3;
    r3.beta = 1;
    for (int i = 0; i < 3; ++i) r3.alphas.push_back(AlphaValue::from_rat(Rat(1, 3)));
    CHECK_THROWS_AS(AbstractJumpInstance({r3}, Rat(1, 5)), HypothesisError);
}

TEST_CASE("abstract base cases: q=1, mu=0") {
    for (long beta : {1L, -1L}) {
        AbstractRow r;
        r.beta = beta;
        AbstractJumpInstance inst({r}, Rat(1, 20));
        CHECK(inst.varrho(0) == (beta > 0 ? 1 : -1));
        ScanOptions opts;
        opts.scan_limit = 24;
        auto res = solve_abstract(inst, 20, opts);
        REQUIRE(res.found.size() == 20);
        for (size_t i = 0; i < res.found.size(); ++i) {
            CHECK(res.found[i].N == static_cast<long>(i + 1));
            CHECK(res.found[i].m[0] == static_cast<long>(i + 1));
            CHECK(res.found[i].Delta[0] == 0);
        }
    }
}

TEST_CASE("sqrt2 abstract instance matches the brute-force oracle") {
    AbstractJumpInstance inst = sqrt2_instance();
    ScanOptions opts;
    opts.eps = Rat(1, 100);
    opts.scan_limit = 1000000;
    auto res = solve_abstract(inst, 3, opts);
    REQUIRE(res.found.size() == 3);
    // Frozen from the enumeration oracle.
    const long expect[3][3] = {{70, 169, 1}, {99, 239, 0}, {169, 408, 0}};
    for (int i = 0; i < 3; ++i) {
        CHECK(res.found[i].N == expect[i][0]);
        CHECK(res.found[i].m[0] == expect[i][1]);
        CHECK(res.found[i].Delta[0] == expect[i][2]);
    }
    auto oracle = oracle_abstract_scan(inst, 3, 1000000, opts.eps);
    REQUIRE(oracle.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(oracle[i].N == res.found[i].N.get_si());
        CHECK(oracle[i].m[0] == res.found[i].m[0].get_si());
        CHECK(oracle[i].Delta[0] == res.found[i].Delta[0]);
    }
}

TEST_CASE("q=1 N1(1,1) germ: every even N from the guard on") {
    JumpInstance inst = n11_instance();
    ScanOptions opts;
    opts.scan_limit = 100;
    auto res = solve_paths(inst, 10, opts);
    REQUIRE(res.found.size() == 10);
    for (size_t i = 0; i < res.found.size(); ++i) {
        const auto& c = res.found[i];
        CHECK(c.N == static_cast<long>(2 * (i + 2))); // N=4,6,...: mbar guard
        CHECK(2 * c.m[0] == c.N);
        CHECK(c.Delta[0] == 0);
        CHECK(index_at(inst.germs()[0], 2 * c.m[0].get_si()) ==
              2 * c.N.get_si() - 1);
    }
}

TEST_CASE("mixed-sign pair: indices drop by 2N on the negative side") {
    std::vector<PathGerm> germs = {germ_of(1, {BlockN1{1, 1}}, "a"),
                                   germ_of(-3, {BlockN1{1, 1}}, "b")};
    JumpInstance inst = JumpInstance::make(germs, 1, {}, Rat(1, 20));
    ScanOptions opts;
    opts.scan_limit = 200;
    auto res = solve_paths(inst, 3, opts);
    REQUIRE(res.found.size() == 3);
    for (const auto& c : res.found) {
        CHECK(c.varrho[0] == 1);
        CHECK(c.varrho[1] == -1);
        CHECK(c.m[0] == c.m[1]);
        CHECK(2 * c.m[0] == c.N);
        long N = c.N.get_si();
        long two_m = 2 * c.m[1].get_si();
        for (long m = 1; m <= c.mbar; ++m) {
            CHECK(index_at(germs[1], two_m + m) == -2 * N + index_at(germs[1], m));
            CHECK(index_at(germs[0], two_m + m) == 2 * N + index_at(germs[0], m));
        }
    }
}

TEST_CASE("golden-ratio path instance: frozen first certificate") {
    JumpInstance inst = golden_instance();
    ScanOptions opts;
    opts.eps = Rat(1, 100);
    opts.scan_limit = 1000000;
    auto res = solve_paths(inst, 1, opts);
    REQUIRE(res.found.size() == 1);
    const auto& c = res.found[0];
    CHECK(c.N == 55);
    CHECK(c.m[0] == 17);
    CHECK(c.Delta[0] == 1);
    CHECK(c.chi[0] == 1);
    CHECK(c.eps_achieved < c.eps);
    for (const auto& rec : c.checks) CHECK(rec.pass);
    VerifyReport vr = verify_certificate(inst, c);
    CHECK(vr.all_pass);
}

TEST_CASE("abstract/symplectic coherence") {
    JumpInstance inst = golden_instance();
    ScanOptions opts;
    opts.eps = Rat(1, 100);
    opts.scan_limit = 400000;
    auto paths = solve_paths(inst, 3, opts);
    auto abstr = solve_abstract(inst.induced(), 3, opts);
    REQUIRE(paths.found.size() == 3);
    REQUIRE(abstr.found.size() == 3);
    CHECK(paths.dropped == 0); // no candidate lost to the path displays
    for (size_t i = 0; i < 3; ++i) {
        CHECK(paths.found[i].N == abstr.found[i].N);
        CHECK(paths.found[i].m == abstr.found[i].m);
        CHECK(paths.found[i].Delta == abstr.found[i].Delta);
    }
}

TEST_CASE("dual certificates and the Delta symmetry") {
    ScanOptions opts;
    opts.eps = Rat(1, 100);
    opts.scan_limit = 2000000;

    // No rotations: the dual is the next fresh certificate, Delta'=Delta=C=0.
    {
        JumpInstance inst = n11_instance();
        auto res = solve_paths(inst, 1, opts);
        auto dual = dual_certificate(inst, res.found[0], opts);
        REQUIRE(dual.found.size() == 1);
        CHECK(dual.found[0].N != res.found[0].N);
        CHECK(dual.found[0].Delta[0] == 0);
        CHECK(res.found[0].C[0] == 0);
    }
    // Golden-ratio germ: Delta + Delta' = 1 = C(M).
    {
        JumpInstance inst = golden_instance();
        auto res = solve_paths(inst, 1, opts);
        auto dual = dual_certificate(inst, res.found[0], opts);
        REQUIRE(dual.found.size() == 1);
        CHECK(res.found[0].Delta[0] + dual.found[0].Delta[0] == res.found[0].C[0]);
        CHECK(res.found[0].C[0] == 1);
        // Vertex actually flipped on every inexact component.
        CHECK(dual.found[0].chi[0] == 1 - res.found[0].chi[0]);
        CHECK(dual.found[0].chi_rot[0][0] == 1 - res.found[0].chi_rot[0][0]);
        VerifyReport vr = verify_certificate(inst, dual.found[0]);
        CHECK(vr.all_pass);
    }
    // Two-rotation germ: Delta + Delta' = 2 = C(M).
    {
        JumpInstance inst = two_rotation_instance();
        auto res = solve_paths(inst, 1, opts);
        REQUIRE(res.found.size() == 1);
        auto dual = dual_certificate(inst, res.found[0], opts);
        REQUIRE(dual.found.size() == 1);
        CHECK(res.found[0].C[0] == 2);
        CHECK(res.found[0].Delta[0] + dual.found[0].Delta[0] == 2);
    }
}

TEST_CASE("verify_certificate tamper detection") {
    JumpInstance inst = n11_instance();
    ScanOptions opts;
    opts.scan_limit = 100;
    auto res = solve_paths(inst, 1, opts);
    JumpCertificate good = res.found[0];
    CHECK(verify_certificate(inst, good).all_pass);

    // m1 perturbed by +1: fails (3.30) first.
    JumpCertificate bad = good;
    bad.m[0] += 1;
    VerifyReport r1 = verify_certificate(inst, bad);
    CHECK_FALSE(r1.all_pass);
    CHECK(r1.first_violation == "(3.30)");

    // Odd N with self-consistent m and an oversized eps: fails (3.28).
    JumpCertificate odd = good;
    odd.N = 7;
    odd.m[0] = 3; // floor(7/2) + chi(=0), consistent with (3.30)
    odd.chi[0] = 0;
    odd.eps = Rat(3, 5); // crafted oversize eps so (3.31) passes
    VerifyReport r2 = verify_certificate(inst, odd);
    CHECK_FALSE(r2.all_pass);
    CHECK(r2.first_violation == "(3.28)");

    // Tampered Delta: caught by the recomputation (3.29).
    JumpCertificate dd = good;
    dd.Delta[0] = 1;
    VerifyReport r3 = verify_certificate(inst, dd);
    CHECK_FALSE(r3.all_pass);
}

TEST_CASE("scaling sanity: doubling eps only enlarges the solution set") {
    JumpInstance inst = golden_instance();
    ScanOptions small, big;
    small.eps = Rat(1, 200);
    big.eps = Rat(1, 100);
    small.scan_limit = big.scan_limit = 300000;
    auto rs = solve_paths(inst, 1000000000, small);
    auto rb = solve_paths(inst, 1000000000, big);
    CHECK(rs.found.size() <= rb.found.size());
    size_t j = 0;
    for (const auto& c : rs.found) {
        while (j < rb.found.size() && rb.found[j].N != c.N) ++j;
        REQUIRE(j < rb.found.size()); // every small-eps N appears at big eps
    }
}

TEST_CASE("worker count does not change results") {
    JumpInstance inst = golden_instance();
    ScanOptions one, four;
    one.eps = four.eps = Rat(1, 100);
    one.scan_limit = four.scan_limit = 400000;
    one.workers = 1;
    four.workers = 4;
    auto r1 = solve_paths(inst, 3, one);
    auto r4 = solve_paths(inst, 3, four);
    REQUIRE(r1.found.size() == r4.found.size());
    for (size_t i = 0; i < r1.found.size(); ++i) {
        CHECK(r1.found[i].N == r4.found[i].N);
        CHECK(r1.found[i].m == r4.found[i].m);
        CHECK(r1.found[i].Delta == r4.found[i].Delta);
        CHECK(r1.found[i].chi == r4.found[i].chi);
    }
}

TEST_CASE("path solver matches the brute-force oracle across instances") {
    ScanOptions opts;
    opts.eps = Rat(1, 100);
    opts.scan_limit = 400000;
    std::vector<JumpInstance> instances;
    instances.push_back(golden_instance());
    instances.push_back(n11_instance());
    instances.push_back(JumpInstance::make(
        {germ_of(1, {BlockN1{1, 1}}, "a"), germ_of(-3, {BlockN1{1, 1}}, "b")}, 1,
        {}, Rat(1, 20)));
    for (const auto& inst : instances) {
        auto res = solve_paths(inst, 3, opts);
        REQUIRE(res.found.size() == 3);
        auto oracle = oracle_abstract_scan(inst.induced(), 16,
                                           res.found.back().N.get_si(), opts.eps);
        // Every certificate N appears in the oracle stream with the same
        // (m, Delta); certificates can be a subset when the oracle's early N
        // fail the horizon guard.
        for (const auto& cert : res.found) {
            bool matched = false;
            for (const auto& t : oracle) {
                if (t.N != cert.N.get_si()) continue;
                matched = true;
                for (size_t i = 0; i < cert.m.size(); ++i) {
                    CHECK(t.m[i] == cert.m[i].get_si());
                    CHECK(t.Delta[i] == cert.Delta[i]);
                }
            }
            CHECK(matched);
        }
    }
}

TEST_CASE("torus vector of the vertex search") {
    JumpInstance inst = golden_instance();
    auto v = inst.torus_vector();
    // length l = q + sum(mu_k) = 1 + 1
    REQUIRE(v.size() == 2);
    // 1/(M |mean|) with mean = 2 + 2*golden, M = 1
    CHECK(v[0].lo() > decimal_to_rat("0.30901699437494"));
    CHECK(v[0].hi() < decimal_to_rat("0.30901699437495"));
    // alpha / |mean| = 2*golden / (2 + 2*golden)
    CHECK(v[1].lo() > decimal_to_rat("0.38196601125010"));
    CHECK(v[1].hi() < decimal_to_rat("0.38196601125011"));
}

TEST_CASE("scan exhaustion reports partial results") {
    JumpInstance inst = golden_instance();
    ScanOptions opts;
    opts.eps = Rat(1, 100);
    opts.scan_limit = 100; // far too small
    auto res = solve_paths(inst, 3, opts);
    CHECK(res.exhausted);
    CHECK(res.found.size() == 1); // the N=55 certificate is carried as a partial
}
