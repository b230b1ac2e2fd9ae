#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"

using namespace sil;
using namespace silt;

namespace {

// Random germ generator over the full block menu, used by the anchor and
// parity properties.
PathGerm random_germ(std::mt19937& rng, int max_n) {
    std::uniform_int_distribution<int> half(1, max_n);
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<int> b3(-1, 1);
    std::uniform_int_distribution<int> idx(-6, 6);
    std::uniform_int_distribution<int> num(1, 29);
    int target = half(rng);
    std::vector<BasicBlock> blocks;
    int n = 0;
    while (n < target) {
        switch (kind(rng)) {
            case 0:
                blocks.push_back(BlockN1{rng() % 2 ? 1 : -1, b3(rng)});
                n += 1;
                break;
            case 1:
                blocks.push_back(BlockD{rng() % 2 ? 1 : -1});
                n += 1;
                break;
            case 2: {
                int p = num(rng), q = 30 + static_cast<int>(rng() % 30);
                if (2 * p == q) p += 1;
                blocks.push_back(BlockR{RotationNumber::rational(Rat(p, q))});
                n += 1;
                break;
            }
            case 3:
                blocks.push_back(
                    BlockR{rng() % 2 ? irr(kGolden) : irr(kSqrt2m1)});
                n += 1;
                break;
            case 4:
                if (n + 2 <= target) {
                    blocks.push_back(
                        BlockN2{rng() % 2 ? irr(kSqrt2o2) : irr(kGoldenHalf),
                                rng() % 2 == 0});
                    n += 2;
                } else {
                    blocks.push_back(BlockD{1});
                    n += 1;
                }
                break;
            default:
                if (n + 2 <= target) {
                    blocks.push_back(BlockOffCircle{2});
                    n += 2;
                } else {
                    blocks.push_back(BlockN1{1, b3(rng)});
                    n += 1;
                }
        }
    }
    return PathGerm{idx(rng), NormalForm(std::move(blocks)), "rand"};
}

} // namespace

TEST_CASE("index_at closed forms") {
    PathGerm g1 = germ_of(1, {BlockN1{1, 1}});
    for (long m = 1; m <= 50; ++m) CHECK(index_at(g1, m) == 2 * m - 1);

    // Constant-index germ of the zero-mean profile.
    PathGerm g5 = zero_mean_r2().germ;
    for (long m = 1; m <= 200; ++m) CHECK(index_at(g5, m) == -1);

    // (i=1, R(0.3)), m=4: 2E(1.2) - 1 = 3.
    PathGerm gr = germ_of(1, {BlockR{RotationNumber::rational(3, 10)}});
    CHECK(index_at(gr, 4) == 3);
}

TEST_CASE("anchor and parity on random germs") {
    std::mt19937 rng(7);
    for (int t = 0; t < 200; ++t) {
        PathGerm g = random_germ(rng, 5);
        CHECK(index_at(g, 1) == g.initial_index);
        long prev1 = index_at(g, 1), prev2 = index_at(g, 2);
        for (long m = 3; m <= 30; ++m) {
            long cur = index_at(g, m);
            long back2 = m % 2 ? prev1 : prev2;
            CHECK((cur - back2) % 2 == 0);
            if (m % 2)
                prev1 = cur;
            else
                prev2 = cur;
        }
    }
}

TEST_CASE("rotation oracle closed form") {
    // (3.10)-evaluation on R(p/q) germs matches the crossing count
    // 2*floor(mp/q) + 1 whenever q does not divide mp.
    for (long q = 2; q <= 12; ++q) {
        for (long p = 1; p < q; ++p) {
            if (std::gcd(p, q) != 1 || 2 * p == q) continue;
            PathGerm g = germ_of(1, {BlockR{RotationNumber::rational(p, q)}});
            for (long m = 1; m <= 100; ++m) {
                if ((m * p) % q == 0) continue;
                CHECK(index_at(g, m) == 2 * ((m * p) / q) + 1);
            }
        }
    }
}

TEST_CASE("precision exhaustion fails loudly") {
    // 12-digit approximation of 1/3 declared irrational: at m=3 the
    // enclosure of m*rho spans the integer 1.
    PathGerm g = germ_of(1, {BlockR{RotationNumber::irrational(
                                "0.333333333333", 12)}});
    CHECK(index_at(g, 1) == 1);
    CHECK_THROWS_AS(index_at(g, 3), PrecisionError);
    IterateWalker w(g);
    w.next();
    w.next();
    CHECK_THROWS_AS(w.next(), PrecisionError);
}

TEST_CASE("nullity_at") {
    PathGerm g1 = germ_of(1, {BlockN1{1, 1}});
    for (long m = 1; m <= 10; ++m) CHECK(nullity_at(g1, m) == 1);
    PathGerm g3 = germ_of(1, {BlockR{RotationNumber::rational(1, 3)}});
    CHECK(nullity_at(g3, 3) == 2);
    CHECK(nullity_at(g3, 4) == 0);
    PathGerm gi = germ_of(1, {BlockR{irr(kGolden)}});
    for (long m = 1; m <= 20; ++m) CHECK(nullity_at(gi, m) == 0);
    // nullity of an iterate depends only on m*rho mod 1 per block.
    PathGerm gm = germ_of(0, {BlockN1{-1, 0}});
    CHECK(nullity_at(gm, 1) == 0);
    CHECK(nullity_at(gm, 2) == 2);
    CHECK(nullity_at(gm, 4) == 2);
}

TEST_CASE("mean index") {
    CHECK(mean_index(germ_of(1, {BlockN1{1, 1}})).value().exact_value() == Rat(2));
    CHECK(mean_index(germ_of(1, {BlockN1{1, 1}})).sign() == 1);
    CHECK(mean_index(germ_of(-3, {BlockN1{1, 1}})).value().exact_value() ==
          Rat(-2));
    CHECK(mean_index(germ_of(-3, {BlockN1{1, 1}})).sign() == -1);

    // Zero only through the declared relation rho1 + rho2 = 1.
    PathGerm g5 = zero_mean_r2().germ;
    MeanIndex mi = mean_index(g5);
    RelationSet rel = zero_mean_relation();
    CHECK(mi.is_structurally_zero(rel));
    CHECK(mi.sign(rel) == 0);
    // Without the relation the sign is not decidable and never guessed.
    CHECK_THROWS_AS(mi.sign(), PrecisionError);
}

TEST_CASE("viterbo index") {
    PathGerm g5 = zero_mean_r2().germ;
    CHECK(viterbo_index(g5, 7, 3) == -4);
    CHECK(viterbo_index(germ_of(1, {BlockN1{1, 1}}), 1, 1) == 0);
    PathGerm g2 = germ_of(2, {BlockN1{1, 1}, BlockR{irr(kGoldenHalf)}});
    CHECK(viterbo_index(g2, 1, 2) == 0);
    CHECK_THROWS_AS(viterbo_index(g2, 1, 3), DimensionError);
}

TEST_CASE("deviation bound") {
    CHECK(deviation_bound(germ_of(1, {BlockN1{1, 1}})) ==
          std::pair<long, long>{1, 0});
    PathGerm g = germ_of(1, {BlockN1{1, 1}, BlockR{irr(kGolden, "u")},
                             BlockR{irr(kSqrt2m1, "v")}});
    CHECK(deviation_bound(g) == std::pair<long, long>{3, 1});
    CHECK(deviation_bound(germ_of(0, {BlockD{1}})) == std::pair<long, long>{0, 0});
}

TEST_CASE("mean index limit property") {
    // |index_at(m)/m - mean| <= (low + high + 1)/m for all m.
    std::vector<PathGerm> germs = {
        germ_of(1, {BlockN1{1, 1}}),
        germ_of(2, {BlockN1{1, 1}, BlockR{irr(kGolden)}}),
        germ_of(-5, {BlockN1{1, 1}, BlockR{irr(kSqrt2m1)}, BlockD{1}}),
    };
    for (const auto& g : germs) {
        auto [low, high] = deviation_bound(g);
        ExactReal mean = mean_index(g).value();
        for (long m = 1; m <= 400; ++m) {
            Rat dev_lo = rat_of(index_at(g, m)) - rat_of(m) * mean.hi();
            Rat dev_hi = rat_of(index_at(g, m)) - rat_of(m) * mean.lo();
            CHECK(dev_hi >= rat_of(-low));
            CHECK(dev_lo < rat_of(high + 1));
        }
    }
}

TEST_CASE("iterate walker agrees with index_at") {
    std::mt19937 rng(99);
    for (int t = 0; t < 30; ++t) {
        PathGerm g = random_germ(rng, 4);
        IterateWalker w(g);
        for (long m = 1; m <= 60; ++m) {
            long idx = w.next();
            CHECK(idx == index_at(g, m));
            CHECK(w.nullity() == nullity_at(g, m));
            CHECK(w.good() == (((index_at(g, m) - g.initial_index) % 2) == 0));
        }
    }
}

TEST_CASE("stable jump horizon") {
    std::vector<PathGerm> one = {germ_of(1, {BlockN1{1, 1}})};
    CHECK(stable_jump_horizon(one, 1) == 2);
    std::vector<PathGerm> neg = {germ_of(-3, {BlockN1{1, 1}})};
    CHECK(stable_jump_horizon(neg, 1) == 2);
    std::vector<PathGerm> pair = {germ_of(1, {BlockN1{1, 1}}),
                                  germ_of(-3, {BlockN1{1, 1}})};
    CHECK(stable_jump_horizon(pair, 1) ==
          std::max(stable_jump_horizon({pair.begin(), pair.begin() + 1}, 1),
                   stable_jump_horizon({pair.begin() + 1, pair.end()}, 1)));
    // Zero mean violates the hypothesis.
    std::vector<PathGerm> zero = {zero_mean_r2().germ};
    CHECK_THROWS_AS(stable_jump_horizon(zero, 3, zero_mean_relation()),
                    HypothesisError);

    // The certified horizon really synchronizes: for every m >= mbar and a
    // range of l, the jump displays hold.
    std::vector<PathGerm> mixed = {
        germ_of(2, {BlockN1{1, 1}, BlockR{irr(kGolden, "u")}}),
        germ_of(-4, {BlockN1{1, 1}, BlockD{1}})};
    long mbar = stable_jump_horizon(mixed, 2);
    for (const auto& g : mixed) {
        int s = mean_index(g).sign();
        for (long m = mbar; m <= mbar + 20; ++m) {
            for (long l = 1; l <= 120; ++l) {
                long gap = index_at(g, m + l) - index_at(g, l);
                if (s > 0)
                    CHECK(gap >= 2 + 1);
                else
                    CHECK(gap <= -3);
            }
        }
    }
}
