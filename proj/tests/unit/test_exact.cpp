#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sil/exact.hpp"

using namespace sil;

TEST_CASE("rational parsing") {
    CHECK(rat_from_string("3/4") == Rat(3, 4));
    CHECK(rat_from_string("-7") == Rat(-7));
    CHECK(rat_from_string("0.25") == Rat(1, 4));
    CHECK_THROWS_AS(rat_from_string("abc"), ParseError);
    int digits = 0;
    CHECK(decimal_to_rat("0.6180", &digits) == Rat(309, 500));
    CHECK(digits == 4);
}

TEST_CASE("floor, ceil, frac") {
    CHECK(floor_q(Rat(7, 2)) == 3);
    CHECK(floor_q(Rat(-7, 2)) == -4);
    CHECK(ceil_q(Rat(7, 2)) == 4);
    CHECK(upper_int(Rat(3)) == 3);
    CHECK(frac_q(Rat(-1, 4)) == Rat(3, 4));
}

TEST_CASE("interval arithmetic encloses") {
    ExactReal a(Rat(1, 3), Rat(1, 2));
    ExactReal b(Rat(-2), Rat(-1));
    ExactReal p = a * b;
    CHECK(p.lo() == Rat(-1));
    CHECK(p.hi() == Rat(-1, 3));
    ExactReal q = a / b;
    CHECK(q.contains(Rat(1, 3) / Rat(-1)));
    CHECK(q.contains(Rat(1, 2) / Rat(-2)));
    CHECK_THROWS_AS(a / ExactReal(Rat(-1), Rat(1)), PrecisionError);
}

TEST_CASE("certified sign") {
    CHECK(ExactReal(Rat(1, 100), Rat(2)).sign() == 1);
    CHECK(ExactReal(Rat(-2), Rat(-1, 100)).sign() == -1);
    CHECK(ExactReal(Rat(0)).sign() == 0);
    CHECK_THROWS_AS(ExactReal(Rat(-1), Rat(1)).sign(), PrecisionError);
}

TEST_CASE("certified floor and E on closed enclosures") {
    CHECK(floor_cert(ExactReal(Rat(5, 2), Rat(26, 10))) == 2);
    CHECK_THROWS_AS(floor_cert(ExactReal(Rat(29, 10), Rat(31, 10))),
                    PrecisionError);
    CHECK(upper_int_cert(ExactReal(Rat(5, 2)), false) == 3);
    CHECK(upper_int_cert(ExactReal(Rat(3)), false) == 3);
    // closed enclosure inside (2,3]: E constant
    CHECK(upper_int_cert(ExactReal(Rat(21, 10), Rat(3)), false) == 3);
    CHECK_THROWS_AS(upper_int_cert(ExactReal(Rat(2), Rat(21, 10)), false),
                    PrecisionError);
}

TEST_CASE("open-interval semantics for declared irrationals") {
    // Enclosure [2, 2+1e-9] of an irrational: floor 2, E 3.
    ExactReal x(Rat(2), Rat(2) + Rat(1, 1000000000));
    CHECK(floor_cert_irrational(x) == 2);
    CHECK(upper_int_cert(x, true) == 3);
    // Enclosure with an interior integer is undecidable.
    ExactReal y(Rat(2) - Rat(1, 10), Rat(2) + Rat(1, 10));
    CHECK_THROWS_AS(floor_cert_irrational(y), PrecisionError);
    CHECK_THROWS_AS(upper_int_cert(y, true), PrecisionError);
    // Upper endpoint exactly an integer: still decidable (endpoint excluded).
    ExactReal z(Rat(19, 10), Rat(2));
    CHECK(floor_cert_irrational(z) == 1);
    CHECK(upper_int_cert(z, true) == 2);
}

TEST_CASE("frac_cert") {
    auto [fr, fl] = frac_cert(ExactReal(Rat(7, 3)));
    CHECK(fl == 2);
    CHECK(fr.lo() == Rat(1, 3));
}
