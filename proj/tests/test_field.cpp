#include "doctest.h"

#include "tentsurgery/number_field.hpp"

using namespace tentsurgery;

TEST_CASE("catalog fields resolve and validate") {
    auto full = NumberField::catalog("full");
    CHECK(full->degree() == 1);
    CHECK(full->exact_root().has_value());
    CHECK(*full->exact_root() == 2);

    auto golden = NumberField::catalog("golden");
    CHECK(golden->degree() == 2);
    auto [lo, hi] = golden->isolate(40);
    CHECK(rat_to_double(lo) == doctest::Approx(1.6180339887).epsilon(1e-9));
    CHECK(rat_to_double(hi) == doctest::Approx(1.6180339887).epsilon(1e-9));

    CHECK_THROWS_AS(NumberField::catalog("nope"), std::invalid_argument);
}

TEST_CASE("field construction rejects bad input") {
    // (x-1)^2: not square-free
    CHECK_THROWS_AS(NumberField::make({Int(1), Int(-2), Int(1)}, Rat(1, 2), Rat(3, 2)),
                    std::invalid_argument);
    // x^2 - 6: root sqrt(6) > 2
    CHECK_THROWS_AS(NumberField::make({Int(-6), Int(0), Int(1)}, Rat(2), Rat(3)),
                    std::invalid_argument);
    // sqrt(3) lies in (1, 2] and is accepted
    CHECK(NumberField::make({Int(-3), Int(0), Int(1)}, Rat(1), Rat(2))->degree() == 2);
    // two roots in the interval
    CHECK_THROWS_AS(NumberField::make({Int(2), Int(-3), Int(1)}, Rat(0), Rat(3)),
                    std::invalid_argument);
}

TEST_CASE("golden-mean arithmetic") {
    auto f = NumberField::catalog("golden");
    FieldElem beta = f->beta();
    CHECK((beta * beta - beta - f->one()).is_zero());
    CHECK((beta * f->beta_inverse() - f->one()).is_zero());
    // beta^-1 = beta - 1
    CHECK((f->beta_inverse() - (beta - Rat(1))).is_zero());

    // (sqrt5 - 1)/4 = (beta - 1)/2 < 1/2 since sqrt5 < 3
    FieldElem c2 = (beta - Rat(1)) * Rat(1, 2);
    CHECK(c2.compare(f->half()) == Ordering::LT);
    CHECK(c2.compare(c2) == Ordering::EQ);
    CHECK(c2.to_interval(50).contains(0.30901699437494742));

    FieldElem x = (f->one() + beta * Rat(3)) * (beta - Rat(7)).inverse();
    CHECK((x * (beta - Rat(7)) - (f->one() + beta * Rat(3))).is_zero());
}

TEST_CASE("sqrt2 arithmetic and enclosures") {
    auto f = NumberField::catalog("sqrt2");
    FieldElem b = f->beta();
    CHECK((b * b - Rat(2)).is_zero());
    auto iv = b.to_interval(60);
    CHECK(iv.contains(1.4142135623730951));
    CHECK(iv.width() < 1e-15);
    CHECK(b.pow(10).rational_value() == Rat(32));
    CHECK(b.pow(-2).rational_value() == Rat(1, 2));
}

TEST_CASE("degree-1 fields are exact") {
    auto f = NumberField::catalog("full");
    FieldElem b = f->beta();
    CHECK(b.is_rational());
    CHECK(b.rational_value() == 2);
    FieldElem q = f->from_rat(Rat(1, 4));
    CHECK((q * b).rational_value() == Rat(1, 2));
    CHECK(q.compare(f->half()) == Ordering::LT);
}

TEST_CASE("rational beta via user polynomial") {
    // 5x - 8: beta = 8/5
    auto f = NumberField::make({Int(-8), Int(5)}, Rat(1), Rat(2));
    CHECK(f->beta().rational_value() == Rat(8, 5));
}

TEST_CASE("sturm root counting") {
    // x^3 - 2x: roots -sqrt2, 0, sqrt2
    Poly p({Rat(0), Rat(-2), Rat(0), Rat(1)});
    auto chain = sturm_chain(p);
    CHECK(sturm_count(chain, Rat(-3), Rat(3)) == 3);
    CHECK(sturm_count(chain, Rat(1, 10), Rat(3)) == 1);
    CHECK(sturm_count(chain, Rat(-3), Rat(-1, 10)) == 1);
}
