#include "doctest.h"

#include <gmpxx.h>

#include <random>

#include "tentsurgery/tent.hpp"

using namespace tentsurgery;

namespace {
CriticalOrbitData orbit_of(const NumberField::Ptr& f) {
    auto r = critical_orbit(f);
    REQUIRE(std::holds_alternative<CriticalOrbitData>(r));
    return std::get<CriticalOrbitData>(r);
}
}  // namespace

TEST_CASE("tent_apply on the catalog") {
    auto full = NumberField::catalog("full");
    CHECK(tent_apply(full->from_rat(Rat(1, 4))).rational_value() == Rat(1, 2));

    auto golden = NumberField::catalog("golden");
    // f(1/2) = beta/2 = (sqrt5+1)/4
    CHECK(tent_apply(golden->half()).identical(golden->beta() * Rat(1, 2)));

    auto s2 = NumberField::catalog("sqrt2");
    FieldElem fixed = s2->from_rat(Rat(2)) - s2->beta();  // 2 - sqrt2
    CHECK(tent_apply(fixed).identical(fixed));

    CHECK_THROWS_AS(tent_apply(full->from_rat(Rat(3, 2))), DomainError);
    CHECK_THROWS_AS(tent_apply(full->from_rat(Rat(-1, 10))), DomainError);
}

TEST_CASE("critical orbits of the catalog") {
    auto full = NumberField::catalog("full");
    auto o2 = orbit_of(full);
    CHECK(o2.preperiod == 2);
    CHECK(o2.period == 1);
    REQUIRE(o2.size() == 3);
    CHECK(o2.points[0].rational_value() == Rat(1, 2));
    CHECK(o2.points[1].rational_value() == Rat(1));
    CHECK(o2.points[2].rational_value() == Rat(0));
    CHECK(tent_apply(o2.points[2]).identical(o2.periodic_point()));

    auto golden = NumberField::catalog("golden");
    auto og = orbit_of(golden);
    CHECK(og.preperiod == 0);
    CHECK(og.period == 3);
    FieldElem b = golden->beta();
    CHECK(og.points[1].identical(b * Rat(1, 2)));                 // (sqrt5+1)/4
    CHECK(og.points[2].identical((b - Rat(1)) * Rat(1, 2)));      // (sqrt5-1)/4
    CHECK(tent_apply(og.points[2]).identical(og.points[0]));

    auto s2 = NumberField::catalog("sqrt2");
    auto os = orbit_of(s2);
    CHECK(os.preperiod == 3);
    CHECK(os.period == 1);
    FieldElem bb = s2->beta();
    REQUIRE(os.size() == 4);
    CHECK(os.points[1].identical(bb * Rat(1, 2)));
    CHECK(os.points[2].identical(bb - Rat(1)));
    CHECK(os.points[3].identical(s2->from_rat(Rat(2)) - bb));
    // Orbit certificate: exact closure, not approximate.
    CHECK(tent_apply(os.points[3]).identical(os.periodic_point()));

    // Non-finite orbit: beta = 3/2 has an infinite critical orbit; small cap.
    auto f32 = NumberField::make({Int(-3), Int(2)}, Rat(1), Rat(2));
    auto r = critical_orbit(f32, 64);
    CHECK(std::holds_alternative<NotFinite>(r));
}

TEST_CASE("itineraries") {
    auto golden = NumberField::catalog("golden");
    CHECK(itinerary(golden->half(), 6).to_string() == "*10*10");
    CHECK(itinerary(golden->beta() * Rat(1, 2), 3).to_string() == "10*");
    auto full = NumberField::catalog("full");
    CHECK(itinerary(full->zero(), 4).to_string() == "0000");
}

TEST_CASE("parity-lexicographic order") {
    auto u = ItineraryWord::parse("00");
    auto v = ItineraryWord::parse("01");
    CHECK(parity_lex_compare(u, v) == Ordering::LT);
    CHECK(parity_lex_compare(ItineraryWord::parse("10"), ItineraryWord::parse("11")) ==
          Ordering::GT);
    CHECK(parity_lex_compare(u, u) == Ordering::EQ);
    CHECK_THROWS_AS(parity_lex_compare(u, ItineraryWord::parse("0")), LengthMismatch);

    auto golden = NumberField::catalog("golden");
    auto og = orbit_of(golden);
    auto ic2 = itinerary(og.points[2], 3);
    auto ic1 = itinerary(og.points[1], 3);
    CHECK(parity_lex_compare(ic2, ic1) == Ordering::LT);
}

TEST_CASE("order/itinerary compatibility on random exact pairs") {
    auto golden = NumberField::catalog("golden");
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<long> num(0, 1 << 20);
    for (int trial = 0; trial < 400; ++trial) {
        Rat qa(num(rng), (1 << 20) + 1);
        Rat qb(num(rng), (1 << 20) + 1);
        qa.canonicalize();
        qb.canonicalize();
        if (qa == qb) continue;
        if (qb < qa) std::swap(qa, qb);
        FieldElem x = golden->from_rat(qa), y = golden->from_rat(qb);
        auto ord = parity_lex_compare(itinerary(x, 20), itinerary(y, 20));
        CHECK(ord != Ordering::GT);
    }
}

TEST_CASE("exact iteration agrees with high-precision floating iteration") {
    // The exact path is the oracle; a 192-bit float orbit must stay within
    // 2^-40 of it for 60 steps.
    for (const char* name : {"full", "golden", "sqrt2"}) {
        auto f = NumberField::catalog(name);
        double beta_d = f->beta_interval(80).mid();
        std::mt19937 rng(987123);
        std::uniform_int_distribution<long> num(0, 99999);
        int seeds = 700;
        for (int s = 0; s < seeds; ++s) {
            Rat q(num(rng), 100000);
            q.canonicalize();
            FieldElem x = f->from_rat(q);
            mpf_class xf(q, 192), betaf(0, 192), one(1, 192), half(0.5, 192);
            auto [bl, bh] = f->isolate(160);
            betaf = mpf_class(bl, 192) + (mpf_class(bh, 192) - mpf_class(bl, 192)) / 2;
            for (int i = 0; i < 60; ++i) {
                x = tent_apply(x);
                if (xf <= half)
                    xf = betaf * xf;
                else
                    xf = betaf * (one - xf);
            }
            (void)beta_d;
            double err = std::fabs(x.to_interval(80).mid() - xf.get_d());
            CHECK(err <= std::ldexp(1.0, -40));
        }
    }
}

TEST_CASE("renormalization depth") {
    CHECK(renorm_depth(NumberField::catalog("full")) == 0);
    CHECK(renorm_depth(NumberField::catalog("golden")) == 0);
    CHECK(renorm_depth(NumberField::catalog("sqrt2")) == 1);
    // 2^(1/4): x^4 - 2 isolated in (1, 3/2)
    auto q = NumberField::make({Int(-2), Int(0), Int(0), Int(0), Int(1)}, Rat(1), Rat(3, 2));
    CHECK(renorm_depth(q) == 2);
}

TEST_CASE("renorm_depth is nonincreasing in beta") {
    std::vector<std::pair<double, int>> samples;
    for (int i = 1; i <= 18; ++i) {
        Rat q(1000 + i * 55, 1000);  // 1.055 .. 1.99
        q.canonicalize();
        auto f = NumberField::make({Int(-q.get_num()), Int(q.get_den())}, q - Rat(1, 100),
                                   q + Rat(1, 100));
        samples.emplace_back(rat_to_double(q), renorm_depth(f));
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
        CHECK(samples[i].first > samples[i - 1].first);
        CHECK(samples[i].second <= samples[i - 1].second);
    }
}

TEST_CASE("core interval") {
    auto full = NumberField::catalog("full");
    auto [lo2, hi2] = core_interval(full);
    CHECK(lo2.rational_value() == 0);
    CHECK(hi2.rational_value() == 1);

    auto golden = NumberField::catalog("golden");
    auto [lo, hi] = core_interval(golden);
    CHECK(lo.to_interval(50).contains(0.30901699437494742));  // beta(1-beta/2) = c2
    CHECK(hi.to_interval(50).contains(0.80901699437494742));  // beta/2
    // invariance f(P) = P, exactly
    auto img = tent_image(lo, hi);
    CHECK(img.first.identical(lo));
    CHECK(img.second.identical(hi));

    auto s2 = NumberField::catalog("sqrt2");
    auto [l, h] = core_interval(s2);
    CHECK(l.identical(s2->beta() - Rat(1)));        // sqrt2 - 1
    CHECK(h.identical(s2->beta() * Rat(1, 2)));     // sqrt2/2
}

TEST_CASE("restrictive intervals") {
    auto s2 = NumberField::catalog("sqrt2");
    auto J = restrictive_interval(s2, 1);
    FieldElem p = s2->from_rat(Rat(2)) - s2->beta();  // beta/(1+beta) = 2 - sqrt2
    CHECK(J.second.identical(p));
    CHECK(J.first.identical(s2->one() - p));  // sqrt2 - 1

    CHECK_THROWS_AS(restrictive_interval(NumberField::catalog("full"), 1), NotRenormalizable);
    CHECK_THROWS_AS(restrictive_interval(s2, 2), NotRenormalizable);

    // Twice-renormalizable parameter: both levels certify exactly.
    auto q = NumberField::make({Int(-2), Int(0), Int(0), Int(0), Int(1)}, Rat(1), Rat(3, 2));
    auto J1 = restrictive_interval(q, 1);
    auto J2 = restrictive_interval(q, 2);
    CHECK(J1.first.compare(J2.first) == Ordering::LT);
    CHECK(J2.second.compare(J1.second) == Ordering::LT);
}
