#include "doctest.h"

#include <random>

#include "tentsurgery/preimage.hpp"

using namespace tentsurgery;

namespace {
CriticalOrbitData orbit_of(const NumberField::Ptr& f) {
    return std::get<CriticalOrbitData>(critical_orbit(f));
}
}  // namespace

TEST_CASE("one-step preimages") {
    auto full = NumberField::catalog("full");
    auto pre0 = preimages_one_step(full->zero());
    REQUIRE(pre0.size() == 2);
    CHECK(pre0[0].rational_value() == Rat(0));
    CHECK(pre0[1].rational_value() == Rat(1));

    auto golden = NumberField::catalog("golden");
    auto prec1 = preimages_one_step(golden->beta() * Rat(1, 2));
    REQUIRE(prec1.size() == 1);  // c1 admits the unique preimage c
    CHECK(prec1[0].identical(golden->half()));

    CHECK(preimages_one_step(golden->one()).empty());
}

TEST_CASE("preimage trees of the catalog") {
    auto full = NumberField::catalog("full");
    auto tree2 = enumerate_tree(full, orbit_of(full), 7);
    CHECK(tree2.levels[0].size() == 1);
    CHECK(tree2.levels[1].size() == 1);
    CHECK(tree2.levels[2].size() == 1);
    CHECK(tree2.levels[3].size() == 2);
    CHECK(tree2.levels[7].size() == 32);
    CHECK(tree2.levels[3][0].point.rational_value() == Rat(1, 4));
    CHECK(tree2.levels[3][1].point.rational_value() == Rat(3, 4));
    CHECK(tree2.levels[3][0].word.to_string() == "0*10");
    CHECK(tree2.levels[2][0].on_orbit);  // the point 1/2

    auto golden = NumberField::catalog("golden");
    auto tg = enumerate_tree(golden, orbit_of(golden), 6);
    CHECK(tg.levels[1].size() == 2);
    CHECK(tg.levels[2].size() == 4);
    CHECK(tg.levels[3].size() == 6);

    auto s2 = NumberField::catalog("sqrt2");
    auto os = orbit_of(s2);
    auto ts = enumerate_tree(s2, os, 4);
    REQUIRE(ts.levels[1].size() == 1);
    CHECK(ts.levels[1][0].point.identical(s2->beta() - Rat(1)));  // c2, on the orbit
    CHECK(ts.levels[1][0].on_orbit);

    CHECK_THROWS_AS(enumerate_tree(full, orbit_of(full), 19), CapExceeded);
}

TEST_CASE("level counts via the recursion") {
    auto full = NumberField::catalog("full");
    CountEngine e2(full, orbit_of(full));
    CHECK(e2.level_count(7) == 32);
    auto F2 = e2.level_counts(20);
    CHECK(F2[0] == 1);
    CHECK(F2[1] == 1);
    for (int n = 2; n <= 20; ++n) CHECK(F2[static_cast<std::size_t>(n)] == pow_int(Int(2), static_cast<unsigned long>(n - 2)));

    auto golden = NumberField::catalog("golden");
    CountEngine eg(golden, orbit_of(golden));
    auto Fg = eg.level_counts(20);
    CHECK(Fg[1] == 2);
    CHECK(Fg[2] == 4);
    CHECK(Fg[3] == 6);
    CHECK(Fg[4] == 10);
    CHECK(Fg[5] == 16);
    for (int n = 3; n <= 20; ++n)
        CHECK(Fg[static_cast<std::size_t>(n)] ==
              Fg[static_cast<std::size_t>(n) - 1] + Fg[static_cast<std::size_t>(n) - 2]);
    // Closed form k1 mu^n + k2 phi^n rounds to F(n).
    double mu = (1.0 - std::sqrt(5.0)) / 2.0, phi = (1.0 + std::sqrt(5.0)) / 2.0;
    double k1 = (5.0 - std::sqrt(5.0)) / 5.0, k2 = (5.0 + std::sqrt(5.0)) / 5.0;
    for (int n = 1; n <= 20; ++n) {
        double cf = k1 * std::pow(mu, n) + k2 * std::pow(phi, n);
        CHECK(Int(static_cast<long>(std::llround(cf))) == Fg[static_cast<std::size_t>(n)]);
    }

    auto s2 = NumberField::catalog("sqrt2");
    CountEngine es(s2, orbit_of(s2));
    auto Fs = es.level_counts(9);
    std::vector<long> expect{1, 1, 2, 3, 4, 6, 8, 12, 16, 24};
    for (int n = 0; n <= 9; ++n) CHECK(Fs[static_cast<std::size_t>(n)] == expect[static_cast<std::size_t>(n)]);
}

TEST_CASE("count_below matches the tree oracle") {
    std::mt19937 rng(555);
    std::uniform_int_distribution<long> num(1, 9999);
    for (const char* name : {"full", "golden", "sqrt2"}) {
        auto f = NumberField::catalog(name);
        auto orb = orbit_of(f);
        auto tree = enumerate_tree(f, orb, 12);
        CountEngine eng(f, orb);
        for (int trial = 0; trial < 40; ++trial) {
            Rat q(num(rng), 10000);
            q.canonicalize();
            FieldElem y = f->from_rat(q);
            auto col = eng.column(y, 12, false);
            for (int n = 0; n <= 12; ++n) {
                Int tree_below(0);
                for (const auto& node : tree.levels[static_cast<std::size_t>(n)])
                    if (node.point.compare(y) == Ordering::LT) ++tree_below;
                CHECK(col.N[static_cast<std::size_t>(n)] == tree_below);
            }
        }
        // Spec examples for the full tent: y=1/2 and y=1 at n=3.
        if (std::string(name) == "full") {
            auto got = eng.count_below(f->half(), 3);
            CHECK(got.second == 1);
            CHECK(eng.count_below(f->one(), 3).second == 2);
            CHECK(eng.count_below(f->zero(), 5) == std::pair<Int, Int>{Int(0), Int(0)});
        }
    }
}

TEST_CASE("counts at exact tree points and orbit points") {
    auto golden = NumberField::catalog("golden");
    auto orb = orbit_of(golden);
    CountEngine eng(golden, orb);
    // Threshold exactly at c2 (an orbit point and level-1 host).
    auto col = eng.column(orb.points[2], 6, false);
    auto tree = enumerate_tree(golden, orb, 6);
    for (int n = 0; n <= 6; ++n) {
        Int below(0);
        for (const auto& node : tree.levels[static_cast<std::size_t>(n)])
            if (node.point.compare(orb.points[2]) == Ordering::LT) ++below;
        CHECK(col.N[static_cast<std::size_t>(n)] == below);
    }
}

TEST_CASE("length schedule") {
    auto golden = NumberField::catalog("golden");
    LengthSchedule sched(golden);
    FieldElem beta = golden->beta();
    // 1 = beta a(1) exactly; a(n-1) > beta a(n) for n >= 2.
    CHECK((beta * sched.a_exact(1) - Rat(1)).is_zero());
    for (int n = 2; n <= 24; ++n) {
        FieldElem diff = sched.a_exact(n - 1) - beta * sched.a_exact(n);
        CHECK(diff.sign() > 0);
    }
    // ratio identity a(n-1)/a(n) = beta (n+1)/(n-1)
    for (int n = 2; n <= 12; ++n) {
        FieldElem lhs = sched.a_exact(n - 1);
        FieldElem rhs = sched.a_exact(n) * beta * make_rat(n + 1, n - 1);
        CHECK(lhs.identical(rhs));
    }
    CHECK(sched.a_enclosure(5).contains(sched.a_exact(5).to_interval(60).mid()));
}

TEST_CASE("count table export") {
    auto full = NumberField::catalog("full");
    auto rows = count_table(full, orbit_of(full), 10, 8);
    CHECK(rows.size() == 11);
    CHECK(rows[7].F_recursion == 32);
    CHECK(rows[7].F_tree.has_value());
    CHECK(*rows[7].F_tree == 32);
    CHECK(!rows[10].F_tree.has_value());
    auto csv = count_table_csv(rows);
    CHECK(csv.find("n,F_tree,F_recursion") == 0);
}
