#include "doctest.h"

#include <random>

#include "tentsurgery/mass.hpp"

using namespace tentsurgery;

namespace {
struct Ctx {
    NumberField::Ptr field;
    CriticalOrbitData orbit;
    GrowthCertificate cert;
};
Ctx ctx(const char* name) {
    auto f = NumberField::catalog(name);
    auto orb = std::get<CriticalOrbitData>(critical_orbit(f));
    auto part = build_partition(f, orb);
    auto tm = build_matrix(part, orb);
    return {f, orb, growth_constant(f, tm, orb, 20)};
}
MassEngine engine(const Ctx& c) { return MassEngine(c.field, c.orbit, c.cert); }
}  // namespace

TEST_CASE("count generating functions match the recursion and hand fixtures") {
    auto c = ctx("sqrt2");
    MassEngine eng(c.field, c.orbit, c.cert);
    // S_{c1}(u) = (1 + u - u^4) / ((1 - 2u^2)(1 - u)), derived by hand.
    int id = eng.counts().register_threshold(c.orbit.points[1]);
    RatFun gf = eng.count_gf(id);
    Poly num({Rat(1), Rat(1), Rat(0), Rat(0), Rat(-1)});
    Poly den = Poly({Rat(1), Rat(0), Rat(-2)}) * Poly({Rat(1), Rat(-1)});
    CHECK(gf == RatFun(num, den));
    auto series = ratfun_series(gf.num(), gf.den(), 12);
    for (int n = 0; n <= 12; ++n) CHECK(series[static_cast<std::size_t>(n)] == Rat(eng.counts().S(id, n)));
}

TEST_CASE("beta=2 masses are the paper constants") {
    auto c = ctx("full");
    auto eng = engine(c);
    DInterval L = eng.total_length();
    CHECK(L.contains(Rat(19, 6)));
    CHECK(L.width() <= 1e-9);

    DInterval sched = eng.schedule_mass_total();  // sum F(n) a(n) = 3/4
    CHECK(sched.contains(Rat(3, 4)));
    CHECK(sched.width() <= 1e-9);

    // Sigma_{n>=3} F a = L - 3 (three unit insertions) = 1/6
    DInterval tail_part = L - DInterval(3.0);
    CHECK(tail_part.contains(Rat(1, 6)));
}

TEST_CASE("golden-mean schedule mass obeys the Lemma-3 bound") {
    auto c = ctx("golden");
    auto eng = engine(c);
    DInterval s = eng.schedule_mass_total();
    CHECK(s.hi() < 4.0);
    CHECK(s.width() <= 1e-9);
    // Independent closed form via sum z^n 2/(n(n+1)) = 2[1 + (1-z)/z log(1-z)].
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    double k1 = (5.0 - std::sqrt(5.0)) / 5.0, k2 = (5.0 + std::sqrt(5.0)) / 5.0;
    double z = -1.0 / (phi * phi);
    double alt = 2.0 * (1.0 + (1.0 - z) / z * std::log1p(-z));
    double expect = k2 * 2.0 + k1 * alt;
    CHECK(s.contains(expect));

    DInterval L = eng.total_length();
    // Three unit insertions replace the schedule lengths at the orbit hosts.
    CHECK(L.lo() > 3.0);
    CHECK(L.width() <= 1e-9);
}

TEST_CASE("sqrt2 total length is finite and reproducible") {
    auto c = ctx("sqrt2");
    auto eng = engine(c);
    DInterval L = eng.total_length();
    CHECK(L.width() <= 1e-9);
    CHECK(L.lo() > 4.0);  // four unit insertions plus positive schedule mass
    DInterval L2 = MassEngine(c.field, c.orbit, c.cert).total_length();
    CHECK(L2.lo() == L.lo());
    CHECK(L2.hi() == L.hi());
}

TEST_CASE("mass against the tree oracle") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<long> num(1, 999);
    for (const char* name : {"full", "golden", "sqrt2"}) {
        auto c = ctx(name);
        auto eng = engine(c);
        auto tree = enumerate_tree(c.field, c.orbit, 14);
        LengthSchedule sched(c.field);
        double m_rig = eng.tail_constant();
        double crude_tail = 2.0 * m_rig / 15.0;  // sum_{n>14} a(n) F(n) <= 2M/(N+1)
        for (int trial = 0; trial < 12; ++trial) {
            Rat q(num(rng), 1000);
            q.canonicalize();
            FieldElem y = c.field->from_rat(q);
            DInterval got = eng.mass_any(y, false, 1e-9);
            // Oracle: units below y plus schedule lengths over tree hosts.
            DInterval oracle(0.0);
            for (int i = 0; i < c.orbit.size(); ++i)
                if (c.orbit.points[static_cast<std::size_t>(i)].compare(y) == Ordering::LT)
                    oracle += DInterval(1.0);
            for (int n = 1; n <= 14; ++n)
                for (const auto& node : tree.levels[static_cast<std::size_t>(n)])
                    if (!node.on_orbit && node.point.compare(y) == Ordering::LT)
                        oracle += sched.a_enclosure(n);
            CHECK(got.hi() >= oracle.lo());
            CHECK(got.lo() <= oracle.hi() + crude_tail);
        }
    }
}

TEST_CASE("mass is monotone and anchored at the ends") {
    auto c = ctx("golden");
    auto eng = engine(c);
    CHECK(eng.mass(c.field->zero(), false).hi() == 0.0);  // exactly empty
    DInterval total = eng.total_length();
    DInterval at_one = eng.mass(c.field->one(), true);
    CHECK(at_one.lo() == total.lo());
    DInterval prev(0.0);
    for (int k = 1; k <= 9; ++k) {
        DInterval cur = eng.mass_any(c.field->from_rat(Rat(k, 10)), false, 1e-8);
        CHECK(cur.hi() >= prev.lo());
        prev = cur;
    }
}

TEST_CASE("beta=2 mass below 1/100 matches the dyadic structure") {
    auto c = ctx("full");
    auto eng = engine(c);
    DInterval got = eng.mass_any(c.field->from_rat(Rat(1, 100)), false, 1e-6);
    CHECK(got.width() <= 1e-3);
    // Unit insertion at 0 plus deep dyadic hosts below 1/100.
    CHECK(got.lo() >= 1.0);
    CHECK(got.hi() <= 1.001);
    // Tree-oracle lower bound: 1 + a(8) (the host 1/128) at least.
    LengthSchedule sched(c.field);
    CHECK(got.hi() >= 1.0 + sched.a_enclosure(8).lo());
}

TEST_CASE("host levels and insertion lengths") {
    auto c = ctx("full");
    auto eng = engine(c);
    CHECK(eng.host_level(c.field->from_rat(Rat(1, 4))) == 3);
    CHECK(eng.host_level(c.field->from_rat(Rat(3, 4))) == 3);
    CHECK(eng.host_level(c.field->half()) == 2);
    CHECK(eng.host_level(c.field->from_rat(Rat(1, 3))) == std::nullopt);
    CHECK(eng.insertion_length(c.field->half()).contains(1.0));  // orbit host
    LengthSchedule sched(c.field);
    CHECK(eng.insertion_length(c.field->from_rat(Rat(1, 4))).contains(
        sched.a_enclosure(3).mid()));

    // Cylinder brackets close around non-preimage points.
    auto br = eng.cylinder_bracket(c.field->from_rat(Rat(1, 3)), 1e-8);
    CHECK(!br.exact);
    CHECK(br.lo.compare(c.field->from_rat(Rat(1, 3))) != Ordering::GT);
    CHECK(br.hi.compare(c.field->from_rat(Rat(1, 3))) != Ordering::LT);
    CHECK(br.gap_bound <= 1e-8);
}
