#include "doctest.h"

#include "tentsurgery/verify.hpp"

using namespace tentsurgery;

namespace {
struct Ctx {
    NumberField::Ptr field;
    CriticalOrbitData orbit;
    GrowthCertificate cert;
    SurgeredMapDescriptor d;
};
Ctx make(const char* name, int depth = 13, double eps = 1e-6) {
    Ctx c;
    c.field = NumberField::catalog(name);
    c.orbit = std::get<CriticalOrbitData>(critical_orbit(c.field));
    auto part = build_partition(c.field, c.orbit);
    auto tm = build_matrix(part, c.orbit);
    c.cert = growth_constant(c.field, tm, c.orbit, 20);
    c.d = layout(c.field, c.orbit, depth, eps, c.cert);
    return c;
}
}  // namespace

TEST_CASE("difference quotients stay inside the step-2 band") {
    for (const char* name : {"full", "golden"}) {
        auto c = make(name);
        auto samples = check_quotients(c.d, {5, 7, 9, 12}, 30, 1e-3);
        for (const auto& q : samples) CHECK(q.within);
    }
}

TEST_CASE("length report") {
    auto c = make("full", 8);
    auto rep = check_lengths(c.d);
    CHECK(rep.total_inserted.contains(Rat(19, 6)));
    CHECK(rep.cantor_fraction.contains(Rat(6, 25)));
    CHECK(rep.fraction_positive);
}

TEST_CASE("basin simulation: full tent") {
    auto c = make("full", 8);
    int rec1 = c.d.record_at_host(c.field->one());
    auto rep = simulate_basin(c.d, rec1, 0.37, 500);
    CHECK(rep.cls == BasinClass::PeriodicCycle);
    CHECK(rep.period == 1);
    CHECK(std::fabs(rep.multiplier - 0.5) < 1e-6);  // (3 - beta)/2 at beta = 2
    CHECK(rep.entered_cycle_at <= 2);

    // A deep seed still reaches the cycle within level steps.
    for (int i = 0; i < static_cast<int>(c.d.records.size()); ++i)
        if (c.d.records[static_cast<std::size_t>(i)].level == 8) {
            auto deep = simulate_basin(c.d, i, 0.4, 500);
            CHECK(deep.entered_cycle_at <= 8);
            break;
        }

    // Critical midpoint is flagged as exceptional.
    int recc = c.d.record_at_host(c.field->half());
    auto exc = simulate_basin(c.d, recc, 0.5, 50);
    CHECK(exc.cls == BasinClass::Exceptional);
}

TEST_CASE("basin simulation: sqrt2 has an attracting fixed point of the w-branch") {
    auto c = make("sqrt2", 8);
    int rec = c.d.record_at_host(c.orbit.points[1]);
    auto rep = simulate_basin(c.d, rec, 0.23, 2000);
    CHECK(rep.cls == BasinClass::PeriodicCycle);
    CHECK(rep.period == 1);
    double expect = (3.0 - 1.4142135623730951) / 2.0;
    CHECK(std::fabs(std::fabs(rep.multiplier) - expect) < 1e-5);
}

TEST_CASE("endpoint seeds stay in the Cantor set") {
    auto c = make("golden", 8);
    for (int i = 0; i < 40; ++i) {
        EndpointRef e{i % static_cast<int>(c.d.records.size()), i % 2};
        auto rep = simulate_endpoint(c.d, e, 200);
        CHECK(rep.cls == BasinClass::Cantor);
        CHECK(rep.entered_cycle_at >= 0);
    }
}

TEST_CASE("attractor location") {
    auto cf = make("full", 6);
    auto rf = attractor_location(cf.d);
    CHECK(rf.renorm_depth == 0);
    CHECK(rf.invariance_certified);
    REQUIRE(rf.host_intervals.size() == 1);
    CHECK(rf.host_intervals[0].first.rational_value() == Rat(0));
    CHECK(rf.host_intervals[0].second.rational_value() == Rat(1));
    CHECK(rf.entropy.contains(std::log(2.0)));

    auto cg = make("golden", 6);
    auto rg = attractor_location(cg.d);
    CHECK(rg.renorm_depth == 0);
    CHECK(rg.invariance_certified);
    CHECK(rg.entropy.contains(std::log(1.6180339887498949)));

    auto cs = make("sqrt2", 6);
    auto rs = attractor_location(cs.d);
    CHECK(rs.renorm_depth == 1);
    CHECK(rs.invariance_certified);
    REQUIRE(rs.host_intervals.size() == 2);
    // J = [sqrt2-1, 2-sqrt2], f(J) = [2-sqrt2, sqrt2/2]
    CHECK(rs.host_intervals[0].first.identical(cs.field->beta() - Rat(1)));
    CHECK(rs.host_intervals[1].second.identical(cs.field->beta() * Rat(1, 2)));
    CHECK(rs.entropy.contains(std::log(1.4142135623730951)));
}

TEST_CASE("entropy check") {
    for (const char* name : {"full", "golden", "sqrt2"}) {
        auto f = NumberField::catalog(name);
        auto orb = std::get<CriticalOrbitData>(critical_orbit(f));
        auto rep = entropy_check(f, orb, 24);
        CHECK(rep.consistent);
    }
}

TEST_CASE("suite runner emits JSON and passes on the full tent") {
    auto results = run_suite("full", "lengths", 8, 1e-6);
    CHECK(!results.empty());
    for (const auto& r : results) CHECK(r.pass);
    auto js = results_json(results);
    CHECK(js.find("\"status\": \"PASS\"") != std::string::npos);
}
