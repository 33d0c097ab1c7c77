#include "tentsurgery/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace tentsurgery {

namespace {

std::vector<std::vector<int>> records_by_depth(const SurgeredMapDescriptor& d) {
    std::vector<std::vector<int>> by(static_cast<std::size_t>(d.depth) + 1);
    for (int i = 0; i < static_cast<int>(d.records.size()); ++i) {
        const auto& r = d.records[static_cast<std::size_t>(i)];
        if (r.side == SideTag::L || r.side == SideTag::R)
            if (r.level <= d.depth) by[static_cast<std::size_t>(r.level)].push_back(i);
    }
    return by;
}

bool schedule_target(const SurgeredMapDescriptor& d, int idx) {
    const auto& tgt = d.records[static_cast<std::size_t>(d.records[static_cast<std::size_t>(idx)].target)];
    return tgt.side == SideTag::L || tgt.side == SideTag::R;
}

}  // namespace

std::vector<QuotientSample> check_quotients(SurgeredMapDescriptor& d,
                                            const std::vector<int>& depths,
                                            int samples_per_depth, double tol, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    DInterval beta = d.field->beta_interval(70);
    auto by_depth = records_by_depth(d);
    std::vector<QuotientSample> out;

    for (int n : depths) {
        if (n < 2 || n > d.depth || by_depth[static_cast<std::size_t>(n)].empty())
            throw InsufficientDepth("no materialized records at depth " + std::to_string(n));
        const auto& pool = by_depth[static_cast<std::size_t>(n)];
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (int s = 0; s < samples_per_depth; ++s) {
            int idx = pool[pick(rng)];
            const auto& r = d.records[static_cast<std::size_t>(idx)];
            QuotientSample q;
            q.depth = n;
            q.record = idx;
            q.bound_lo = beta.lo();
            q.bound_hi = beta.hi() + 6.0 / (n - 1);

            int variant = s % 3;
            if (variant != 2 && !schedule_target(d, idx)) variant = 2;
            if (variant == 0) {
                // Whole-branch quotient: |image length| / |domain length|.
                const auto& tgt = d.records[static_cast<std::size_t>(r.target)];
                q.quotient = tgt.length / r.length;
            } else if (variant == 1) {
                // Random sub-pair inside the branch.
                const auto& tgt = d.records[static_cast<std::size_t>(r.target)];
                double t1 = unit(rng), t2 = unit(rng);
                if (std::fabs(t1 - t2) < 0.05) t2 = t1 + 0.05;
                if (t2 > 1.0) t2 = 1.0;
                DInterval v1 = cubic_local_eval(r.branch, beta, r.length, tgt.length, DInterval(t1));
                DInterval v2 = cubic_local_eval(r.branch, beta, r.length, tgt.length, DInterval(t2));
                q.quotient = ((v2 - v1) * tgt.length / (DInterval(t2) - DInterval(t1)) / r.length).abs();
            } else {
                // Cantor-gap quotient to the nearest deeper materialized
                // neighbor (insertions between them are deeper than d.depth).
                int nb = -1;
                if (idx + 1 < static_cast<int>(d.records.size()) &&
                    d.records[static_cast<std::size_t>(idx) + 1].level > n)
                    nb = idx + 1;
                else if (idx > 0 && d.records[static_cast<std::size_t>(idx) - 1].level > n)
                    nb = idx - 1;
                if (nb < 0) {
                    --s;  // resample; isolated shallow records are rare
                    continue;
                }
                EndpointRef ey{idx, nb > idx ? 1 : 0};
                EndpointRef ez{nb, nb > idx ? 0 : 1};
                DInterval ydom = endpoint_position(d, ey), zdom = endpoint_position(d, ez);
                DInterval yimg = endpoint_position(d, endpoint_step(d, ey));
                DInterval zimg = endpoint_position(d, endpoint_step(d, ez));
                q.quotient = ((zimg - yimg) / (zdom - ydom)).abs();
            }
            q.within = q.quotient.lo() >= q.bound_lo - tol && q.quotient.hi() <= q.bound_hi + tol;
            out.push_back(q);
        }
    }
    return out;
}

LengthReport check_lengths(SurgeredMapDescriptor& d) {
    LengthReport rep;
    rep.schedule_mass = d.engine->schedule_mass_total();
    rep.total_inserted = d.engine->total_length();
    rep.cantor_fraction = DInterval(1.0) / (DInterval(1.0) + rep.total_inserted);
    rep.fraction_positive = rep.cantor_fraction.lo() > 0.0;
    return rep;
}

namespace {

struct LocalState {
    int record;
    double t;
};

LocalState local_step(const SurgeredMapDescriptor& d, LocalState s) {
    const auto& r = d.records[static_cast<std::size_t>(s.record)];
    const auto& tgt = d.records[static_cast<std::size_t>(r.target)];
    double beta = d.field->beta_interval(60).mid();
    double t = s.t;
    double out;
    if (r.side == SideTag::Critical) {
        out = crit_local_eval(DInterval(beta), DInterval(t)).mid();
    } else {
        double d1 = r.length.mid(), d2 = tgt.length.mid();
        double m = (beta * d1 * t + (d2 - beta * d1) * (3 * t * t - 2 * t * t * t)) / d2;
        bool inc = r.branch == BranchKind::H_INC || r.branch == BranchKind::UNIT_G;
        out = inc ? m : 1.0 - m;
    }
    out = std::min(1.0, std::max(0.0, out));
    return {r.target, out};
}

double local_deriv_abs(const SurgeredMapDescriptor& d, const LocalState& s) {
    const auto& r = d.records[static_cast<std::size_t>(s.record)];
    const auto& tgt = d.records[static_cast<std::size_t>(r.target)];
    double beta = d.field->beta_interval(60).mid();
    if (r.side == SideTag::Critical)
        return std::fabs(crit_local_deriv(DInterval(beta), DInterval(s.t)).mid());
    double d1 = r.length.mid(), d2 = tgt.length.mid();
    return std::fabs(beta + 6.0 * ((d2 - beta * d1) / d1) * (s.t - s.t * s.t));
}

}  // namespace

BasinReport simulate_basin(const SurgeredMapDescriptor& d, int record, double local,
                           int max_iter) {
    BasinReport rep;
    LocalState s{record, local};
    std::vector<LocalState> hist;
    int cycle_start = d.orbit.preperiod;
    for (int it = 0; it < max_iter; ++it) {
        const auto& r = d.records[static_cast<std::size_t>(s.record)];
        if (r.side == SideTag::Critical && std::fabs(s.t - 0.5) < 1e-9) {
            rep.cls = BasinClass::Exceptional;
            rep.iterations = it;
            return rep;
        }
        bool in_cycle = (r.side == SideTag::Orbit || r.side == SideTag::Critical) &&
                        r.orbit_index >= cycle_start;
        if (in_cycle) {
            if (rep.entered_cycle_at < 0) rep.entered_cycle_at = it;
            hist.push_back(s);
            for (int p = 1; p <= 64 && p < static_cast<int>(hist.size()); ++p) {
                const LocalState& past = hist[hist.size() - 1 - static_cast<std::size_t>(p)];
                if (past.record == s.record && std::fabs(past.t - s.t) < 1e-12) {
                    // Converge further, then reduce to the minimal period.
                    LocalState w = s;
                    for (int k = 0; k < 512; ++k) w = local_step(d, w);
                    std::vector<LocalState> tailv{w};
                    for (int k = 0; k < p; ++k) tailv.push_back(local_step(d, tailv.back()));
                    int period = p;
                    for (int q = 1; q <= p; ++q) {
                        if (tailv[static_cast<std::size_t>(q)].record == tailv[0].record &&
                            std::fabs(tailv[static_cast<std::size_t>(q)].t - tailv[0].t) < 1e-9) {
                            period = q;
                            break;
                        }
                    }
                    double mult = 1.0;
                    LocalState u = tailv[0];
                    for (int k = 0; k < period; ++k) {
                        mult *= local_deriv_abs(d, u);
                        u = local_step(d, u);
                    }
                    rep.cls = BasinClass::PeriodicCycle;
                    rep.iterations = it;
                    rep.period = period;
                    rep.multiplier = mult;
                    return rep;
                }
            }
        }
        s = local_step(d, s);
        rep.iterations = it + 1;
    }
    rep.cls = BasinClass::Undecided;
    return rep;
}

BasinReport simulate_endpoint(const SurgeredMapDescriptor& d, EndpointRef seed, int max_iter) {
    BasinReport rep;
    std::vector<std::pair<int, int>> hist;
    EndpointRef e = seed;
    for (int it = 0; it < max_iter; ++it) {
        const auto& r = d.records[static_cast<std::size_t>(e.record)];
        if ((r.side == SideTag::Orbit || r.side == SideTag::Critical) &&
            r.orbit_index >= d.orbit.preperiod && rep.entered_cycle_at < 0)
            rep.entered_cycle_at = it;
        for (std::size_t k = 0; k < hist.size(); ++k) {
            if (hist[k] == std::make_pair(e.record, e.end)) {
                rep.cls = BasinClass::Cantor;  // endpoints stay in A forever
                rep.iterations = it;
                rep.period = static_cast<int>(hist.size() - k);
                return rep;
            }
        }
        hist.emplace_back(e.record, e.end);
        e = endpoint_step(d, e);
    }
    rep.cls = BasinClass::Cantor;
    rep.iterations = max_iter;
    return rep;
}

AttractorReport attractor_location(SurgeredMapDescriptor& d) {
    AttractorReport rep;
    rep.renorm_depth = renorm_depth(d.field);
    if (rep.renorm_depth == 0) {
        auto core = core_interval(d.field);
        auto img = tent_image(core.first, core.second);
        rep.invariance_certified =
            img.first.identical(core.first) && img.second.identical(core.second);
        rep.host_intervals.push_back(core);
    } else {
        auto J = restrictive_interval(d.field, rep.renorm_depth);  // certified inside
        rep.invariance_certified = true;
        long steps = 1L << rep.renorm_depth;
        std::pair<FieldElem, FieldElem> cur = J;
        for (long i = 0; i < steps; ++i) {
            rep.host_intervals.push_back(cur);
            cur = tent_image(cur.first, cur.second);
        }
    }
    for (const auto& [lo, hi] : rep.host_intervals)
        rep.embedded.emplace_back(embed(d, lo), embed(d, hi) + d.engine->insertion_length(hi));

    // Entropy of the symbolic model: spectral radius of the core submatrix.
    auto part = build_partition(d.field, d.orbit);
    auto tm = build_matrix(part, d.orbit);
    auto core = core_interval(d.field);
    std::vector<int> keep;
    for (int i = 0; i + 1 < static_cast<int>(part.cuts.size()); ++i) {
        if (part.cuts[static_cast<std::size_t>(i)].compare(core.first) != Ordering::LT &&
            part.cuts[static_cast<std::size_t>(i) + 1].compare(core.second) != Ordering::GT)
            keep.push_back(i);
    }
    IntMatrix sub(keep.size(), std::vector<Int>(keep.size(), Int(0)));
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b)
            sub[a][b] = tm.B[static_cast<std::size_t>(keep[a])][static_cast<std::size_t>(keep[b])];
    rep.entropy = spectral_radius(sub, 1e-9).log();
    return rep;
}

EntropyReport entropy_check(const NumberField::Ptr& field, const CriticalOrbitData& orbit,
                            int n_max) {
    if (n_max < 8) throw std::invalid_argument("n_max must be >= 8");
    EntropyReport rep;
    rep.n_max = n_max;
    auto part = build_partition(field, orbit);
    auto tm = build_matrix(part, orbit);
    rep.via_matrix = tm.spectral_radius_estimate.log();

    // Lap-count oracle: lap(f^n) = 1 + #critical-point preimages up to n-1.
    CountEngine c_engine(field, orbit, field->half(), orbit.preperiod == 0);
    Int laps(1);
    for (int j = 0; j < n_max; ++j) laps += c_engine.total_count(j);
    rep.via_laps = std::log(laps.get_d()) / n_max;

    auto cert = growth_constant(field, tm, orbit, 12);
    double beta_lo = field->beta_interval(60).lo();
    double C = cert.rigorous ? rat_to_double(cert.M_rig_upper) : 8.0;
    rep.lap_tolerance = std::log(2.0 + 2.0 * C / (beta_lo - 1.0)) / n_max + 1e-9;
    double logb = std::log(field->beta_interval(60).mid());
    rep.consistent = rep.via_matrix.contains(logb) &&
                     rep.via_laps >= logb - 1e-9 && rep.via_laps <= logb + rep.lap_tolerance;
    return rep;
}

std::string results_json(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    os.precision(17);
    os << "[\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        os << "  {\"check_name\": \"" << r.name << "\", \"status\": \""
           << (r.pass ? "PASS" : "FAIL") << "\", \"measured\": " << r.measured
           << ", \"bound\": " << r.bound << ", \"tolerance\": " << r.tolerance << ", \"detail\": \""
           << r.detail << "\"}";
        os << (i + 1 < results.size() ? ",\n" : "\n");
    }
    os << "]\n";
    return os.str();
}

namespace {

struct SuiteContext {
    NumberField::Ptr field;
    CriticalOrbitData orbit;
    MarkovPartition part;
    TransitionMatrix tm;
    GrowthCertificate cert;
    SurgeredMapDescriptor descriptor;
};

SuiteContext make_context(const std::string& beta_name, int depth, double eps) {
    SuiteContext ctx;
    ctx.field = NumberField::catalog(beta_name);
    auto orb = critical_orbit(ctx.field);
    ctx.orbit = std::get<CriticalOrbitData>(orb);
    ctx.part = build_partition(ctx.field, ctx.orbit);
    ctx.tm = build_matrix(ctx.part, ctx.orbit);
    ctx.cert = growth_constant(ctx.field, ctx.tm, ctx.orbit, 20);
    ctx.descriptor = layout(ctx.field, ctx.orbit, depth, eps, ctx.cert);
    return ctx;
}

void suite_lengths(SuiteContext& ctx, const std::string& name, std::vector<CheckResult>& out) {
    auto rep = check_lengths(ctx.descriptor);
    CheckResult a{"lengths/schedule_mass_finite", rep.schedule_mass.hi() < 1e9,
                  rep.schedule_mass.mid(), 0, 1e-6, "sum F(n) a(n)"};
    out.push_back(a);
    if (name == "full") {
        DInterval part16 = rep.total_inserted - DInterval(3.0);
        out.push_back({"lengths/sigma_n_ge_3", part16.contains(Rat(1, 6)) && part16.width() <= 1e-6,
                       part16.mid(), 1.0 / 6.0, 1e-6, "contains 1/6"});
        out.push_back({"lengths/total", rep.total_inserted.contains(Rat(19, 6)),
                       rep.total_inserted.mid(), 19.0 / 6.0, 1e-6, "contains 19/6"});
        DInterval frac = rep.cantor_fraction;
        out.push_back({"lengths/cantor_fraction",
                       frac.contains(Rat(6, 25)) && frac.width() <= 1e-6, frac.mid(), 0.24, 1e-6,
                       "contains 6/25"});
    }
    if (name == "golden")
        out.push_back({"lengths/lemma3_bound", rep.schedule_mass.hi() < 4.0,
                       rep.schedule_mass.hi(), 4.0, 0, "strictly below 4"});
    out.push_back({"lengths/thickness", rep.fraction_positive, rep.cantor_fraction.lo(), 0, 0,
                   "positive Cantor fraction"});
}

void suite_quotients(SuiteContext& ctx, std::vector<CheckResult>& out) {
    std::vector<int> depths;
    for (int n = 5; n <= std::min(12, ctx.descriptor.depth - 1); ++n) depths.push_back(n);
    auto samples = check_quotients(ctx.descriptor, depths, 100, 1e-3);
    int bad = 0;
    double worst = 0;
    for (const auto& q : samples) {
        if (!q.within) ++bad;
        worst = std::max(worst, q.quotient.hi() - q.bound_hi);
    }
    out.push_back({"quotients/step2_bound", bad == 0, static_cast<double>(samples.size()),
                   static_cast<double>(bad), 1e-3,
                   "difference quotients within [beta, beta+6/(n-1)]"});
}

void suite_hyperbolic(SuiteContext& ctx, std::vector<CheckResult>& out) {
    std::mt19937 rng(4242);
    auto& d = ctx.descriptor;
    std::uniform_int_distribution<std::size_t> pick(0, d.records.size() - 1);
    FieldElem beta = ctx.field->beta();
    int bad = 0;
    int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        EndpointRef e{static_cast<int>(pick(rng)), static_cast<int>(pick(rng) % 2)};
        FieldElem prod = ctx.field->one();
        EndpointRef w = e;
        for (int j = 1; j <= 8; ++j) {
            prod = prod * endpoint_derivative_exact(d, w);
            w = endpoint_step(d, w);
            FieldElem expect = beta.pow(j);
            FieldElem m = prod;
            if (m.sign() < 0) m = -m;
            if (!(m - expect).is_zero()) {
                ++bad;
                break;
            }
        }
    }
    out.push_back({"hyperbolic/derivative_products", bad == 0, static_cast<double>(seeds),
                   static_cast<double>(bad), 0, "|Dg^j| = beta^j exactly at endpoints"});
}

void suite_absorption(SuiteContext& ctx, std::vector<CheckResult>& out) {
    auto& d = ctx.descriptor;
    int bad_words = 0;
    for (const auto& r : d.records) {
        if (static_cast<int>(r.word.size()) > 12) continue;
        if (steps_to_cycle(r.word) != static_cast<int>(r.word.size()) - 1) ++bad_words;
    }
    out.push_back({"absorption/symbolic_steps", bad_words == 0, 0, static_cast<double>(bad_words),
                   0, "words reach the orbit cycle in length-1 steps"});

    std::mt19937 rng(1357);
    std::uniform_int_distribution<std::size_t> pick(0, d.records.size() - 1);
    std::uniform_real_distribution<double> unit(0.07, 0.93);
    int seeds = 100, reach_fail = 0, cycle_found = 0, mult_fail = 0;
    double mult_seen = 0;
    int period_seen = 0;
    for (int s = 0; s < seeds; ++s) {
        auto rep = simulate_basin(d, static_cast<int>(pick(rng)), unit(rng), 4000);
        if (rep.entered_cycle_at < 0 || rep.entered_cycle_at > 200) ++reach_fail;
        if (rep.cls == BasinClass::PeriodicCycle) {
            ++cycle_found;
            mult_seen = rep.multiplier;
            period_seen = rep.period;
            if (std::fabs(rep.multiplier) >= 1.0) ++mult_fail;
        }
    }
    out.push_back({"absorption/reach_cycle_200", reach_fail == 0, static_cast<double>(seeds),
                   static_cast<double>(reach_fail), 0,
                   "numeric seeds enter the orbit-interval cycle"});
    out.push_back({"absorption/attracting_cycle", cycle_found > 0 && mult_fail == 0, mult_seen,
                   1.0, 0,
                   cycle_found > 0
                       ? "located cycle period " + std::to_string(period_seen) + ", |mult| < 1"
                       : "no attracting cycle located"});
}

void suite_spectral(SuiteContext& ctx, std::vector<CheckResult>& out) {
    DInterval rho = ctx.tm.spectral_radius_estimate;
    DInterval beta = ctx.field->beta_interval(80);
    bool encloses = rho.intersects(beta) && rho.width() <= 1e-8;
    out.push_back({"spectral/radius_encloses_beta", encloses, rho.mid(), beta.mid(), 1e-8,
                   "width <= 1e-8"});
    out.push_back({"spectral/min_poly_divides", min_poly_divides_char_poly(ctx.field, ctx.tm.B),
                   0, 0, 0, "exact polynomial division"});
}

void suite_growth(SuiteContext& ctx, std::vector<CheckResult>& out) {
    CountEngine eng(ctx.field, ctx.orbit);
    auto F = eng.level_counts(20);
    FieldElem beta = ctx.field->beta();
    FieldElem m = ctx.field->from_rat(Rat(ctx.cert.M_scan));
    bool ok = true;
    for (int n = 0; n <= 20; ++n)
        if ((m * beta.pow(n) - ctx.field->from_rat(Rat(F[static_cast<std::size_t>(n)]))).sign() < 0)
            ok = false;
    out.push_back({"growth/F_le_M_beta_n", ok, ctx.cert.M_scan, 0, 0,
                   "F(n) <= M beta^n for n <= 20, certified M"});
}

void suite_conjugacy(SuiteContext& ctx, std::vector<CheckResult>& out) {
    auto& d = ctx.descriptor;
    std::mt19937 rng(8080);
    std::uniform_real_distribution<double> pos(0.0, d.right_end.lo());
    int trials = 1000, semi_bad = 0, unit_bad = 0;
    for (int t = 0; t < trials; ++t) {
        double y = pos(rng);
        auto cls = classify(d, y, d.eps);
        DInterval py = cls.point;
        DInterval gy = eval_map(d, y, d.eps);
        DInterval pgy = collapse(d, gy.mid(), d.eps);
        // f(pi(y)) as an interval through the exact map.
        FieldElem xa = d.field->from_rat(Rat(std::max(0.0, py.lo())));
        FieldElem xb = d.field->from_rat(Rat(std::min(1.0, py.hi())));
        auto img = tent_image(xa, xb);
        DInterval fpy = img.first.to_interval(60).hull(img.second.to_interval(60));
        double slack = 8.0 * d.eps + 8.0 * (py.width() + pgy.width());
        if (!(fpy.lo() - slack <= pgy.hi() && pgy.lo() <= fpy.hi() + slack)) ++semi_bad;

        double x = y / d.right_end.hi();
        DInterval lhs = eval_unit(d, x, d.eps);
        DInterval rhs = to_unit(d, gy);
        double uslack = 4.0 * d.eps;
        if (!(lhs.lo() - uslack <= rhs.hi() && rhs.lo() <= lhs.hi() + uslack)) ++unit_bad;
    }
    out.push_back({"conjugacy/semiconjugacy", semi_bad == 0, static_cast<double>(trials),
                   static_cast<double>(semi_bad), 8.0 * d.eps, "pi o g = f o pi"});
    out.push_back({"conjugacy/unit_conjugation", unit_bad == 0, static_cast<double>(trials),
                   static_cast<double>(unit_bad), 4.0 * d.eps,
                   "eval_unit o phi = phi o eval"});

    std::string j1 = descriptor_to_json(d);
    auto d2 = descriptor_from_json(j1, &ctx.cert);
    std::string j2 = descriptor_to_json(d2);
    out.push_back({"conjugacy/save_load_lossless", j1 == j2, 0, 0, 0,
                   "descriptor JSON round trip is byte-identical"});
}

void suite_attractor(SuiteContext& ctx, const std::string& name, std::vector<CheckResult>& out) {
    auto rep = attractor_location(ctx.descriptor);
    DInterval beta = ctx.field->beta_interval(80);
    bool entropy_ok = rep.entropy.intersects(beta.log());
    out.push_back({"attractor/invariant_region", rep.invariance_certified,
                   static_cast<double>(rep.renorm_depth),
                   static_cast<double>(rep.host_intervals.size()), 0,
                   "exactly certified invariance"});
    out.push_back({"attractor/entropy_log_beta", entropy_ok, rep.entropy.mid(),
                   beta.log().mid(), 1e-8, "core subshift entropy"});
    if (name == "sqrt2") {
        bool caseb = rep.renorm_depth == 1 && rep.host_intervals.size() == 2;
        out.push_back({"attractor/case_b_two_cycle", caseb,
                       static_cast<double>(rep.renorm_depth),
                       static_cast<double>(rep.host_intervals.size()), 0,
                       "k=1 with a two-interval cycle"});
    }
}

void suite_entropy(SuiteContext& ctx, std::vector<CheckResult>& out) {
    auto rep = entropy_check(ctx.field, ctx.orbit, 24);
    out.push_back({"entropy/matrix_and_laps", rep.consistent, rep.via_laps,
                   rep.via_matrix.mid(), rep.lap_tolerance,
                   "spectral route and lap-count route agree with log beta"});
}

void suite_oracle(SuiteContext& ctx, std::vector<CheckResult>& out) {
    auto tree = enumerate_tree(ctx.field, ctx.orbit, std::min(14, kDefaultTreeCap));
    CountEngine eng(ctx.field, ctx.orbit);
    std::mt19937 rng(2718);
    std::uniform_int_distribution<long> num(1, 99991);
    int mismatches = 0, trials = 100;
    for (int t = 0; t < trials; ++t) {
        Rat q(num(rng), 99991);
        q.canonicalize();
        FieldElem y = ctx.field->from_rat(q);
        auto col = eng.column(y, tree.depth(), false);
        for (int n = 0; n <= tree.depth(); ++n) {
            Int below(0);
            for (const auto& node : tree.levels[static_cast<std::size_t>(n)])
                if (node.point.compare(y) == Ordering::LT) ++below;
            if (col.N[static_cast<std::size_t>(n)] != below) ++mismatches;
        }
    }
    out.push_back({"oracle/count_below_vs_tree", mismatches == 0, static_cast<double>(trials),
                   static_cast<double>(mismatches), 0, "zero mismatches at depth <= 14"});
}

void suite_counts(SuiteContext& ctx, const std::string& name, std::vector<CheckResult>& out) {
    CountEngine eng(ctx.field, ctx.orbit);
    auto F = eng.level_counts(20);
    bool ok = true;
    std::string detail;
    if (name == "full") {
        for (int n = 2; n <= 20; ++n)
            if (F[static_cast<std::size_t>(n)] != pow_int(Int(2), static_cast<unsigned long>(n - 2)))
                ok = false;
        detail = "F(n) = 2^(n-2)";
    } else if (name == "golden") {
        ok = F[1] == 2 && F[2] == 4 && F[3] == 6;
        for (int n = 3; n <= 20; ++n)
            if (F[static_cast<std::size_t>(n)] !=
                F[static_cast<std::size_t>(n) - 1] + F[static_cast<std::size_t>(n) - 2])
                ok = false;
        double mu = (1.0 - std::sqrt(5.0)) / 2.0, phi = (1.0 + std::sqrt(5.0)) / 2.0;
        double k1 = (5.0 - std::sqrt(5.0)) / 5.0, k2 = (5.0 + std::sqrt(5.0)) / 5.0;
        for (int n = 1; n <= 20; ++n) {
            long cf = std::llround(k1 * std::pow(mu, n) + k2 * std::pow(phi, n));
            if (Int(cf) != F[static_cast<std::size_t>(n)]) ok = false;
        }
        detail = "Fibonacci recursion and closed form";
    } else {
        auto tree = enumerate_tree(ctx.field, ctx.orbit, 12);
        for (int n = 0; n <= 12; ++n)
            if (F[static_cast<std::size_t>(n)] !=
                Int(static_cast<long>(tree.levels[static_cast<std::size_t>(n)].size())))
                ok = false;
        detail = "recursion equals tree counts";
    }
    out.push_back({"counts/" + name, ok, 0, 0, 0, detail});
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& beta_name, const std::string& suite,
                                   int depth, double eps) {
    SuiteContext ctx = make_context(beta_name, depth, eps);
    std::vector<CheckResult> out;
    auto want = [&](const char* s) { return suite == "all" || suite == s; };
    if (want("counts")) suite_counts(ctx, beta_name, out);
    if (want("lengths")) suite_lengths(ctx, beta_name, out);
    if (want("quotients")) suite_quotients(ctx, out);
    if (want("hyperbolic")) suite_hyperbolic(ctx, out);
    if (want("absorption")) suite_absorption(ctx, out);
    if (want("spectral")) suite_spectral(ctx, out);
    if (want("growth")) suite_growth(ctx, out);
    if (want("conjugacy")) suite_conjugacy(ctx, out);
    if (want("attractor")) suite_attractor(ctx, beta_name, out);
    if (want("entropy")) suite_entropy(ctx, out);
    if (want("oracle")) suite_oracle(ctx, out);
    return out;
}

}  // namespace tentsurgery
