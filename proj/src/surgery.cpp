#include "tentsurgery/surgery.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tentsurgery {

namespace {

// Shared monotone family in local coordinates:
//   m(t) = [beta D1 t + (D2 - beta D1)(3t^2 - 2t^3)] / D2, t in [0,1].
DInterval mono_local(const DInterval& beta, const DInterval& d1, const DInterval& d2, DInterval t) {
    DInterval corr = d2 - beta * d1;
    return (beta * d1 * t + corr * (DInterval(3.0) * t * t - DInterval(2.0) * t * t * t)) / d2;
}
DInterval mono_local_deriv_abs(const DInterval& beta, const DInterval& d1, const DInterval& d2,
                               DInterval t) {
    // d/dx of the absolute map: beta + 6 (D2 - beta D1)/D1 (t - t^2)
    DInterval corr = (d2 - beta * d1) / d1;
    return beta + DInterval(6.0) * corr * (t - t * t);
}

bool is_increasing(BranchKind k) { return k == BranchKind::H_INC || k == BranchKind::UNIT_G; }

double descriptor_lipschitz(const SurgeredMapDescriptor& d) {
    DInterval beta = d.field->beta_interval(70);
    double lip = 0.0;
    for (const auto& r : d.records) {
        const auto& tgt = d.records[static_cast<std::size_t>(r.target)];
        if (r.side == SideTag::Critical)
            lip = std::max(lip, crit_deriv_range(beta).abs().hi());
        else
            lip = std::max(lip, branch_deriv_range(r.branch, beta, r.length, tgt.length).abs().hi());
    }
    return lip;
}

}  // namespace

DInterval branch_deriv_range(BranchKind kind, const DInterval& beta, const DInterval& dom_len,
                             const DInterval& ran_len) {
    DInterval corr = (ran_len - beta * dom_len) / dom_len;
    DInterval g = beta + DInterval(6.0) * corr * DInterval(0.0, 0.25);
    return is_increasing(kind) ? g : -g;
}

DInterval crit_deriv_range(const DInterval& beta) {
    DInterval out = crit_local_deriv(beta, DInterval(0.0, 1.0 / 16));
    for (int k = 1; k < 16; ++k)
        out = out.hull(crit_local_deriv(beta, DInterval(k / 16.0, (k + 1) / 16.0)));
    return out;
}

DInterval cubic_local_eval(BranchKind kind, const DInterval& beta, const DInterval& dom_len,
                           const DInterval& ran_len, DInterval t) {
    DInterval m = mono_local(beta, dom_len, ran_len, t);
    return is_increasing(kind) ? m : DInterval(1.0) - m;
}

DInterval cubic_local_deriv(BranchKind kind, const DInterval& beta, const DInterval& dom_len,
                            const DInterval& ran_len, DInterval t) {
    DInterval g = mono_local_deriv_abs(beta, dom_len, ran_len, t);
    return is_increasing(kind) ? g : -g;
}

DInterval crit_local_eval(const DInterval& beta, DInterval t) {
    if (t.hi() <= 0.5) {
        DInterval a = DInterval(-16.0) + DInterval(4.0) * beta;
        DInterval b = DInterval(12.0) - DInterval(4.0) * beta;
        return a * t * t * t + b * t * t + beta * t;
    }
    if (t.lo() >= 0.5) {
        DInterval s = t - DInterval(0.5);
        DInterval a = DInterval(16.0) - DInterval(4.0) * beta;
        DInterval b = DInterval(2.0) * beta - DInterval(12.0);
        return a * s * s * s + b * s * s + DInterval(1.0);
    }
    DInterval left = crit_local_eval(beta, DInterval(t.lo(), 0.5));
    DInterval right = crit_local_eval(beta, DInterval(0.5, t.hi()));
    return left.hull(right);
}

DInterval crit_local_deriv(const DInterval& beta, DInterval t) {
    if (t.hi() <= 0.5) {
        DInterval a = DInterval(-16.0) + DInterval(4.0) * beta;
        DInterval b = DInterval(12.0) - DInterval(4.0) * beta;
        return DInterval(3.0) * a * t * t + DInterval(2.0) * b * t + beta;
    }
    if (t.lo() >= 0.5) {
        DInterval s = t - DInterval(0.5);
        DInterval a = DInterval(16.0) - DInterval(4.0) * beta;
        DInterval b = DInterval(2.0) * beta - DInterval(12.0);
        return DInterval(3.0) * a * s * s + DInterval(2.0) * b * s;
    }
    DInterval left = crit_local_deriv(beta, DInterval(t.lo(), 0.5));
    DInterval right = crit_local_deriv(beta, DInterval(0.5, t.hi()));
    return left.hull(right);
}

DInterval cubic_eval(const CubicBranch& b, DInterval x) {
    DInterval t = (x - b.u1) / b.dom_len();
    switch (b.kind) {
        case BranchKind::CRIT_F1:
        case BranchKind::CRIT_F2: {
            // Domain of F1 is [p0, p0+1/2], of F2 [p0+1/2, q0]; both have the
            // unit-interval turning formula in J0 coordinates.
            DInterval tj = b.kind == BranchKind::CRIT_F1 ? t * DInterval(0.5)
                                                         : DInterval(0.5) + t * DInterval(0.5);
            return b.u2 + crit_local_eval(b.beta, tj) * (b.v2 - b.u2);
        }
        default:
            return b.u2 + cubic_local_eval(b.kind, b.beta, b.dom_len(), b.ran_len(), t) * b.ran_len();
    }
}

DInterval cubic_deriv(const CubicBranch& b, DInterval x) {
    DInterval t = (x - b.u1) / b.dom_len();
    switch (b.kind) {
        case BranchKind::CRIT_F1:
        case BranchKind::CRIT_F2: {
            DInterval tj = b.kind == BranchKind::CRIT_F1 ? t * DInterval(0.5)
                                                         : DInterval(0.5) + t * DInterval(0.5);
            return crit_local_deriv(b.beta, tj) * (b.v2 - b.u2);  // unit J0 scale
        }
        default:
            return cubic_local_deriv(b.kind, b.beta, b.dom_len(), b.ran_len(), t);
    }
}

int SurgeredMapDescriptor::record_at_host(const FieldElem& x) const {
    int lo = 0, hi = static_cast<int>(records.size()) - 1;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        switch (records[static_cast<std::size_t>(mid)].host.compare(x)) {
            case Ordering::EQ: return mid;
            case Ordering::LT: lo = mid + 1; break;
            case Ordering::GT: hi = mid - 1; break;
        }
    }
    return -1;
}

const InsertedIntervalRecord& SurgeredMapDescriptor::critical() const {
    for (const auto& r : records)
        if (r.side == SideTag::Critical) return r;
    throw std::logic_error("descriptor lacks the critical record");
}

CubicBranch SurgeredMapDescriptor::branch_of(int idx) const {
    const auto& r = records[static_cast<std::size_t>(idx)];
    const auto& tgt = records[static_cast<std::size_t>(r.target)];
    CubicBranch b;
    b.kind = r.branch == BranchKind::CRIT_F1 ? BranchKind::CRIT_F1 : r.branch;
    b.u1 = r.iota_minus;
    b.v1 = r.iota_minus + r.length;
    b.u2 = tgt.iota_minus;
    b.v2 = tgt.iota_minus + tgt.length;
    b.beta = field->beta_interval(70);
    return b;
}

DInterval SurgeredMapDescriptor::iota_plus(int idx) const {
    const auto& r = records[static_cast<std::size_t>(idx)];
    return r.iota_minus + r.length;
}

SurgeredMapDescriptor layout(const NumberField::Ptr& field, const CriticalOrbitData& orbit,
                             int depth, double eps, const GrowthCertificate& cert) {
    if (depth > kDefaultTreeCap) throw CapExceeded("layout depth exceeds the tree cap");
    SurgeredMapDescriptor d;
    d.field = field;
    d.orbit = orbit;
    d.depth = depth;
    d.eps = eps;
    d.engine = std::make_shared<MassEngine>(field, orbit, cert);

    FieldElem c = field->half();
    auto symbol_of = [&](const FieldElem& x) {
        switch (x.compare(c)) {
            case Ordering::LT: return Symbol::Zero;
            case Ordering::EQ: return Symbol::Star;
            default: return Symbol::One;
        }
    };

    // Orbit records always exist; the word of c_i runs along its forward orbit.
    for (int i = 0; i < orbit.size(); ++i) {
        InsertedIntervalRecord r;
        r.host = orbit.points[static_cast<std::size_t>(i)];
        r.level = orbit.first_hit_from(i);
        FieldElem y = r.host;
        for (int k = 0;; ++k) {
            r.word.symbols.push_back(symbol_of(y));
            if (k == r.level) break;
            y = tent_apply(y);
        }
        r.side = i == 0 ? SideTag::Critical : SideTag::Orbit;
        r.orbit_index = i;
        r.length_exact = field->one();
        r.length = DInterval(1.0);
        d.records.push_back(std::move(r));
    }

    if (depth >= 1) {
        LengthSchedule sched(field);
        auto tree = enumerate_tree(field, orbit, depth);
        for (int n = 1; n <= depth; ++n) {
            for (const auto& node : tree.levels[static_cast<std::size_t>(n)]) {
                if (node.on_orbit) continue;
                InsertedIntervalRecord r;
                r.host = node.point;
                r.level = n;
                r.word = node.word;
                r.side = node.point.compare(c) == Ordering::LT ? SideTag::L : SideTag::R;
                r.length_exact = sched.a_exact(n);
                r.length = sched.a_enclosure(n);
                r.branch = r.side == SideTag::L ? BranchKind::H_INC : BranchKind::R_DEC;
                d.records.push_back(std::move(r));
            }
        }
    }

    std::sort(d.records.begin(), d.records.end(),
              [](const InsertedIntervalRecord& a, const InsertedIntervalRecord& b) {
                  return a.host.compare(b.host) == Ordering::LT;
              });

    for (auto& r : d.records) r.iota_minus = r.host.to_interval(70) + d.engine->mass(r.host, false);

    for (auto& r : d.records) {
        if (r.side == SideTag::Critical) {
            r.branch = BranchKind::CRIT_F1;
            r.target = d.record_at_host(orbit.points[1]);
        } else if (r.side == SideTag::Orbit) {
            r.branch = r.host.compare(c) == Ordering::LT ? BranchKind::UNIT_G : BranchKind::UNIT_W;
            r.target = d.record_at_host(orbit.point_after(r.orbit_index));
        } else {
            r.target = d.record_at_host(tent_apply(r.host));
        }
        if (r.target < 0) throw std::logic_error("image host is not materialized");
    }

    d.total_len = d.engine->total_length();
    d.right_end = DInterval(1.0) + d.total_len;
    // Schedule branches stay below beta + (3/2)(ratio - beta) with
    // ratio = beta(n+1)/(n-1) <= 3 beta; branches mapping onto the unit
    // orbit intervals have ratio 1/a(n) and dominate the bound.
    d.lipschitz = descriptor_lipschitz(d);
    return d;
}

DInterval embed(SurgeredMapDescriptor& d, const FieldElem& x, double eps) {
    if (eps <= 0) eps = d.eps * 0.5;
    return x.to_interval(70) + d.engine->mass_any(x, false, eps);
}

ClassifyResult classify(SurgeredMapDescriptor& d, double y, double eps) {
    if (y < -1e-12 || y > d.right_end.hi() + 1e-12) throw DomainError("point outside I_beta");
    ClassifyResult res;

    // Last record whose left edge certainly starts at or below y.
    int lo = 0, hi = static_cast<int>(d.records.size()) - 1, cand = 0;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        if (d.records[static_cast<std::size_t>(mid)].iota_minus.lo() <= y) {
            cand = mid;
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    const auto& r = d.records[static_cast<std::size_t>(cand)];
    DInterval left = r.iota_minus, right = d.iota_plus(cand);

    bool left_flush = r.host.is_zero();     // [s, t) at the host 0
    bool right_flush = (r.host - Rat(1)).is_zero();  // (s, t] at the host 1

    bool inside_left = left_flush ? y >= left.lo() : y > left.hi();
    bool inside_right = right_flush ? y <= right.hi() : y < right.lo();
    if (inside_left && inside_right) {
        res.kind = ClassifyResult::Inserted;
        res.record = cand;
        res.local = (DInterval(y) - left) / r.length;
        res.point = r.host.to_interval(70);
        return res;
    }
    // Endpoint within enclosure resolution: a Cantor endpoint.
    if (y >= left.lo() && y <= left.hi() && !left_flush) {
        res.kind = ClassifyResult::Cantor;
        res.point = r.host.to_interval(70);
        return res;
    }
    if (y >= right.lo() && y <= right.hi() && !right_flush) {
        res.kind = ClassifyResult::Cantor;
        res.point = r.host.to_interval(70);
        return res;
    }

    // y lies in a Cantor gap; set up the host bracket around it.
    FieldElem a, b;
    DInterval iota_a, iota_b;
    if (y < left.lo() && cand == 0) {
        a = d.field->zero();
        b = r.host;
        iota_a = DInterval(0.0);
        iota_b = left;
    } else {
        a = r.host;
        iota_a = right;
        if (cand + 1 < static_cast<int>(d.records.size())) {
            b = d.records[static_cast<std::size_t>(cand) + 1].host;
            iota_b = d.records[static_cast<std::size_t>(cand) + 1].iota_minus;
        } else {
            b = d.field->one();
            iota_b = d.right_end;
        }
    }

    res.kind = ClassifyResult::Cantor;
    int guard = 0;
    while ((iota_b.hi() - iota_a.lo()) > eps && guard++ < 200) {
        FieldElem midp = (a + b) * Rat(1, 2);
        DInterval im = embed(d, midp, eps * 0.25);           // iota^-(mid)
        DInterval len = d.engine->insertion_length(midp);
        DInterval ip = im + len;                             // iota^+(mid)
        if (ip.hi() <= y) {
            a = midp;
            iota_a = ip;
        } else if (im.lo() >= y) {
            b = midp;
            iota_b = im;
        } else if (len.hi() == 0.0) {
            // Pure enclosure ambiguity at a non-host probe: pick a side; the
            // bracket stays valid up to the enclosure width.
            if (y >= im.mid()) {
                a = midp;
                iota_a = ip;
            } else {
                b = midp;
                iota_b = im;
            }
        } else {
            // y is inside, or indistinguishable from, the insertion at midp;
            // deeper structure than eps resolves. Report the enclosure.
            break;
        }
    }
    DInterval ai = a.to_interval(70), bi = b.to_interval(70);
    res.point = DInterval(ai.lo(), bi.hi());
    res.resolution_ok = (iota_b.hi() - iota_a.lo()) <= eps;
    return res;
}

DInterval collapse(SurgeredMapDescriptor& d, double y, double eps) {
    auto res = classify(d, y, eps);
    return res.point;
}

DInterval eval_map(SurgeredMapDescriptor& d, double y, double eps) {
    double lip = std::max(1.0, d.lipschitz);
    auto res = classify(d, y, eps / lip);
    if (res.kind == ClassifyResult::Inserted) {
        const auto& r = d.records[static_cast<std::size_t>(res.record)];
        const auto& tgt = d.records[static_cast<std::size_t>(r.target)];
        DInterval beta = d.field->beta_interval(70);
        DInterval tloc;
        if (r.side == SideTag::Critical)
            tloc = crit_local_eval(beta, res.local);
        else
            tloc = cubic_local_eval(r.branch, beta, r.length, tgt.length, res.local);
        return tgt.iota_minus + tloc * tgt.length;
    }
    // Cantor point: iota(f(pi(y))) with the bracket pushed through the exact map.
    DInterval px = res.point;
    FieldElem xa = d.field->from_rat(Rat(px.lo()));
    FieldElem xb = d.field->from_rat(Rat(px.hi()));
    if (xa.sign() < 0) xa = d.field->zero();
    if ((xb - Rat(1)).sign() > 0) xb = d.field->one();
    auto img = tent_image(xa, xb);
    DInterval ia = embed(d, img.first, eps * 0.25);
    DInterval ib = embed(d, img.second, eps * 0.25) + d.engine->insertion_length(img.second);
    return ia.hull(ib);
}

EndpointRef endpoint_step(const SurgeredMapDescriptor& d, EndpointRef e) {
    const auto& r = d.records[static_cast<std::size_t>(e.record)];
    switch (r.branch) {
        case BranchKind::H_INC:
        case BranchKind::UNIT_G: return {r.target, e.end};
        case BranchKind::R_DEC:
        case BranchKind::UNIT_W: return {r.target, 1 - e.end};
        default: return {r.target, 0};  // turning branch: both ends to p1
    }
}

FieldElem endpoint_derivative_exact(const SurgeredMapDescriptor& d, EndpointRef e) {
    const auto& r = d.records[static_cast<std::size_t>(e.record)];
    const auto& tgt = d.records[static_cast<std::size_t>(r.target)];
    FieldElem beta = d.field->beta();
    FieldElem t = e.end == 0 ? d.field->zero() : d.field->one();
    if (r.side == SideTag::Critical) {
        // f1'(0) = beta, f2'(1/2-shift at the right end) = -beta
        return e.end == 0 ? beta : -beta;
    }
    // beta + 6 (D2 - beta D1)/D1 (t - t^2), exact in Q(beta)
    FieldElem corr = (tgt.length_exact - beta * r.length_exact) * r.length_exact.inverse();
    FieldElem g = beta + corr * Rat(6) * (t - t * t);
    bool inc = r.branch == BranchKind::H_INC || r.branch == BranchKind::UNIT_G;
    return inc ? g : -g;
}

DInterval endpoint_position(SurgeredMapDescriptor& d, EndpointRef e) {
    const auto& r = d.records[static_cast<std::size_t>(e.record)];
    int idx = e.record;
    return e.end == 0 ? r.iota_minus : d.iota_plus(idx);
}

ItineraryWord symbolic_step(const ItineraryWord& word) {
    if (word.size() <= 1) return word;  // orbit cycle: the label persists
    ItineraryWord out;
    out.symbols.assign(word.symbols.begin() + 1, word.symbols.end());
    return out;
}

int steps_to_cycle(const ItineraryWord& word) {
    ItineraryWord w = word;
    int steps = 0;
    while (w.size() > 1) {
        w = symbolic_step(w);
        ++steps;
    }
    return steps;
}

DInterval to_unit(const SurgeredMapDescriptor& d, DInterval y) { return y / d.right_end; }
DInterval from_unit(const SurgeredMapDescriptor& d, DInterval x) { return x * d.right_end; }

DInterval eval_unit(SurgeredMapDescriptor& d, double x, double eps) {
    DInterval y = from_unit(d, DInterval(x));
    DInterval gy = eval_map(d, y.mid(), eps * 0.5);
    return to_unit(d, gy);
}

namespace {

using nlohmann::json;

// std::stod throws on subnormals; strtod just returns them.
double parse_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

json field_elem_json(const FieldElem& x) {
    json coeffs = json::array();
    for (const auto& q : x.coeffs()) coeffs.push_back(rat_to_string(q));
    return coeffs;
}

FieldElem field_elem_from(const NumberField::Ptr& f, const json& j) {
    std::vector<Rat> coeffs;
    for (const auto& s : j) coeffs.push_back(rat_from_string(s.get<std::string>()));
    return f->from_coeffs(std::move(coeffs));
}

const char* side_name(SideTag s) {
    switch (s) {
        case SideTag::L: return "L";
        case SideTag::R: return "R";
        case SideTag::Orbit: return "orbit";
        default: return "critical";
    }
}

}  // namespace

std::string descriptor_to_json(const SurgeredMapDescriptor& d) {
    json j;
    j["schema"] = 1;
    json mp = json::array();
    for (const auto& z : d.field->min_poly()) mp.push_back(z.get_str());
    auto [ilo, ihi] = d.field->original_interval();
    j["beta"] = {{"min_poly", mp},
                 {"isolate", {rat_to_string(ilo), rat_to_string(ihi)}}};
    json orb;
    orb["t"] = d.orbit.preperiod;
    orb["m"] = d.orbit.period;
    json pts = json::array();
    for (const auto& p : d.orbit.points) pts.push_back(field_elem_json(p));
    orb["points"] = pts;
    j["orbit"] = orb;
    j["N"] = d.depth;
    j["eps"] = d.eps;
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    j["L"] = {fmt(d.total_len.lo()), fmt(d.total_len.hi())};
    json recs = json::array();
    for (const auto& r : d.records) {
        json rj;
        rj["word"] = r.word.to_string();
        rj["level"] = r.level;
        rj["side"] = r.side == SideTag::Orbit || r.side == SideTag::Critical
                         ? json{{"tag", side_name(r.side)}, {"index", r.orbit_index}}
                         : json{{"tag", side_name(r.side)}};
        rj["host"] = field_elem_json(r.host);
        rj["length"] = field_elem_json(r.length_exact);
        rj["iota_minus"] = {fmt(r.iota_minus.lo()), fmt(r.iota_minus.hi())};
        rj["target"] = r.target;
        recs.push_back(std::move(rj));
    }
    j["records"] = recs;
    return j.dump(1);
}

SurgeredMapDescriptor descriptor_from_json(const std::string& text, const GrowthCertificate* cert) {
    json j = json::parse(text);
    if (j.at("schema").get<int>() != 1) throw std::runtime_error("unknown descriptor schema");
    std::vector<Int> mp;
    for (const auto& s : j.at("beta").at("min_poly")) mp.emplace_back(s.get<std::string>());
    Rat ilo = rat_from_string(j.at("beta").at("isolate")[0].get<std::string>());
    Rat ihi = rat_from_string(j.at("beta").at("isolate")[1].get<std::string>());
    auto field = NumberField::make(mp, ilo, ihi);

    SurgeredMapDescriptor d;
    d.field = field;
    d.orbit.preperiod = j.at("orbit").at("t").get<int>();
    d.orbit.period = j.at("orbit").at("m").get<int>();
    for (const auto& pj : j.at("orbit").at("points")) d.orbit.points.push_back(field_elem_from(field, pj));
    d.depth = j.at("N").get<int>();
    d.eps = j.at("eps").get<double>();
    d.total_len = DInterval(parse_double(j.at("L")[0].get<std::string>()),
                            parse_double(j.at("L")[1].get<std::string>()));
    d.right_end = DInterval(1.0) + d.total_len;

    for (const auto& rj : j.at("records")) {
        InsertedIntervalRecord r;
        r.word = ItineraryWord::parse(rj.at("word").get<std::string>());
        r.level = rj.at("level").get<int>();
        std::string tag = rj.at("side").at("tag").get<std::string>();
        if (tag == "L") r.side = SideTag::L;
        else if (tag == "R") r.side = SideTag::R;
        else if (tag == "orbit") r.side = SideTag::Orbit;
        else r.side = SideTag::Critical;
        if (rj.at("side").contains("index")) r.orbit_index = rj.at("side").at("index").get<int>();
        r.host = field_elem_from(field, rj.at("host"));
        r.length_exact = field_elem_from(field, rj.at("length"));
        r.length = r.length_exact.to_interval(70);
        r.iota_minus = DInterval(parse_double(rj.at("iota_minus")[0].get<std::string>()),
                                 parse_double(rj.at("iota_minus")[1].get<std::string>()));
        r.target = rj.at("target").get<int>();
        if (r.side == SideTag::Critical) r.branch = BranchKind::CRIT_F1;
        else if (r.side == SideTag::Orbit)
            r.branch = r.host.compare(field->half()) == Ordering::LT ? BranchKind::UNIT_G
                                                                     : BranchKind::UNIT_W;
        else
            r.branch = r.side == SideTag::L ? BranchKind::H_INC : BranchKind::R_DEC;
        d.records.push_back(std::move(r));
    }

    GrowthCertificate gc;
    if (cert) {
        gc = *cert;
    } else {
        auto part = build_partition(field, d.orbit);
        auto tm = build_matrix(part, d.orbit);
        gc = growth_constant(field, tm, d.orbit, 20);
    }
    d.engine = std::make_shared<MassEngine>(field, d.orbit, gc);
    d.lipschitz = descriptor_lipschitz(d);
    return d;
}

void save_descriptor(const SurgeredMapDescriptor& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << descriptor_to_json(d);
}

SurgeredMapDescriptor load_descriptor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return descriptor_from_json(ss.str());
}

}  // namespace tentsurgery
