#include "tentsurgery/mass.hpp"

#include <algorithm>
#include <complex>

namespace tentsurgery {

namespace {

using FPoly = std::vector<FieldElem>;  // ascending coefficients over Q(beta)

FPoly promote(const Poly& p, const NumberField::Ptr& field) {
    FPoly out;
    out.reserve(static_cast<std::size_t>(p.degree() + 1));
    for (int k = 0; k <= p.degree(); ++k) out.push_back(field->from_rat(p.coeff(static_cast<std::size_t>(k))));
    return out;
}

void ftrim(FPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

FieldElem feval(const FPoly& p, const FieldElem& x) {
    FieldElem acc = x.field()->zero();
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// a = q*b + r over Q(beta)[u].
std::pair<FPoly, FPoly> fdivmod(FPoly a, const FPoly& b) {
    ftrim(a);
    FPoly bb = b;
    ftrim(bb);
    if (bb.empty()) throw std::domain_error("fpoly division by zero");
    FieldElem lead_inv = bb.back().inverse();
    if (a.size() < bb.size()) return {FPoly{}, a};
    FPoly q(a.size() - bb.size() + 1, bb.back().field()->zero());
    while (a.size() >= bb.size()) {
        FieldElem c = a.back() * lead_inv;
        std::size_t shift = a.size() - bb.size();
        q[shift] = c;
        for (std::size_t i = 0; i < bb.size(); ++i)
            a[shift + i] = a[shift + i] - c * bb[i];
        a.pop_back();
        while (!a.empty() && a.back().is_zero()) a.pop_back();
        if (a.empty()) break;
    }
    return {q, a};
}

FPoly fsub_scaled(const FPoly& a, const FieldElem& k, const FPoly& b) {
    FPoly r = a;
    if (r.size() < b.size()) r.resize(b.size(), k.field()->zero());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] - k * b[i];
    ftrim(r);
    return r;
}

std::vector<std::complex<double>> durand_kerner(const std::vector<double>& coeffs) {
    int d = static_cast<int>(coeffs.size()) - 1;
    std::vector<std::complex<double>> z(static_cast<std::size_t>(d));
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (int i = 0; i < d; ++i) {
        acc *= seed;
        z[static_cast<std::size_t>(i)] = acc;
    }
    auto eval = [&](std::complex<double> x) {
        std::complex<double> v(0.0, 0.0);
        for (int k = d; k >= 0; --k) v = v * x + coeffs[static_cast<std::size_t>(k)];
        return v;
    };
    double lead = coeffs[static_cast<std::size_t>(d)];
    for (int it = 0; it < 400; ++it) {
        double moved = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> den(lead, 0.0);
            for (int j = 0; j < d; ++j)
                if (j != i) den *= (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
            if (std::abs(den) < 1e-300) continue;
            std::complex<double> delta = eval(z[static_cast<std::size_t>(i)]) / den;
            z[static_cast<std::size_t>(i)] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

// Interval expansion of lead * prod (u - z_j); complex boxes.
std::vector<CBox> expand_from_roots(double lead, const std::vector<std::complex<double>>& roots) {
    std::vector<CBox> p{CBox(DInterval(lead), DInterval(0.0))};
    for (const auto& z : roots) {
        std::vector<CBox> np(p.size() + 1, CBox(DInterval(0.0), DInterval(0.0)));
        CBox mz(DInterval(-z.real()), DInterval(-z.imag()));
        for (std::size_t k = 0; k < p.size(); ++k) {
            np[k + 1] = np[k + 1] + p[k];
            np[k] = np[k] + p[k] * mz;
        }
        p = std::move(np);
    }
    return p;
}

double sup_abs(const CBox& b) {
    DInterval m = b.abs2();
    return next_up(std::sqrt(m.hi()));
}

}  // namespace

std::vector<Rat> ratfun_series(const Poly& num, const Poly& den, int nmax) {
    Rat q0 = den.coeff(0);
    if (q0 == 0) throw std::logic_error("generating function with den(0) = 0");
    std::vector<Rat> s(static_cast<std::size_t>(nmax) + 1, Rat(0));
    for (int n = 0; n <= nmax; ++n) {
        Rat v = num.coeff(static_cast<std::size_t>(n));
        for (int k = 1; k <= std::min(n, den.degree()); ++k)
            v -= den.coeff(static_cast<std::size_t>(k)) * s[static_cast<std::size_t>(n - k)];
        s[static_cast<std::size_t>(n)] = v / q0;
    }
    return s;
}

MassEngine::MassEngine(NumberField::Ptr field, CriticalOrbitData orbit, GrowthCertificate cert,
                       int exact_terms)
    : field_(std::move(field)),
      orbit_(std::move(orbit)),
      cert_(std::move(cert)),
      counts_(field_, orbit_),
      sched_(field_),
      n0_(exact_terms) {
    if (!cert_.rigorous)
        throw TailBoundUnavailable("no certified growth constant for this parameter");
    m_rig_ = next_up(rat_to_double(cert_.M_rig_upper));

    sorted_cuts_ = orbit_.points;
    sorted_cuts_.push_back(field_->zero());
    sorted_cuts_.push_back(field_->one());
    std::sort(sorted_cuts_.begin(), sorted_cuts_.end(),
              [](const FieldElem& a, const FieldElem& b) { return a.compare(b) == Ordering::LT; });
    sorted_cuts_.erase(
        std::unique(sorted_cuts_.begin(), sorted_cuts_.end(),
                    [](const FieldElem& a, const FieldElem& b) { return a.identical(b); }),
        sorted_cuts_.end());

    DInterval ib = field_->beta_inverse().to_interval(80);
    a_iv_.assign(static_cast<std::size_t>(n0_) + 1, DInterval(0.0));
    DInterval p(1.0);
    for (int n = 1; n <= n0_; ++n) {
        p *= ib;
        a_iv_[static_cast<std::size_t>(n)] =
            p * di_from_rat(make_rat(2, static_cast<long>(n) * (n + 1)));
    }
}

namespace {

RatFun hits_gf(std::pair<int, int> pattern) {
    auto [first, period] = pattern;
    if (first < 0) return RatFun();
    Poly num = Poly::monomial(static_cast<std::size_t>(first));
    if (period <= 0) return RatFun(num);
    Poly den = Poly::one() - Poly::monomial(static_cast<std::size_t>(period));
    return RatFun(num, den);
}

Poly poly_divexact(const Poly& a, const Poly& b) {
    auto [q, r] = Poly::divmod(a, b);
    if (!r.is_zero()) throw std::logic_error("inexact polynomial division");
    return q;
}

Poly poly_lcm(const Poly& a, const Poly& b) {
    if (a == b) return a;
    Poly g = Poly::gcd(a, b);
    return a * poly_divexact(b, g);
}

constexpr int kJointSolveCap = 24;

}  // namespace

// Chains back-substitute over a shared raw denominator; only genuine cycles
// in the threshold graph are solved jointly, and those stay small (the
// critical orbit, the fixed point at 0). Long foreign cycles are rejected so
// callers fall through to the cylinder route.
const MassEngine::NodeGF& MassEngine::node_gf(int id) {
    auto hit = gf_cache_.find(id);
    if (hit != gf_cache_.end()) return hit->second;

    int c1 = counts_.register_threshold(tent_apply(field_->half()));
    counts_.S(id, 0);  // materialize level 0

    // Uncached dependency closure.
    std::vector<int> closure;
    std::unordered_map<int, char> state;  // 1 = pending, 2 = resolved this call
    std::vector<int> stack{id};
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        if (gf_cache_.count(n) || state.count(n)) continue;
        state.emplace(n, 1);
        closure.push_back(n);
        stack.push_back(counts_.next_of(n));
        if (!counts_.le_of(n)) stack.push_back(c1);
    }

    auto e_num_over = [&](int n, const Poly& den) -> Poly {
        auto [first, period] = counts_.hit_pattern(n);
        if (first < 0) return Poly();
        Poly num = Poly::monomial(static_cast<std::size_t>(first));
        if (period > 0)
            num = num * poly_divexact(den, Poly::one() - Poly::monomial(static_cast<std::size_t>(period)));
        else
            num = num * den;
        return num;
    };
    auto peel_one = [&](int n) {
        int nx = counts_.next_of(n);
        Rat s0(counts_.S(n, 0));
        NodeGF out;
        if (counts_.le_of(n)) {
            const NodeGF& p = gf_cache_.at(nx);
            out.den = p.den;
            out.num = Poly::constant(s0) * out.den + p.num.shifted(1);
        } else {
            const NodeGF& p = gf_cache_.at(nx);
            const NodeGF& c = gf_cache_.at(c1);
            Poly den = poly_lcm(p.den, c.den);
            auto need_sieve = [&](int node) {
                auto [first, period] = counts_.hit_pattern(node);
                return first >= 0 && period > 0;
            };
            if (need_sieve(nx) || need_sieve(c1))
                den = poly_lcm(den, Poly::one() -
                                        Poly::monomial(static_cast<std::size_t>(orbit_.period)));
            Poly pn = p.num * poly_divexact(den, p.den);
            Poly cn = c.num * poly_divexact(den, c.den);
            Poly body = cn * Rat(2) - pn + e_num_over(nx, den) - e_num_over(c1, den);
            out.den = den;
            out.num = Poly::constant(s0) * den + body.shifted(1);
        }
        gf_cache_.emplace(n, std::move(out));
    };

    // Tarjan SCC over the closure; emission order resolves dependencies first.
    std::unordered_map<int, int> idx, low;
    std::unordered_map<int, bool> on_stack;
    std::vector<int> scc_stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;
    auto deps_of = [&](int n) {
        std::vector<int> d{counts_.next_of(n)};
        if (!counts_.le_of(n)) d.push_back(c1);
        return d;
    };
    struct Frame {
        int node;
        std::size_t dep_i;
    };
    for (int root : closure) {
        if (idx.count(root)) continue;
        std::vector<Frame> dfs{{root, 0}};
        idx[root] = low[root] = counter++;
        scc_stack.push_back(root);
        on_stack[root] = true;
        while (!dfs.empty()) {
            Frame& fr = dfs.back();
            auto deps = deps_of(fr.node);
            bool descended = false;
            while (fr.dep_i < deps.size()) {
                int d = deps[fr.dep_i++];
                if (!state.count(d)) continue;  // outside the closure (cached)
                if (!idx.count(d)) {
                    idx[d] = low[d] = counter++;
                    scc_stack.push_back(d);
                    on_stack[d] = true;
                    dfs.push_back({d, 0});
                    descended = true;
                    break;
                }
                if (on_stack[d]) low[fr.node] = std::min(low[fr.node], idx[d]);
            }
            if (descended) continue;
            if (low[fr.node] == idx[fr.node]) {
                std::vector<int> comp;
                for (;;) {
                    int w = scc_stack.back();
                    scc_stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                    if (w == fr.node) break;
                }
                sccs.push_back(std::move(comp));
            }
            int child = fr.node;
            dfs.pop_back();
            if (!dfs.empty()) low[dfs.back().node] = std::min(low[dfs.back().node], low[child]);
        }
    }

    auto joint_solve = [&](const std::vector<int>& cyc) {
        if (static_cast<int>(cyc.size()) > kJointSolveCap)
            throw CapExceeded("threshold cycle too large for the symbolic solve");
        std::unordered_map<int, int> pos;
        for (std::size_t i = 0; i < cyc.size(); ++i) pos.emplace(cyc[i], static_cast<int>(i));
        int k = static_cast<int>(cyc.size());
        RatFun u = RatFun(Poly::monomial(1));
        std::vector<std::vector<RatFun>> M(static_cast<std::size_t>(k),
                                           std::vector<RatFun>(static_cast<std::size_t>(k)));
        std::vector<RatFun> rhs(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    RatFun::constant(Rat(i == j ? 1 : 0));
        for (int i = 0; i < k; ++i) {
            int n = cyc[static_cast<std::size_t>(i)];
            RatFun r = RatFun::constant(Rat(counts_.S(n, 0)));
            auto add_dep = [&](int dep, long coef) {
                RatFun term = u * RatFun::constant(Rat(coef));
                auto it = pos.find(dep);
                if (it != pos.end()) {
                    auto& cell = M[static_cast<std::size_t>(i)][static_cast<std::size_t>(it->second)];
                    cell = cell - term;
                } else {
                    const NodeGF& g = gf_cache_.at(dep);
                    r = r + term * RatFun(g.num, g.den);
                }
            };
            if (counts_.le_of(n)) {
                add_dep(counts_.next_of(n), 1);
            } else {
                add_dep(counts_.next_of(n), -1);
                add_dep(c1, 2);
                RatFun ecorr = hits_gf(counts_.hit_pattern(counts_.next_of(n))) -
                               hits_gf(counts_.hit_pattern(c1));
                r = r + u * ecorr;
            }
            rhs[static_cast<std::size_t>(i)] = r;
        }
        for (int col = 0; col < k; ++col) {
            int piv = -1;
            for (int r = col; r < k; ++r)
                if (!M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) throw std::logic_error("singular counting system");
            std::swap(M[static_cast<std::size_t>(piv)], M[static_cast<std::size_t>(col)]);
            std::swap(rhs[static_cast<std::size_t>(piv)], rhs[static_cast<std::size_t>(col)]);
            RatFun inv =
                RatFun::constant(Rat(1)) / M[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int j = col; j < k; ++j)
                M[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] =
                    M[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] * inv;
            rhs[static_cast<std::size_t>(col)] = rhs[static_cast<std::size_t>(col)] * inv;
            for (int r = 0; r < k; ++r) {
                if (r == col) continue;
                RatFun f = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
                if (f.is_zero()) continue;
                for (int j = col; j < k; ++j)
                    M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                        M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -
                        f * M[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
                rhs[static_cast<std::size_t>(r)] =
                    rhs[static_cast<std::size_t>(r)] - f * rhs[static_cast<std::size_t>(col)];
            }
        }
        for (int i = 0; i < k; ++i) {
            NodeGF g{rhs[static_cast<std::size_t>(i)].num(), rhs[static_cast<std::size_t>(i)].den()};
            gf_cache_.emplace(cyc[static_cast<std::size_t>(i)], std::move(g));
        }
    };

    for (const auto& comp : sccs) {
        bool self_loop = false;
        if (comp.size() == 1) {
            for (int d : deps_of(comp[0]))
                if (d == comp[0]) self_loop = true;
        }
        if (comp.size() == 1 && !self_loop)
            peel_one(comp[0]);
        else
            joint_solve(comp);
    }
    return gf_cache_.at(id);
}

RatFun MassEngine::count_gf(int id) {
    const NodeGF& g = node_gf(id);
    return RatFun(g.num, g.den);
}

MassEngine::NodeGF MassEngine::host_count_gf(int id, const FieldElem& y, bool inclusive) {
    const NodeGF& s = node_gf(id);
    Poly sieve = Poly::one() - Poly::monomial(static_cast<std::size_t>(orbit_.period));
    Poly num = s.num * sieve;
    Poly den = s.den;
    if (!inclusive) {
        // Subtract E_y * sieve over the shared denominator.
        auto [first, period] = counts_.hit_pattern(id);
        if (first >= 0) {
            Poly e = Poly::monomial(static_cast<std::size_t>(first));
            if (period > 0) {
                Poly pden = Poly::one() - Poly::monomial(static_cast<std::size_t>(period));
                den = poly_lcm(den, pden);
                num = num * poly_divexact(den, s.den);
                e = e * sieve * poly_divexact(den, pden);
            } else {
                e = e * sieve * den;
            }
            num = num - e;
        }
    }
    Poly sub;
    for (int i = 0; i < orbit_.size(); ++i) {
        Ordering ord = orbit_.points[static_cast<std::size_t>(i)].compare(y);
        bool counted = inclusive ? ord != Ordering::GT : ord == Ordering::LT;
        if (counted) sub = sub + Poly::monomial(static_cast<std::size_t>(orbit_.first_hit_from(i)));
    }
    num = num - sub * den;
    return NodeGF{std::move(num), std::move(den)};
}

MassEngine::TailSplit MassEngine::tail_beyond(const Poly& nx_num, const Poly& nx_den, int n0) {
    TailSplit out;
    auto crude = [&]() {
        out.crude = true;
        out.value = DInterval(0.0, next_up(m_rig_ * 2.0 / (n0 + 1)));
        return out;
    };

    FieldElem beta = field_->beta();
    FieldElem uplus = field_->beta_inverse();
    FieldElem uminus = -uplus;
    FPoly P = promote(nx_num, field_);
    FPoly Q = promote(nx_den, field_);
    ftrim(P);
    ftrim(Q);
    if (P.empty()) {
        out.value = DInterval(0.0);
        return out;
    }

    // (1 -+ beta u) factors as field polynomials.
    FPoly fac_plus{field_->one(), -beta};
    FPoly fac_minus{field_->one(), beta};

    for (int guard = 0; guard < 4 && feval(Q, uplus).is_zero() && feval(P, uplus).is_zero(); ++guard) {
        auto [qq, qr] = fdivmod(Q, fac_plus);
        auto [pq, pr] = fdivmod(P, fac_plus);
        if (!qr.empty() || !pr.empty()) return crude();
        Q = qq;
        P = pq;
    }
    for (int guard = 0; guard < 4 && feval(Q, uminus).is_zero() && feval(P, uminus).is_zero(); ++guard) {
        auto [qq, qr] = fdivmod(Q, fac_minus);
        auto [pq, pr] = fdivmod(P, fac_minus);
        if (!qr.empty() || !pr.empty()) return crude();
        Q = qq;
        P = pq;
    }

    bool has_plus = feval(Q, uplus).is_zero();
    bool has_minus = feval(Q, uminus).is_zero();
    FieldElem kplus = field_->zero(), kminus = field_->zero();
    FPoly Q2 = Q;
    if (has_plus) {
        auto [cof, rem] = fdivmod(Q, fac_plus);
        if (!rem.empty()) return crude();
        if (feval(cof, uplus).is_zero()) return crude();  // double dominant pole
        kplus = feval(P, uplus) * feval(cof, uplus).inverse();
        Q2 = cof;
    }
    if (has_minus) {
        auto [cof_m, rem_m] = fdivmod(Q, fac_minus);
        if (!rem_m.empty()) return crude();
        if (feval(cof_m, uminus).is_zero()) return crude();
        kminus = feval(P, uminus) * feval(cof_m, uminus).inverse();
        auto [q2b, rem2] = fdivmod(Q2, fac_minus);
        if (!rem2.empty()) return crude();
        Q2 = q2b;
    }

    // R = P~ / Q2 with the dominant parts peeled off.
    FPoly PR = P;
    if (has_plus) {
        auto [cof, rem] = fdivmod(Q, fac_plus);
        (void)rem;
        PR = fsub_scaled(PR, kplus, cof);
    }
    if (has_minus) {
        auto [cof, rem] = fdivmod(Q, fac_minus);
        (void)rem;
        PR = fsub_scaled(PR, kminus, cof);
    }
    if (has_plus) {
        auto [pq, pr] = fdivmod(PR, fac_plus);
        if (!pr.empty()) return crude();
        PR = pq;
    }
    if (has_minus) {
        auto [pq, pr] = fdivmod(PR, fac_minus);
        if (!pr.empty()) return crude();
        PR = pq;
    }
    ftrim(PR);

    DInterval tail(0.0);
    DInterval beta_iv = field_->beta_interval(80);
    DInterval inv_beta_iv = DInterval(1.0) / beta_iv;

    // Dominant telescopes.
    if (has_plus) {
        DInterval kp = kplus.to_interval(60);
        tail += kp * di_from_rat(make_rat(2, n0 + 1));
    }
    if (has_minus) {
        DInterval km = kminus.to_interval(60);
        // sum_{n>N} (-1)^n 2/(n(n+1)) = 2 (-1)^{N+1} int_0^1 x^N (1-x)/(1+x) dx,
        // and 1/(1+x) = 1/2 + (1-x)/4 + (1-x)^2/(4(1+x)) gives a tight bracket
        // through Beta integrals B(N,k) = int x^N (1-x)^k dx.
        long N = n0;
        Rat b1 = make_rat(1, (N + 1) * (N + 2));
        Rat b2 = b1 * make_rat(2, N + 3);
        Rat b3 = b2 * make_rat(3, N + 4);
        Rat base = b1 / 2 + b2 / 4;
        Rat jlo = base + b3 / 8, jhi = base + b3 / 4;
        DInterval j_iv(next_down(rat_to_double(jlo) * 2), next_up(rat_to_double(jhi) * 2));
        if (n0 % 2) tail += km * j_iv;       // (-1)^{N+1} = +1
        else tail += km * (-j_iv);
    }

    // Remainder part.
    if (!PR.empty()) {
        ftrim(Q2);
        if (Q2.size() <= 1) {
            // R is a polynomial: finitely many exact leftover terms.
            FieldElem qinv = Q2.empty() ? field_->one() : Q2[0].inverse();
            DInterval extra(0.0);
            DInterval ipow = inv_beta_iv.pow_nonneg(static_cast<unsigned>(n0 + 1));
            for (int n = n0 + 1; n < static_cast<int>(PR.size()); ++n) {
                DInterval rn = (PR[static_cast<std::size_t>(n)] * qinv).to_interval(60);
                extra += rn * ipow * di_from_rat(make_rat(2, static_cast<long>(n) * (n + 1)));
                ipow *= inv_beta_iv;
            }
            tail += extra;
        } else {
            // Certify a root-free disk for Q2, then a Cauchy bound for R.
            std::vector<DInterval> qiv;
            std::vector<double> qmid;
            for (const auto& cfe : Q2) {
                DInterval iv = cfe.to_interval(60);
                qiv.push_back(iv);
                qmid.push_back(iv.mid());
            }
            auto roots = durand_kerner(qmid);
            double minmod = 1e300;
            for (const auto& z : roots) minmod = std::min(minmod, std::abs(z));
            double ub = 1.0 / beta_iv.lo();  // > 1/beta
            bool certified = false;
            double tau = 0, tau2 = 0, qlow = 0;
            for (double shrink = 0.96; shrink > 0.5 && !certified; shrink *= 0.92) {
                tau = minmod * shrink;
                tau2 = 0.5 * (tau + ub);
                if (!(tau > tau2 && tau2 * beta_iv.lo() > 1.02)) continue;
                auto pbox = expand_from_roots(qmid.back(), roots);
                DInterval E_tau(0.0), E_tau2(0.0), tpow(1.0), tpow2(1.0);
                for (std::size_t kk = 0; kk < std::max(pbox.size(), qiv.size()); ++kk) {
                    DInterval qk = kk < qiv.size() ? qiv[kk] : DInterval(0.0);
                    CBox pk = kk < pbox.size() ? pbox[kk] : CBox(DInterval(0.0), DInterval(0.0));
                    CBox diff(qk - pk.re, -pk.im);
                    double mag = sup_abs(diff);
                    E_tau += DInterval(mag) * tpow;
                    E_tau2 += DInterval(mag) * tpow2;
                    tpow *= DInterval(tau);
                    tpow2 *= DInterval(tau2);
                }
                double lead = std::fabs(qmid.back());
                double pmin_tau = lead, pmin_tau2 = lead;
                bool ok = true;
                for (const auto& z : roots) {
                    double a1 = std::abs(z) - tau, a2 = std::abs(z) - tau2;
                    if (a1 <= 0 || a2 <= 0) {
                        ok = false;
                        break;
                    }
                    pmin_tau = next_down(pmin_tau * next_down(a1));
                    pmin_tau2 = next_down(pmin_tau2 * next_down(a2));
                }
                if (!ok) continue;
                if (E_tau.hi() < pmin_tau && E_tau2.hi() < pmin_tau2) {
                    certified = true;
                    qlow = next_down(pmin_tau2 - E_tau2.hi());
                }
            }
            if (!certified) return crude();
            DInterval Mnum(0.0), tpow(1.0);
            for (const auto& cfe : PR) {
                Mnum += DInterval(cfe.to_interval(60).mag()) * tpow;
                tpow *= DInterval(tau2);
            }
            double Mtau = next_up(Mnum.hi() / qlow);
            double qratio = next_up(1.0 / (beta_iv.lo() * tau2));
            if (qratio >= 1.0) return crude();
            double geom = std::pow(qratio, n0 + 1) / (1.0 - qratio);
            double mag = next_up(Mtau * 2.0 / ((n0 + 1.0) * (n0 + 2.0)) * next_up(geom) * 1.0000001);
            tail += DInterval(-mag, mag);
        }
    }

    out.value = tail;
    return out;
}

DInterval MassEngine::series_mass(const std::vector<Int>& nx_exact, const NodeGF& nx) {
    // Cross-check the generating function against the recursion counts.
    auto series = ratfun_series(nx.num, nx.den, std::min(8, n0_));
    for (int n = 0; n <= std::min(8, n0_); ++n)
        if (series[static_cast<std::size_t>(n)] != Rat(nx_exact[static_cast<std::size_t>(n)]))
            throw std::logic_error("count generating function disagrees with recursion");

    DInterval partial(0.0);
    for (int n = 1; n <= n0_; ++n) {
        const Int& cnt = nx_exact[static_cast<std::size_t>(n)];
        if (cnt == 0) continue;
        partial += di_from_rat(Rat(cnt)) * a_iv_[static_cast<std::size_t>(n)];
    }
    return partial + tail_beyond(nx.num, nx.den, n0_).value;
}

DInterval MassEngine::mass(const FieldElem& y, bool inclusive) {
    int id = counts_.register_threshold(y, 512);
    long long key = 2LL * id + (inclusive ? 1 : 0);
    auto hit = mass_cache_.find(key);
    if (hit != mass_cache_.end()) return hit->second;

    auto col = counts_.column(y, n0_, inclusive);
    int units = 0;
    for (int i = 0; i < orbit_.size(); ++i) {
        Ordering ord = orbit_.points[static_cast<std::size_t>(i)].compare(y);
        if (inclusive ? ord != Ordering::GT : ord == Ordering::LT) ++units;
    }
    NodeGF nx = host_count_gf(id, y, inclusive);
    DInterval result = DInterval(static_cast<double>(units)) + series_mass(col.Nx, nx);
    mass_cache_.emplace(key, result);
    return result;
}

int MassEngine::cylinder_depth(double eps) const {
    double bl = field_->beta_interval(64).lo();
    double pw = 1.0;
    for (int N = 1; N <= 400; ++N) {
        pw /= bl;
        if (m_rig_ * pw * 2.0 / N <= eps) return N;
    }
    return 400;
}

MassEngine::CylinderBracket MassEngine::cylinder_bracket(const FieldElem& y, double eps) {
    CylinderBracket br;
    int N = cylinder_depth(eps);
    br.depth = N;
    std::vector<int> blocks;
    FieldElem cur = y;
    for (int j = 0; j < N; ++j) {
        int lo = 0, hi = static_cast<int>(sorted_cuts_.size()) - 1;
        // Exact point location among the cuts.
        for (const auto& q : sorted_cuts_)
            if (cur.identical(q)) {
                br.lo = y;
                br.hi = y;
                br.exact = true;
                return br;
            }
        while (hi - lo > 1) {
            int mid = (lo + hi) / 2;
            if (cur.compare(sorted_cuts_[static_cast<std::size_t>(mid)]) == Ordering::LT)
                hi = mid;
            else
                lo = mid;
        }
        blocks.push_back(lo);
        cur = tent_apply(cur);
    }
    FieldElem vlo = sorted_cuts_[static_cast<std::size_t>(blocks.back())];
    FieldElem vhi = sorted_cuts_[static_cast<std::size_t>(blocks.back()) + 1];
    FieldElem ib = field_->beta_inverse();
    FieldElem c = field_->half();
    for (int j = N - 2; j >= 0; --j) {
        bool left = sorted_cuts_[static_cast<std::size_t>(blocks[static_cast<std::size_t>(j)]) + 1]
                        .compare(c) != Ordering::GT;
        if (left) {
            vlo = vlo * ib;
            vhi = vhi * ib;
        } else {
            FieldElem nlo = field_->one() - vhi * ib;
            vhi = field_->one() - vlo * ib;
            vlo = nlo;
        }
    }
    br.lo = vlo;
    br.hi = vhi;
    DInterval pw = (DInterval(1.0) / field_->beta_interval(64)).pow_nonneg(static_cast<unsigned>(N));
    br.gap_bound = next_up(m_rig_ * pw.hi() * 2.0 / N);
    return br;
}

DInterval MassEngine::mass_any(const FieldElem& y, bool inclusive, double eps) {
    if (y.sign() < 0 || (y - Rat(1)).sign() > 0) throw DomainError("point outside [0, 1]");
    try {
        return mass(y, inclusive);
    } catch (const CapExceeded&) {
    }
    auto br = cylinder_bracket(y, eps);
    if (br.exact) return mass(y, inclusive);
    DInterval base = mass(br.lo, true);
    return base + DInterval(0.0, br.gap_bound);
}

DInterval MassEngine::total_length() { return mass(field_->one(), true); }

DInterval MassEngine::schedule_mass_total() {
    int id = counts_.register_threshold(field_->one());
    auto col = counts_.column(field_->one(), n0_, true);
    const NodeGF& s = node_gf(id);
    Poly sieve = Poly::one() - Poly::monomial(static_cast<std::size_t>(orbit_.period));
    NodeGF nfull{s.num * sieve, s.den};
    return series_mass(col.N, nfull);
}

std::optional<int> MassEngine::host_level(const FieldElem& y) {
    try {
        int id = counts_.register_threshold(y);
        auto [first, period] = counts_.hit_pattern(id);
        (void)period;
        if (first < 0) return std::nullopt;
        return first;
    } catch (const CapExceeded&) {
        return std::nullopt;
    }
}

DInterval MassEngine::insertion_length(const FieldElem& y) {
    auto lvl = host_level(y);
    if (!lvl) return DInterval(0.0);
    for (const auto& w : orbit_.points)
        if (w.identical(y)) return DInterval(1.0);
    if (*lvl == 0) return DInterval(1.0);
    return sched_.a_enclosure(*lvl);
}

}  // namespace tentsurgery
