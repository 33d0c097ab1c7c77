#include "tentsurgery/markov.hpp"

#include <algorithm>
#include <sstream>

namespace tentsurgery {

MarkovPartition build_partition(const NumberField::Ptr& field, const CriticalOrbitData& orbit) {
    std::vector<FieldElem> cuts = orbit.points;
    cuts.push_back(field->zero());
    cuts.push_back(field->one());
    std::sort(cuts.begin(), cuts.end(),
              [](const FieldElem& a, const FieldElem& b) { return a.compare(b) == Ordering::LT; });
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](const FieldElem& a, const FieldElem& b) { return a.identical(b); }),
               cuts.end());
    if (cuts.size() < 2) throw NotMarkov("degenerate cut set");

    MarkovPartition part{field, cuts};
    auto is_cut = [&](const FieldElem& x) {
        for (const auto& q : cuts)
            if (q.identical(x)) return true;
        return false;
    };
    // Each block must sit on one side of c and map onto a union of blocks.
    FieldElem c = field->half();
    for (int i = 0; i + 1 < static_cast<int>(cuts.size()); ++i) {
        const FieldElem& a = cuts[static_cast<std::size_t>(i)];
        const FieldElem& b = cuts[static_cast<std::size_t>(i) + 1];
        if (a.compare(c) == Ordering::LT && b.compare(c) == Ordering::GT)
            throw NotMarkov("critical point interior to a block");
        if (!is_cut(tent_apply(a)) || !is_cut(tent_apply(b)))
            throw NotMarkov("block image endpoint is not a cut point");
    }
    return part;
}

TransitionMatrix build_matrix(const MarkovPartition& part, const CriticalOrbitData& orbit) {
    int s = part.block_count();
    TransitionMatrix tm;
    tm.B.assign(static_cast<std::size_t>(s), std::vector<Int>(static_cast<std::size_t>(s), Int(0)));
    auto cut_index = [&](const FieldElem& x) {
        for (std::size_t j = 0; j < part.cuts.size(); ++j)
            if (part.cuts[j].identical(x)) return static_cast<int>(j);
        throw NotMarkov("image endpoint missing from cut set");
    };
    for (int i = 0; i < s; ++i) {
        auto img = tent_image(part.cuts[static_cast<std::size_t>(i)],
                              part.cuts[static_cast<std::size_t>(i) + 1]);
        int lo = cut_index(img.first), hi = cut_index(img.second);
        for (int j = lo; j < hi; ++j) tm.B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
    }
    int ct = cut_index(orbit.periodic_point());
    tm.col_left = ct > 0 ? ct - 1 : -1;
    tm.col_right = ct < s ? ct : -1;

    tm.spectral_radius_estimate = spectral_radius(tm.B, 1e-10);

    // Double-precision Perron pair for reporting; normalized v^T w = 1.
    int iters = 256;
    std::vector<double> v(static_cast<std::size_t>(s), 1.0), w(static_cast<std::size_t>(s), 1.0);
    for (int it = 0; it < iters; ++it) {
        std::vector<double> nv(static_cast<std::size_t>(s), 0.0), nw(static_cast<std::size_t>(s), 0.0);
        double shift = 1.0;
        for (int i = 0; i < s; ++i) {
            nv[static_cast<std::size_t>(i)] = shift * v[static_cast<std::size_t>(i)];
            nw[static_cast<std::size_t>(i)] = shift * w[static_cast<std::size_t>(i)];
            for (int j = 0; j < s; ++j) {
                double bij = tm.B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get_d();
                nv[static_cast<std::size_t>(i)] += bij * v[static_cast<std::size_t>(j)];
                nw[static_cast<std::size_t>(j)] += bij * w[static_cast<std::size_t>(i)];
            }
        }
        double nrm = 0;
        for (double x : nv) nrm += x * x;
        nrm = std::sqrt(nrm);
        for (auto& x : nv) x /= nrm;
        double nrm2 = 0;
        for (double x : nw) nrm2 += x * x;
        nrm2 = std::sqrt(nrm2);
        for (auto& x : nw) x /= nrm2;
        v = nv;
        w = nw;
    }
    double dot = 0;
    for (int i = 0; i < s; ++i) dot += v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
    if (dot != 0)
        for (auto& x : w) x /= dot;
    tm.perron_right = v;
    tm.perron_left = w;
    return tm;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
    std::size_t n = a.size(), m = b[0].size(), k = b.size();
    IntMatrix r(n, std::vector<Int>(m, Int(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

IntMatrix mat_pow(const IntMatrix& a, int n) {
    std::size_t s = a.size();
    IntMatrix r(s, std::vector<Int>(s, Int(0)));
    for (std::size_t i = 0; i < s; ++i) r[i][i] = 1;
    IntMatrix base = a;
    while (n > 0) {
        if (n & 1) r = mat_mul(r, base);
        n >>= 1;
        if (n) base = mat_mul(base, base);
    }
    return r;
}

namespace {

DInterval sturm_largest_root(Poly p, double tol) {
    Poly g = Poly::gcd(p, p.derivative());
    if (g.degree() > 0) p = Poly::divmod(p, g).first;  // square-free part
    auto chain = sturm_chain(p);
    // Cauchy bound on root magnitudes.
    Rat bound(1);
    for (int i = 0; i < p.degree(); ++i) {
        Rat r = rat_abs(p.coeff(static_cast<std::size_t>(i)) / p.leading());
        if (r + 1 > bound) bound = r + 1;
    }
    Rat lo(0), hi = bound;
    if (sturm_count(chain, lo, hi) < 1) throw NonConvergence("no positive real root found");
    // Keep the invariant: largest root lies in (lo, hi].
    while (hi - lo > Rat(Int(1), Int(1) << 40)) {
        Rat mid = (lo + hi) / 2;
        if (sturm_count(chain, mid, hi) >= 1)
            lo = mid;
        else
            hi = mid;
    }
    (void)tol;
    return DInterval(next_down(rat_to_double(lo)), next_up(rat_to_double(hi)));
}

}  // namespace

DInterval spectral_radius(const IntMatrix& B, double tol, int iter_cap) {
    std::size_t s = B.size();
    // Collatz-Wielandt on B + I (primitive whenever B is irreducible, and the
    // +1 shift keeps the iterate strictly positive regardless).
    std::vector<Int> x(s, Int(1));
    Rat best_lo(0), best_hi(1);
    best_hi = Rat(static_cast<long>(4 * s + 4));
    for (int it = 0; it < iter_cap; ++it) {
        std::vector<Int> nx(s, Int(0));
        for (std::size_t i = 0; i < s; ++i) {
            nx[i] = x[i];  // +I
            for (std::size_t j = 0; j < s; ++j)
                if (B[i][j] != 0) nx[i] += B[i][j] * x[j];
        }
        Rat lo, hi;
        for (std::size_t i = 0; i < s; ++i) {
            Rat ratio = make_rat(nx[i], x[i]);
            if (i == 0 || ratio < lo) lo = ratio;
            if (i == 0 || ratio > hi) hi = ratio;
        }
        if (lo - 1 > best_lo) best_lo = lo - 1;
        if (hi - 1 < best_hi) best_hi = hi - 1;
        x = std::move(nx);
        if (best_hi - best_lo <= Rat(Int(1), Int(1) << 50) ||
            rat_to_double(best_hi - best_lo) <= tol * 0.5)
            return DInterval(next_down(rat_to_double(best_lo)), next_up(rat_to_double(best_hi)));
    }
    // Imprimitive or badly reducible: isolate the largest real root of the
    // characteristic polynomial instead.
    return sturm_largest_root(char_poly(B), tol);
}

Poly char_poly(const IntMatrix& A) {
    int s = static_cast<int>(A.size());
    // Faddeev-LeVerrier over exact rationals.
    std::vector<std::vector<Rat>> M(static_cast<std::size_t>(s),
                                    std::vector<Rat>(static_cast<std::size_t>(s), Rat(0)));
    std::vector<Rat> c(static_cast<std::size_t>(s) + 1, Rat(0));
    c[static_cast<std::size_t>(s)] = 1;
    std::vector<std::vector<Rat>> Ar(static_cast<std::size_t>(s),
                                     std::vector<Rat>(static_cast<std::size_t>(s)));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            Ar[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                Rat(A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    for (int k = 1; k <= s; ++k) {
        // M <- A (M + c_{s-k+1} I)
        std::vector<std::vector<Rat>> T = M;
        for (int i = 0; i < s; ++i) T[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(s - k + 1)];
        std::vector<std::vector<Rat>> NM(static_cast<std::size_t>(s),
                                         std::vector<Rat>(static_cast<std::size_t>(s), Rat(0)));
        for (int i = 0; i < s; ++i)
            for (int l = 0; l < s; ++l) {
                if (Ar[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] == 0) continue;
                for (int j = 0; j < s; ++j)
                    NM[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                        Ar[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                        T[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
            }
        M = std::move(NM);
        Rat tr(0);
        for (int i = 0; i < s; ++i) tr += M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        c[static_cast<std::size_t>(s - k)] = -tr / Rat(k);
    }
    return Poly(std::move(c));
}

bool min_poly_divides_char_poly(const NumberField::Ptr& field, const IntMatrix& B) {
    Poly cp = char_poly(B);
    Poly rem = Poly::divmod(cp, field->min_poly_rat()).second;
    return rem.is_zero();
}

namespace {

// Exact kernel vector of (B - beta I); empty when the kernel is not 1-dim.
std::vector<FieldElem> perron_kernel(const NumberField::Ptr& field, const IntMatrix& B) {
    int s = static_cast<int>(B.size());
    FieldElem beta = field->beta();
    std::vector<std::vector<FieldElem>> M(static_cast<std::size_t>(s),
                                          std::vector<FieldElem>(static_cast<std::size_t>(s)));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            FieldElem v = field->from_rat(Rat(B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
            if (i == j) v = v - beta;
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        }
    std::vector<int> pivot_col(static_cast<std::size_t>(s), -1);
    int row = 0;
    for (int col = 0; col < s && row < s; ++col) {
        int pr = -1;
        for (int r = row; r < s; ++r)
            if (!M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].is_zero()) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(M[static_cast<std::size_t>(pr)], M[static_cast<std::size_t>(row)]);
        FieldElem inv = M[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)].inverse();
        for (int j = col; j < s; ++j)
            M[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] =
                M[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] * inv;
        for (int r = 0; r < s; ++r) {
            if (r == row) continue;
            FieldElem f = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (f.is_zero()) continue;
            for (int j = col; j < s; ++j)
                M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                    M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -
                    f * M[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
        }
        pivot_col[static_cast<std::size_t>(row)] = col;
        ++row;
    }
    if (row != s - 1) return {};  // kernel dimension != 1
    std::vector<bool> is_pivot(static_cast<std::size_t>(s), false);
    for (int r = 0; r < row; ++r) is_pivot[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(r)])] = true;
    int free_col = -1;
    for (int j = 0; j < s; ++j)
        if (!is_pivot[static_cast<std::size_t>(j)]) free_col = j;
    std::vector<FieldElem> v(static_cast<std::size_t>(s), field->zero());
    v[static_cast<std::size_t>(free_col)] = field->one();
    for (int r = row - 1; r >= 0; --r) {
        int pc = pivot_col[static_cast<std::size_t>(r)];
        FieldElem acc = field->zero();
        for (int j = pc + 1; j < s; ++j)
            acc = acc + M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
        v[static_cast<std::size_t>(pc)] = -acc;
    }
    return v;
}

}  // namespace

GrowthCertificate growth_constant(const NumberField::Ptr& field, const TransitionMatrix& tm,
                                  const CriticalOrbitData& orbit, int n_max) {
    (void)orbit;
    if (n_max < 10) throw std::invalid_argument("n_max must be >= 10");
    GrowthCertificate cert;
    cert.scan_depth = n_max;

    auto [beta_lo, beta_hi] = field->isolate(96);
    (void)beta_hi;
    IntMatrix Bn = tm.B;
    Rat best(0);
    Rat bpow = beta_lo;
    for (int n = 1; n <= n_max; ++n) {
        Int colsum(0);
        std::size_t s = tm.B.size();
        for (std::size_t i = 0; i < s; ++i) {
            if (tm.col_left >= 0) colsum += Bn[i][static_cast<std::size_t>(tm.col_left)];
            if (tm.col_right >= 0) colsum += Bn[i][static_cast<std::size_t>(tm.col_right)];
        }
        Rat ratio = Rat(colsum) / bpow;  // beta lower bound -> ratio upper bound
        if (ratio > best) best = ratio;
        if (n < n_max) {
            Bn = mat_mul(Bn, tm.B);
            bpow *= beta_lo;
        }
    }
    cert.M_scan = next_up(rat_to_double(best * 2));

    auto v = perron_kernel(field, tm.B);
    if (!v.empty()) {
        bool pos = true;
        // Kernel vectors come with arbitrary sign; flip if needed.
        int sgn0 = 0;
        for (auto& vi : v) {
            int s = vi.sign();
            if (s != 0 && sgn0 == 0) sgn0 = s;
        }
        if (sgn0 < 0)
            for (auto& vi : v) vi = -vi;
        FieldElem sum = field->zero();
        FieldElem mn = v[0];
        for (const auto& vi : v) {
            if (vi.sign() <= 0) pos = false;
            sum = sum + vi;
            if (vi.compare(mn) == Ordering::LT) mn = vi;
        }
        // Verify B v = beta v exactly.
        FieldElem beta = field->beta();
        for (std::size_t i = 0; i < v.size() && pos; ++i) {
            FieldElem acc = field->zero();
            for (std::size_t j = 0; j < v.size(); ++j)
                if (tm.B[i][j] != 0) acc = acc + v[j] * Rat(tm.B[i][j]);
            if (!(acc - beta * v[i]).is_zero()) pos = false;
        }
        if (pos) {
            FieldElem m_rig = sum * (beta * mn).inverse();
            cert.rigorous = true;
            cert.M_rig_upper = m_rig.rat_bounds(48).second;
            cert.perron_exact = std::move(v);
        }
    }
    return cert;
}

std::string matrix_csv(const TransitionMatrix& tm) {
    std::ostringstream os;
    std::size_t s = tm.B.size();
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            if (j) os << ",";
            os << tm.B[i][j].get_str();
        }
        os << "\n";
    }
    return os.str();
}

std::string matrix_json(const TransitionMatrix& tm, const GrowthCertificate& cert) {
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"matrix\": [";
    std::size_t s = tm.B.size();
    for (std::size_t i = 0; i < s; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < s; ++j) os << (j ? ", " : "") << tm.B[i][j].get_str();
        os << "]";
    }
    os << "],\n  \"spectral_radius\": [" << tm.spectral_radius_estimate.lo() << ", "
       << tm.spectral_radius_estimate.hi() << "],\n  \"perron_right\": [";
    for (std::size_t i = 0; i < tm.perron_right.size(); ++i)
        os << (i ? ", " : "") << tm.perron_right[i];
    os << "],\n  \"perron_left\": [";
    for (std::size_t i = 0; i < tm.perron_left.size(); ++i) os << (i ? ", " : "") << tm.perron_left[i];
    os << "],\n  \"M_scan\": " << cert.M_scan << ",\n  \"M_rig\": "
       << (cert.rigorous ? rat_to_double(cert.M_rig_upper) : 0.0) << "\n}\n";
    return os.str();
}

}  // namespace tentsurgery
