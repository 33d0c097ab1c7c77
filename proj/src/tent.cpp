#include "tentsurgery/tent.hpp"

#include <unordered_map>

namespace tentsurgery {

namespace {

void check_unit_range(const FieldElem& x) {
    if (x.sign() < 0 || (x - Rat(1)).sign() > 0) throw DomainError("point outside [0, 1]");
}

FieldElem apply_slope(const FieldElem& slope, const FieldElem& x, const FieldElem& half) {
    if (x.compare(half) != Ordering::GT) return slope * x;
    return slope * (x.field()->one() - x);
}

}  // namespace

FieldElem tent_apply(const FieldElem& x) {
    check_unit_range(x);
    auto field = x.field();
    return apply_slope(field->beta(), x, field->half());
}

std::pair<FieldElem, FieldElem> tent_image(const FieldElem& lo, const FieldElem& hi) {
    auto field = lo.field();
    FieldElem c = field->half();
    FieldElem flo = tent_apply(lo), fhi = tent_apply(hi);
    if (hi.compare(c) != Ordering::GT) return {flo, fhi};
    if (lo.compare(c) != Ordering::LT) return {fhi, flo};
    FieldElem bottom = (flo.compare(fhi) == Ordering::GT) ? fhi : flo;
    return {bottom, field->beta() * field->half()};
}

OrbitResult critical_orbit(const NumberField::Ptr& field, int max_iter) {
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    std::vector<FieldElem> pts;
    std::unordered_map<FieldElem, int, FieldElemHash, FieldElemEq> seen;
    FieldElem x = field->half();
    for (int i = 0; i <= max_iter; ++i) {
        auto it = seen.find(x);
        if (it != seen.end()) {
            CriticalOrbitData orb;
            orb.preperiod = it->second;
            orb.period = i - it->second;
            pts.resize(static_cast<std::size_t>(i));
            orb.points = std::move(pts);
            return orb;
        }
        seen.emplace(x, i);
        pts.push_back(x);
        x = tent_apply(x);
    }
    return NotFinite{max_iter};
}

ItineraryWord itinerary(const FieldElem& x, int n) {
    if (n < 1) throw std::invalid_argument("itinerary length must be >= 1");
    check_unit_range(x);
    auto field = x.field();
    FieldElem c = field->half();
    ItineraryWord w;
    w.symbols.reserve(static_cast<std::size_t>(n));
    FieldElem y = x;
    for (int i = 0; i < n; ++i) {
        switch (y.compare(c)) {
            case Ordering::LT: w.symbols.push_back(Symbol::Zero); break;
            case Ordering::EQ: w.symbols.push_back(Symbol::Star); break;
            case Ordering::GT: w.symbols.push_back(Symbol::One); break;
        }
        if (i + 1 < n) y = tent_apply(y);
    }
    return w;
}

Ordering parity_lex_compare(const ItineraryWord& u, const ItineraryWord& v) {
    if (u.size() != v.size()) throw LengthMismatch("itinerary words of different length");
    int ones = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        Symbol a = u.symbols[i], b = v.symbols[i];
        if (a != b) {
            bool even = (ones % 2) == 0;
            bool lt = static_cast<int>(a) < static_cast<int>(b);  // Zero < Star < One
            if (!even) lt = !lt;
            return lt ? Ordering::LT : Ordering::GT;
        }
        if (a == Symbol::One) ++ones;
    }
    return Ordering::EQ;
}

int renorm_depth(const NumberField::Ptr& field) {
    FieldElem gamma = field->beta();
    FieldElem two = field->from_rat(Rat(2));
    int k = 0;
    while ((gamma * gamma).compare(two) != Ordering::GT) {
        gamma = gamma * gamma;
        ++k;
        if (k > 64) throw PrecisionExhausted("renorm_depth runaway (beta <= 1?)");
    }
    return k;
}

std::pair<FieldElem, FieldElem> core_interval(const NumberField::Ptr& field) {
    FieldElem beta = field->beta();
    FieldElem hi = beta * field->half();
    FieldElem lo = beta - hi * beta;  // beta(1 - beta/2)
    return {lo, hi};
}

namespace {

// Restrictive interval in the [0,1] coordinates of a tent map whose slope is
// the given field element; recursion uses the exact affine conjugacy of
// f^2 | J onto the slope^2 tent map.
std::pair<FieldElem, FieldElem> restrictive_rec(const FieldElem& slope, int k) {
    auto field = slope.field();
    FieldElem one = field->one();
    FieldElem p = slope * (one + slope).inverse();  // interior fixed point
    FieldElem lo = one - p;
    if (k == 1) return {lo, p};
    auto inner = restrictive_rec(slope * slope, k - 1);
    // psi(x) = (p - x) / (2p - 1) maps [1-p, p] onto [0, 1], reversing.
    FieldElem span = p + p - one;  // 2p - 1 > 0
    FieldElem a = p - span * inner.second;
    FieldElem b = p - span * inner.first;
    return {a, b};
}

}  // namespace

std::pair<FieldElem, FieldElem> restrictive_interval(const NumberField::Ptr& field, int k) {
    if (k < 1) throw NotRenormalizable("renormalization level must be >= 1");
    int depth = renorm_depth(field);
    if (k > depth) throw NotRenormalizable("beta is only " + std::to_string(depth) +
                                           " times renormalizable");
    auto J = restrictive_rec(field->beta(), k);
    // Certify f^(2^k)(J) within J by exact interval image propagation.
    FieldElem lo = J.first, hi = J.second;
    long steps = 1L << k;
    for (long i = 0; i < steps; ++i) {
        auto im = tent_image(lo, hi);
        lo = im.first;
        hi = im.second;
    }
    if (lo.compare(J.first) == Ordering::LT || hi.compare(J.second) == Ordering::GT)
        throw NotRenormalizable("restrictive interval certification failed");
    return J;
}

}  // namespace tentsurgery
