#include "tentsurgery/number_field.hpp"

#include <sstream>

namespace tentsurgery {

namespace {

// Exact rational interval Horner: encloses p([lo, hi]).
std::pair<Rat, Rat> poly_range(const Poly& p, const Rat& lo, const Rat& hi) {
    Rat alo(0), ahi(0);
    const auto& cs = p.coeffs();
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
        // [alo, ahi] * [lo, hi] + c
        Rat p1 = alo * lo, p2 = alo * hi, p3 = ahi * lo, p4 = ahi * hi;
        Rat nlo = std::min(std::min(p1, p2), std::min(p3, p4));
        Rat nhi = std::max(std::max(p1, p2), std::max(p3, p4));
        alo = nlo + *it;
        ahi = nhi + *it;
    }
    return {alo, ahi};
}

Poly poly_from_int_coeffs(const std::vector<Int>& v) {
    std::vector<Rat> cs;
    cs.reserve(v.size());
    for (const auto& z : v) cs.emplace_back(z);
    return Poly(std::move(cs));
}

}  // namespace

std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain;
    chain.push_back(p);
    chain.push_back(p.derivative());
    while (!chain.back().is_zero() && chain.back().degree() > 0) {
        const Poly& a = chain[chain.size() - 2];
        const Poly& b = chain.back();
        Poly r = Poly::divmod(a, b).second;
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    return chain;
}

int sturm_variations(const std::vector<Poly>& chain, const Rat& x) {
    int var = 0, prev = 0;
    for (const auto& p : chain) {
        int s = sign_of(p.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

int sturm_count(const std::vector<Poly>& chain, const Rat& a, const Rat& b) {
    return sturm_variations(chain, a) - sturm_variations(chain, b);
}

NumberField::NumberField(std::vector<Int> mp, Rat lo, Rat hi, unsigned max_bits)
    : min_poly_int_(std::move(mp)),
      min_poly_(poly_from_int_coeffs(min_poly_int_)),
      max_bits_(max_bits),
      orig_lo_(lo),
      orig_hi_(hi),
      lo_(std::move(lo)),
      hi_(std::move(hi)) {}

NumberField::Ptr NumberField::make(std::vector<Int> min_poly, Rat lo, Rat hi, unsigned max_bits) {
    while (!min_poly.empty() && min_poly.back() == 0) min_poly.pop_back();
    if (min_poly.size() < 2) throw std::invalid_argument("min_poly must have degree >= 1");
    if (!(lo < hi)) throw std::invalid_argument("empty isolating interval");

    Poly p = poly_from_int_coeffs(min_poly);
    Poly g = Poly::gcd(p, p.derivative());
    if (g.degree() > 0) throw std::invalid_argument("min_poly is not square-free");
    if (p.eval(lo) == 0 || p.eval(hi) == 0)
        throw std::invalid_argument("min_poly vanishes at an isolating endpoint");
    auto chain = sturm_chain(p);
    if (sturm_count(chain, lo, hi) != 1)
        throw std::invalid_argument("isolating interval does not contain exactly one root");

    auto f = Ptr(new NumberField(std::move(min_poly), lo, hi, max_bits));
    // beta in (1, 2]: refine until decidable.
    for (unsigned b = 4; b <= max_bits; b *= 2) {
        auto [l, h] = f->isolate(b);
        if (l == h) {
            if (l > 1 && l <= 2) return f;
            throw std::invalid_argument("root does not lie in (1, 2]");
        }
        if (l > 1 && h <= 2) return f;
        if (h <= 1 || l > 2) throw std::invalid_argument("root does not lie in (1, 2]");
    }
    throw std::invalid_argument("could not certify root in (1, 2] within precision budget");
}

void NumberField::refine_once() const {
    // Caller holds mu_.
    Rat mid = (lo_ + hi_) / 2;
    Rat v = min_poly_.eval(mid);
    if (v == 0) {
        exact_ = mid;
        return;
    }
    // Exactly one simple root inside, endpoints nonvanishing: the sign change
    // identifies the half containing it.
    Rat vlo = min_poly_.eval(lo_);
    if (sign_of(vlo) * sign_of(v) < 0)
        hi_ = mid;
    else
        lo_ = mid;
}

std::pair<Rat, Rat> NumberField::isolate(unsigned bits) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (bits > max_bits_) bits = max_bits_;
    Rat target = pow_rat(Rat(1, 2), static_cast<long>(bits));
    while (!exact_ && (hi_ - lo_) > target) refine_once();
    if (bits > bits_) bits_ = bits;
    if (exact_) return {*exact_, *exact_};
    return {lo_, hi_};
}

unsigned NumberField::cached_precision() const {
    std::lock_guard<std::mutex> lock(mu_);
    return bits_;
}

std::optional<Rat> NumberField::exact_root() const {
    std::lock_guard<std::mutex> lock(mu_);
    return exact_;
}

DInterval NumberField::beta_interval(unsigned bits) const {
    auto [l, h] = isolate(bits);
    return DInterval(next_down(rat_to_double(l)), next_up(rat_to_double(h)));
}

FieldElem NumberField::from_rat(const Rat& q) const {
    std::vector<Rat> c(static_cast<std::size_t>(degree()), Rat(0));
    c[0] = q;
    return FieldElem(shared_from_this(), std::move(c));
}

FieldElem NumberField::from_coeffs(std::vector<Rat> coeffs) const {
    return FieldElem(shared_from_this(), std::move(coeffs));
}

FieldElem NumberField::beta() const {
    if (degree() == 1) {
        // root of a x + b is -b/a
        Rat r = make_rat(-min_poly_int_[0], min_poly_int_[1]);
        return from_rat(r);
    }
    std::vector<Rat> c(static_cast<std::size_t>(degree()), Rat(0));
    c[1] = 1;
    return FieldElem(shared_from_this(), std::move(c));
}

FieldElem NumberField::beta_inverse() const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (beta_inv_coeffs_) return FieldElem(shared_from_this(), *beta_inv_coeffs_);
    }
    FieldElem inv = beta().inverse();
    std::lock_guard<std::mutex> lock(mu_);
    beta_inv_coeffs_ = inv.coeffs();
    return inv;
}
FieldElem NumberField::zero() const { return from_rat(Rat(0)); }
FieldElem NumberField::one() const { return from_rat(Rat(1)); }
FieldElem NumberField::half() const { return from_rat(Rat(1, 2)); }

NumberField::Ptr NumberField::catalog(const std::string& name) {
    if (name == "full") return make({Int(-2), Int(1)}, Rat(3, 2), Rat(5, 2));
    if (name == "golden") return make({Int(-1), Int(-1), Int(1)}, Rat(1), Rat(2));
    if (name == "sqrt2") return make({Int(-2), Int(0), Int(1)}, Rat(1), Rat(2));
    throw std::invalid_argument("unknown catalog parameter: " + name);
}

std::vector<std::string> NumberField::catalog_names() { return {"full", "golden", "sqrt2"}; }

std::string NumberField::describe() const {
    std::ostringstream os;
    os << "Q(beta), min_poly coeffs [";
    for (std::size_t i = 0; i < min_poly_int_.size(); ++i) {
        if (i) os << ", ";
        os << min_poly_int_[i].get_str();
    }
    auto [l, h] = isolate(32);
    os << "], beta in [" << rat_to_double(l) << ", " << rat_to_double(h) << "]";
    return os.str();
}

FieldElem::FieldElem(NumberField::Ptr field, std::vector<Rat> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
    reduce();
}

void FieldElem::reduce() {
    std::size_t d = static_cast<std::size_t>(field_->degree());
    if (c_.size() > d) {
        Poly v{std::vector<Rat>(c_.begin(), c_.end())};
        Poly r = Poly::divmod(v, field_->min_poly_rat()).second;
        c_.assign(d, Rat(0));
        for (std::size_t i = 0; i < static_cast<std::size_t>(r.degree() + 1); ++i) c_[i] = r.coeff(i);
    } else {
        c_.resize(d, Rat(0));
    }
}

bool FieldElem::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rat FieldElem::rational_value() const {
    if (!is_rational()) throw std::logic_error("element is not rational");
    return c_[0];
}

static void check_same_field(const FieldElem& a, const FieldElem& b) {
    if (a.field() != b.field()) throw std::logic_error("mixing elements of different fields");
}

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    check_same_field(a, b);
    std::vector<Rat> c = a.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs()[i];
    return FieldElem(a.field(), std::move(c));
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    check_same_field(a, b);
    std::vector<Rat> c = a.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coeffs()[i];
    return FieldElem(a.field(), std::move(c));
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    check_same_field(a, b);
    std::size_t d = a.coeffs().size();
    std::vector<Rat> c(2 * d - 1, Rat(0));
    for (std::size_t i = 0; i < d; ++i) {
        if (a.coeffs()[i] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
    }
    return FieldElem(a.field(), std::move(c));
}

FieldElem FieldElem::operator-() const {
    std::vector<Rat> c = c_;
    for (auto& x : c) x = -x;
    return FieldElem(field_, std::move(c));
}

FieldElem FieldElem::operator+(const Rat& q) const {
    std::vector<Rat> c = c_;
    c[0] += q;
    return FieldElem(field_, std::move(c));
}
FieldElem FieldElem::operator-(const Rat& q) const { return *this + Rat(-q); }
FieldElem FieldElem::operator*(const Rat& q) const {
    std::vector<Rat> c = c_;
    for (auto& x : c) x *= q;
    return FieldElem(field_, std::move(c));
}

FieldElem FieldElem::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    FieldElem r = field_->one();
    FieldElem b = *this;
    unsigned long k = static_cast<unsigned long>(n);
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

bool FieldElem::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

// Extended Euclid over Q[x].
static void poly_egcd(const Poly& a, const Poly& b, Poly& g, Poly& s) {
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::one(), s1 = Poly::zero();
    while (!r1.is_zero()) {
        auto [q, r2] = Poly::divmod(r0, r1);
        Poly s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    g = r0;
    s = s0;
}

FieldElem FieldElem::inverse() const {
    if (is_zero()) throw DomainError("division by zero in Q(beta)");
    Poly a{std::vector<Rat>(c_.begin(), c_.end())};
    Poly g, s;
    poly_egcd(a, field_->min_poly_rat(), g, s);
    if (g.degree() == 0) {
        Poly inv = s * (Rat(1) / g.coeff(0));
        return FieldElem(field_, inv.coeffs());
    }
    // Square-free but reducible min_poly: p = g * e with exactly one factor
    // vanishing at beta. Decide which by refinement; if g(beta) = 0 the
    // element itself is zero as a real number.
    Poly e = Poly::divmod(field_->min_poly_rat(), g).first;
    for (unsigned bits = 8; bits <= field_->max_bits(); bits *= 2) {
        auto [lo, hi] = field_->isolate(bits);
        auto ge = poly_range(g, lo, hi);
        auto ee = poly_range(e, lo, hi);
        if (sign_of(ee.first) == sign_of(ee.second) && sign_of(ee.first) != 0)
            throw DomainError("division by zero in Q(beta) (vanishing representative)");
        if (sign_of(ge.first) == sign_of(ge.second) && sign_of(ge.first) != 0) {
            Poly g2, s2;
            poly_egcd(a, e, g2, s2);
            if (g2.degree() != 0) throw PrecisionExhausted("inverse failed: min_poly not square-free?");
            Poly inv = s2 * (Rat(1) / g2.coeff(0));
            return FieldElem(field_, inv.coeffs());
        }
    }
    throw PrecisionExhausted("inverse: could not separate factors within budget");
}

int FieldElem::sign() const {
    if (is_zero()) return 0;
    if (is_rational()) return sign_of(c_[0]);
    if (auto ex = field_->exact_root()) {
        Poly v{std::vector<Rat>(c_.begin(), c_.end())};
        return sign_of(v.eval(*ex));
    }
    Poly v{std::vector<Rat>(c_.begin(), c_.end())};
    for (unsigned bits = 8;; bits *= 2) {
        if (bits > field_->max_bits())
            throw PrecisionExhausted("sign: refinement budget exhausted (mis-specified min_poly?)");
        auto [lo, hi] = field_->isolate(bits);
        if (lo == hi) return sign_of(v.eval(lo));
        auto r = poly_range(v, lo, hi);
        if (sign_of(r.first) > 0) return 1;
        if (sign_of(r.second) < 0) return -1;
    }
}

Ordering FieldElem::compare(const FieldElem& o) const {
    if (identical(o)) return Ordering::EQ;
    int s = (*this - o).sign();
    if (s == 0) return Ordering::EQ;  // only reachable with reducible min_poly
    return s < 0 ? Ordering::LT : Ordering::GT;
}

Ordering FieldElem::compare(const Rat& q) const { return compare(field_->from_rat(q)); }

std::pair<Rat, Rat> FieldElem::rat_bounds(unsigned bits) const {
    if (is_rational()) return {c_[0], c_[0]};
    Poly v{std::vector<Rat>(c_.begin(), c_.end())};
    if (auto ex = field_->exact_root()) {
        Rat x = v.eval(*ex);
        return {x, x};
    }
    Rat target = pow_rat(Rat(1, 2), static_cast<long>(bits));
    unsigned b = std::max(8u, bits);
    for (;;) {
        auto [lo, hi] = field_->isolate(b);
        auto r = poly_range(v, lo, hi);
        if (r.second - r.first <= target || b >= field_->max_bits()) return r;
        b *= 2;
    }
}

DInterval FieldElem::to_interval(unsigned bits) const {
    auto [lo, hi] = rat_bounds(bits);
    return DInterval(next_down(rat_to_double(lo)), next_up(rat_to_double(hi)));
}

double FieldElem::to_double() const { return to_interval(60).mid(); }

std::size_t FieldElem::hash() const {
    std::size_t h = 0xc0ffee;
    for (const auto& q : c_) h = hash_combine(h, hash_rat(q));
    return h;
}

std::string FieldElem::to_string() const {
    if (is_rational()) return rat_to_string(c_[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) s += " + ";
        s += rat_to_string(c_[i]);
        if (i == 1) s += "*b";
        if (i > 1) s += "*b^" + std::to_string(i);
    }
    return s + ")";
}

}  // namespace tentsurgery
