#pragma once

// Dense univariate polynomials over Q, plus the rational-function field Q(u)
// used when solving counting systems symbolically.

#include "tentsurgery/numeric.hpp"

#include <algorithm>
#include <vector>

namespace tentsurgery {

class Poly {
  public:
    Poly() = default;
    explicit Poly(Rat c) { coeffs_.push_back(std::move(c)); trim(); }
    explicit Poly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return constant(Rat(1)); }
    static Poly constant(Rat c) { return Poly(std::move(c)); }
    static Poly monomial(std::size_t k, Rat c = Rat(1)) {
        std::vector<Rat> v(k + 1, Rat(0));
        v[k] = std::move(c);
        return Poly(std::move(v));
    }

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    Rat coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rat(0); }
    const Rat& leading() const { return coeffs_.back(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rat> r(std::max(a.coeffs_.size(), b.coeffs_.size()), Rat(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) r[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) r[i] += b.coeffs_[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Rat> r(std::max(a.coeffs_.size(), b.coeffs_.size()), Rat(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) r[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) r[i] -= b.coeffs_[i];
        return Poly(std::move(r));
    }
    Poly operator-() const {
        std::vector<Rat> r = coeffs_;
        for (auto& c : r) c = -c;
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rat> r(a.coeffs_.size() + b.coeffs_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const Rat& s) {
        std::vector<Rat> r = a.coeffs_;
        for (auto& c : r) c *= s;
        return Poly(std::move(r));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

    Poly shifted(std::size_t k) const {  // * u^k
        if (is_zero()) return Poly();
        std::vector<Rat> r(coeffs_.size() + k, Rat(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) r[i + k] = coeffs_[i];
        return Poly(std::move(r));
    }

    // Quotient/remainder; divisor must be nonzero.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw std::domain_error("poly division by zero");
        Poly rem = a;
        if (rem.degree() < b.degree()) return {Poly(), rem};
        std::vector<Rat> q(rem.degree() - b.degree() + 1, Rat(0));
        while (!rem.is_zero() && rem.degree() >= b.degree()) {
            std::size_t k = rem.degree() - b.degree();
            Rat c = rem.leading() / b.leading();
            q[k] = c;
            rem = rem - (b * c).shifted(k);
        }
        return {Poly(std::move(q)), rem};
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly derivative() const {
        if (coeffs_.size() <= 1) return Poly();
        std::vector<Rat> r(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) r[i - 1] = coeffs_[i] * Rat(static_cast<long>(i));
        return Poly(std::move(r));
    }

    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            auto [q, r] = divmod(a, b);
            (void)q;
            a = std::move(b);
            b = std::move(r);
        }
        if (!a.is_zero()) a = a * (Rat(1) / a.leading());  // monic
        return a;
    }

    std::string to_string(const std::string& var = "u") const;

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Rat> coeffs_;
};

inline std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (int k = degree(); k >= 0; --k) {
        Rat c = coeff(k);
        if (c == 0) continue;
        if (!s.empty()) s += (c > 0 ? " + " : " - ");
        else if (c < 0) s += "-";
        Rat a = rat_abs(c);
        if (k == 0 || a != 1) s += rat_to_string(a);
        if (k > 0) {
            if (a != 1) s += "*";
            s += var;
            if (k > 1) s += "^" + std::to_string(k);
        }
    }
    return s;
}

// Reduced fraction of polynomials over Q. Denominators kept monic.
class RatFun {
  public:
    RatFun() : num_(), den_(Poly::one()) {}
    explicit RatFun(Poly p) : num_(std::move(p)), den_(Poly::one()) {}
    RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    static RatFun constant(Rat c) { return RatFun(Poly::constant(std::move(c))); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw std::domain_error("ratfun division by zero");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFun operator-() const { return RatFun(-num_, den_); }
    friend bool operator==(const RatFun& a, const RatFun& b) {
        return (a.num_ * b.den_) == (b.num_ * a.den_);
    }

  private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("ratfun with zero denominator");
        if (num_.is_zero()) {
            den_ = Poly::one();
            return;
        }
        Poly g = Poly::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = Poly::divmod(num_, g).first;
            den_ = Poly::divmod(den_, g).first;
        }
        Rat lead = den_.leading();
        if (lead != 1) {
            Rat inv = Rat(1) / lead;
            num_ = num_ * inv;
            den_ = den_ * inv;
        }
    }
    Poly num_, den_;
};

}  // namespace tentsurgery
