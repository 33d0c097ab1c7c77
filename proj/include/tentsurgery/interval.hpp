#pragma once

// Directed-rounded double intervals. Each primitive result is widened by one
// ulp per side, which dominates the 0.5 ulp error of a correctly rounded
// operation, so enclosures stay valid without touching the FPU rounding mode.

#include "tentsurgery/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace tentsurgery {

inline double next_up(double x) {
    if (std::isinf(x) && x > 0) return x;
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}
inline double next_down(double x) {
    if (std::isinf(x) && x < 0) return x;
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

namespace detail {
// Error-free transformations: widen only when the rounded result is inexact.
inline double add_lo(double a, double b) {
    double s = a + b;
    double z = s - a;
    double err = (a - (s - z)) + (b - z);
    return err >= 0.0 ? s : next_down(s);
}
inline double add_hi(double a, double b) {
    double s = a + b;
    double z = s - a;
    double err = (a - (s - z)) + (b - z);
    return err <= 0.0 ? s : next_up(s);
}
inline double mul_lo(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return err >= 0.0 ? p : next_down(p);
}
inline double mul_hi(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return err <= 0.0 ? p : next_up(p);
}
inline double div_lo(double a, double b) {
    double q = a / b;
    double err = -std::fma(q, b, -a);  // a - q*b
    if (b < 0) err = -err;
    return err >= 0.0 ? q : next_down(q);
}
inline double div_hi(double a, double b) {
    double q = a / b;
    double err = -std::fma(q, b, -a);
    if (b < 0) err = -err;
    return err <= 0.0 ? q : next_up(q);
}
}  // namespace detail

class DInterval {
  public:
    DInterval() : lo_(0.0), hi_(0.0) {}
    explicit DInterval(double x) : lo_(x), hi_(x) {}
    DInterval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo_ <= hi_)) throw std::invalid_argument("empty interval");
    }

    static DInterval exact(double x) { return DInterval(x); }
    static DInterval outward(double lo, double hi) { return DInterval(next_down(lo), next_up(hi)); }

    static DInterval from_rat(const Rat& q) {
        double d = rat_to_double(q);
        DInterval box(next_down(d), next_up(d));
        // get_d truncates toward zero; one ulp each side covers it, but tighten
        // when the double is exact.
        if (Rat(d) == q) return DInterval(d);
        return box;
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }
    double mid() const { return 0.5 * (lo_ + hi_); }
    double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Rat& q) const {
        return Rat(lo_) <= q && q <= Rat(hi_);
    }
    bool contains(const DInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool intersects(const DInterval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

    bool certainly_lt(const DInterval& o) const { return hi_ < o.lo_; }
    bool certainly_gt(const DInterval& o) const { return lo_ > o.hi_; }
    bool certainly_positive() const { return lo_ > 0; }
    bool certainly_negative() const { return hi_ < 0; }

    DInterval operator-() const { return DInterval(-hi_, -lo_); }

    friend DInterval operator+(const DInterval& a, const DInterval& b) {
        return DInterval(detail::add_lo(a.lo_, b.lo_), detail::add_hi(a.hi_, b.hi_));
    }
    friend DInterval operator-(const DInterval& a, const DInterval& b) {
        return DInterval(detail::add_lo(a.lo_, -b.hi_), detail::add_hi(a.hi_, -b.lo_));
    }
    friend DInterval operator*(const DInterval& a, const DInterval& b) {
        using detail::mul_hi;
        using detail::mul_lo;
        double lo = std::min(std::min(mul_lo(a.lo_, b.lo_), mul_lo(a.lo_, b.hi_)),
                             std::min(mul_lo(a.hi_, b.lo_), mul_lo(a.hi_, b.hi_)));
        double hi = std::max(std::max(mul_hi(a.lo_, b.lo_), mul_hi(a.lo_, b.hi_)),
                             std::max(mul_hi(a.hi_, b.lo_), mul_hi(a.hi_, b.hi_)));
        return DInterval(lo, hi);
    }
    friend DInterval operator/(const DInterval& a, const DInterval& b) {
        if (b.lo_ <= 0 && 0 <= b.hi_) throw std::domain_error("interval division by zero");
        using detail::div_hi;
        using detail::div_lo;
        double lo = std::min(std::min(div_lo(a.lo_, b.lo_), div_lo(a.lo_, b.hi_)),
                             std::min(div_lo(a.hi_, b.lo_), div_lo(a.hi_, b.hi_)));
        double hi = std::max(std::max(div_hi(a.lo_, b.lo_), div_hi(a.lo_, b.hi_)),
                             std::max(div_hi(a.hi_, b.lo_), div_hi(a.hi_, b.hi_)));
        return DInterval(lo, hi);
    }

    DInterval& operator+=(const DInterval& o) { return *this = *this + o; }
    DInterval& operator-=(const DInterval& o) { return *this = *this - o; }
    DInterval& operator*=(const DInterval& o) { return *this = *this * o; }

    DInterval hull(const DInterval& o) const {
        return DInterval(std::min(lo_, o.lo_), std::max(hi_, o.hi_));
    }

    DInterval abs() const {
        if (lo_ >= 0) return *this;
        if (hi_ <= 0) return -*this;
        return DInterval(0.0, std::max(-lo_, hi_));
    }

    DInterval pow_nonneg(unsigned n) const {  // requires lo_ >= 0
        DInterval r(1.0);
        DInterval b = *this;
        while (n) {
            if (n & 1) r *= b;
            b *= b;
            n >>= 1;
        }
        return r;
    }

    DInterval log() const {
        if (lo_ <= 0) throw std::domain_error("interval log of nonpositive");
        return DInterval(next_down(next_down(std::log(lo_))), next_up(next_up(std::log(hi_))));
    }

    friend std::ostream& operator<<(std::ostream& os, const DInterval& x) {
        return os << "[" << x.lo_ << ", " << x.hi_ << "]";
    }

  private:
    double lo_, hi_;
};

inline DInterval di_from_rat(const Rat& q) { return DInterval::from_rat(q); }

// Complex rectangle, used only for circle bounds on rational functions.
struct CBox {
    DInterval re, im;
    CBox() = default;
    CBox(DInterval r, DInterval i) : re(r), im(i) {}
    friend CBox operator+(const CBox& a, const CBox& b) { return {a.re + b.re, a.im + b.im}; }
    friend CBox operator*(const CBox& a, const CBox& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    DInterval abs2() const { return re * re + im * im; }
};

}  // namespace tentsurgery
