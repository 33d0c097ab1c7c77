#pragma once

// Q(beta) arithmetic with beta given by an integer minimal polynomial and an
// isolating interval. Points are reduced coefficient vectors; equality is
// coefficient equality and order is decided by refining the isolating
// interval until the sign of the difference polynomial is certain.

#include "tentsurgery/interval.hpp"
#include "tentsurgery/numeric.hpp"
#include "tentsurgery/poly.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace tentsurgery {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Ordering { LT, EQ, GT };

// Sturm chain utilities (shared with the spectral-radius fallback).
std::vector<Poly> sturm_chain(const Poly& p);
int sturm_variations(const std::vector<Poly>& chain, const Rat& x);
// Number of distinct real roots in (a, b].
int sturm_count(const std::vector<Poly>& chain, const Rat& a, const Rat& b);

class FieldElem;

class NumberField : public std::enable_shared_from_this<NumberField> {
  public:
    using Ptr = std::shared_ptr<const NumberField>;

    // Throws std::invalid_argument unless min_poly is square-free with exactly
    // one root in (lo, hi), nonvanishing at the endpoints, and that root lies
    // in (1, 2].
    static Ptr make(std::vector<Int> min_poly, Rat lo, Rat hi, unsigned max_bits = 1u << 14);

    // Built-ins: "full" (beta = 2), "golden", "sqrt2".
    static Ptr catalog(const std::string& name);
    static std::vector<std::string> catalog_names();

    int degree() const { return static_cast<int>(min_poly_int_.size()) - 1; }
    const std::vector<Int>& min_poly() const { return min_poly_int_; }
    const Poly& min_poly_rat() const { return min_poly_; }
    unsigned max_bits() const { return max_bits_; }

    // Isolating interval refined to width <= 2^-bits. Monotone cache, safe for
    // concurrent callers.
    std::pair<Rat, Rat> isolate(unsigned bits) const;
    // The interval the field was constructed with (stable across refinement).
    std::pair<Rat, Rat> original_interval() const { return {orig_lo_, orig_hi_}; }
    unsigned cached_precision() const;
    std::optional<Rat> exact_root() const;

    DInterval beta_interval(unsigned bits = 64) const;

    FieldElem from_rat(const Rat& q) const;
    FieldElem from_coeffs(std::vector<Rat> coeffs) const;
    FieldElem beta() const;
    FieldElem beta_inverse() const;
    FieldElem zero() const;
    FieldElem one() const;
    FieldElem half() const;

    std::string describe() const;

  private:
    NumberField(std::vector<Int> mp, Rat lo, Rat hi, unsigned max_bits);
    void refine_once() const;

    std::vector<Int> min_poly_int_;
    Poly min_poly_;
    unsigned max_bits_;
    Rat orig_lo_, orig_hi_;

    mutable std::mutex mu_;
    mutable Rat lo_, hi_;
    mutable unsigned bits_ = 0;
    mutable std::optional<Rat> exact_;
    mutable std::optional<std::vector<Rat>> beta_inv_coeffs_;

    friend class FieldElem;
};

class FieldElem {
  public:
    FieldElem() = default;
    FieldElem(NumberField::Ptr field, std::vector<Rat> coeffs);

    const NumberField::Ptr& field() const { return field_; }
    const std::vector<Rat>& coeffs() const { return c_; }
    bool is_rational() const;
    Rat rational_value() const;  // requires is_rational()

    friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
    FieldElem operator-() const;
    FieldElem inverse() const;  // DomainError on zero
    friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inverse(); }

    FieldElem operator+(const Rat& q) const;
    FieldElem operator-(const Rat& q) const;
    FieldElem operator*(const Rat& q) const;
    FieldElem pow(long n) const;

    bool identical(const FieldElem& o) const { return c_ == o.c_; }
    bool is_zero() const;

    // Exact sign / order; PrecisionExhausted signals a mis-specified field.
    int sign() const;
    Ordering compare(const FieldElem& o) const;
    Ordering compare(const Rat& q) const;

    bool operator<(const FieldElem& o) const { return compare(o) == Ordering::LT; }
    bool operator<=(const FieldElem& o) const { return compare(o) != Ordering::GT; }
    bool operator>(const FieldElem& o) const { return compare(o) == Ordering::GT; }
    bool operator>=(const FieldElem& o) const { return compare(o) != Ordering::LT; }
    bool operator==(const FieldElem& o) const { return identical(o); }
    bool operator!=(const FieldElem& o) const { return !identical(o); }

    // Certified enclosure of the real value, width <= 2^-bits when reachable
    // within the field's refinement budget.
    std::pair<Rat, Rat> rat_bounds(unsigned bits) const;
    DInterval to_interval(unsigned bits = 60) const;
    double to_double() const;

    std::size_t hash() const;
    std::string to_string() const;

  private:
    void reduce();
    NumberField::Ptr field_;
    std::vector<Rat> c_;
};

struct FieldElemHash {
    std::size_t operator()(const FieldElem& x) const { return x.hash(); }
};
struct FieldElemEq {
    bool operator()(const FieldElem& a, const FieldElem& b) const { return a.identical(b); }
};

}  // namespace tentsurgery
