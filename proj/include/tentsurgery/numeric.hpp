#pragma once

// Exact integer/rational layer. Everything dynamical in this project is
// computed over GMP rationals; doubles only appear behind certified
// enclosures (see interval.hpp).

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tentsurgery {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat make_rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Parses "a/b" or "a" (decimal integer strings, optional sign).
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    Rat q;
    if (slash == std::string::npos) {
        q = Rat(Int(s));
    } else {
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
        q = make_rat(num, den);
    }
    return q;
}

inline std::string rat_to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// mpq -> double rounds to nearest; callers needing direction use interval.hpp.
inline double rat_to_double(const Rat& q) { return q.get_d(); }

inline int sign_of(const Rat& q) { return sgn(q); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    bool inv = e < 0;
    unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Int num = pow_int(base.get_num(), k);
    Int den = pow_int(base.get_den(), k);
    if (inv) {
        if (num == 0) throw std::domain_error("0^negative");
        std::swap(num, den);
    }
    return make_rat(num, den);
}

inline std::size_t hash_combine(std::size_t a, std::size_t b) {
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

inline std::size_t hash_int(const Int& z) {
    // Limb-based; stable within a process, which is all we need.
    std::size_t h = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()));
    const mp_limb_t* limbs = mpz_limbs_read(z.get_mpz_t());
    std::size_t n = mpz_size(z.get_mpz_t());
    for (std::size_t i = 0; i < n; ++i) h = hash_combine(h, static_cast<std::size_t>(limbs[i]));
    return h;
}

inline std::size_t hash_rat(const Rat& q) {
    return hash_combine(hash_int(q.get_num()), hash_int(q.get_den()));
}

}  // namespace tentsurgery
