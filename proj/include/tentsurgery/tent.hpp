#pragma once

// Symmetric tent map over Q(beta): exact iteration, critical orbit detection,
// itineraries with the parity-lexicographic order, and the period-doubling
// renormalization ladder.

#include "tentsurgery/number_field.hpp"

#include <variant>
#include <vector>

namespace tentsurgery {

struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotRenormalizable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Symbol : uint8_t { Zero, Star, One };

struct ItineraryWord {
    std::vector<Symbol> symbols;

    std::size_t size() const { return symbols.size(); }
    std::string to_string() const {
        std::string s;
        s.reserve(symbols.size());
        for (Symbol sym : symbols)
            s += (sym == Symbol::Zero ? '0' : sym == Symbol::Star ? '*' : '1');
        return s;
    }
    static ItineraryWord parse(const std::string& s) {
        ItineraryWord w;
        for (char ch : s) {
            if (ch == '0') w.symbols.push_back(Symbol::Zero);
            else if (ch == '*' || ch == 'c') w.symbols.push_back(Symbol::Star);
            else if (ch == '1') w.symbols.push_back(Symbol::One);
            else throw std::invalid_argument("bad itinerary symbol");
        }
        return w;
    }
    bool operator==(const ItineraryWord& o) const { return symbols == o.symbols; }
};

struct CriticalOrbitData {
    std::vector<FieldElem> points;  // c, c_1, ..., c_{t+m-1}
    int preperiod = 0;              // t
    int period = 1;                 // m

    int size() const { return static_cast<int>(points.size()); }
    const FieldElem& c() const { return points.front(); }
    const FieldElem& periodic_point() const { return points[static_cast<std::size_t>(preperiod)]; }
    // Steps until the orbit of points[i] first lands on the periodic point.
    int first_hit_from(int i) const {
        return i <= preperiod ? preperiod - i : preperiod + period - i;
    }
    FieldElem point_after(int i) const {  // f(points[i]) with the cycle closed
        int j = i + 1;
        if (j == size()) j = preperiod;
        return points[static_cast<std::size_t>(j)];
    }
};

struct NotFinite {
    int iterations;
};
using OrbitResult = std::variant<CriticalOrbitData, NotFinite>;

// f_beta(x) = beta x on [0, 1/2], beta (1 - x) on (1/2, 1]. DomainError outside.
FieldElem tent_apply(const FieldElem& x);

// Image of the closed interval [lo, hi] under f_beta, exact.
std::pair<FieldElem, FieldElem> tent_image(const FieldElem& lo, const FieldElem& hi);

OrbitResult critical_orbit(const NumberField::Ptr& field, int max_iter = 4096);

ItineraryWord itinerary(const FieldElem& x, int n);

Ordering parity_lex_compare(const ItineraryWord& u, const ItineraryWord& v);

// Unique k >= 0 with sqrt(2) < beta^(2^k) <= 2.
int renorm_depth(const NumberField::Ptr& field);

// Core P_beta = [beta(1 - beta/2), beta/2]; f(P) = P.
std::pair<FieldElem, FieldElem> core_interval(const NumberField::Ptr& field);

// k-th restrictive interval J with f^(2^k)(J) contained in J, certified
// exactly. NotRenormalizable when k < 1 or k > renorm_depth.
std::pair<FieldElem, FieldElem> restrictive_interval(const NumberField::Ptr& field, int k);

}  // namespace tentsurgery
