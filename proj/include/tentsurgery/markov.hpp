#pragma once

// Markov partition of [0,1] by the critical orbit, its 0/1 transition matrix,
// spectral enclosures, and the growth constants that bound preimage counts.

#include "tentsurgery/preimage.hpp"

namespace tentsurgery {

struct NotMarkov : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MarkovPartition {
    NumberField::Ptr field;
    std::vector<FieldElem> cuts;  // sorted, distinct; blocks are (cuts[i], cuts[i+1])
    int block_count() const { return static_cast<int>(cuts.size()) - 1; }
};

MarkovPartition build_partition(const NumberField::Ptr& field, const CriticalOrbitData& orbit);

using IntMatrix = std::vector<std::vector<Int>>;

struct TransitionMatrix {
    IntMatrix B;
    // Column blocks adjacent to the periodic critical-orbit point.
    int col_left = -1, col_right = -1;
    DInterval spectral_radius_estimate;
    std::vector<double> perron_left, perron_right;  // normalized, v^T w = 1
};

TransitionMatrix build_matrix(const MarkovPartition& partition, const CriticalOrbitData& orbit);

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);
IntMatrix mat_pow(const IntMatrix& a, int n);

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enclosure of the spectral radius with width <= tol: Collatz-Wielandt
// iteration on B + I in exact rationals, Sturm bisection of the
// characteristic polynomial as the fallback.
DInterval spectral_radius(const IntMatrix& B, double tol, int iter_cap = 512);

// Characteristic polynomial of an integer matrix (exact, monic).
Poly char_poly(const IntMatrix& B);

// Does the field's minimal polynomial divide char_poly(B) exactly?
bool min_poly_divides_char_poly(const NumberField::Ptr& field, const IntMatrix& B);

struct GrowthCertificate {
    // Scan bound: 2 * max_{1<=n<=n_max} (mass of B^n columns beside c_t)/beta^n,
    // checked against exact F(n) on the scan range.
    double M_scan = 0.0;
    int scan_depth = 0;
    // Rigorous for every n: F(n) <= A(n) <= #paths(n-1) <= M_rig beta^n with
    // M_rig = (sum v)/(beta min v) from the exact Perron vector of B.
    bool rigorous = false;
    Rat M_rig_upper;  // rational upper bound of M_rig
    std::vector<FieldElem> perron_exact;

    double tail_constant() const {
        if (!rigorous) throw std::runtime_error("no certified growth constant");
        return rat_to_double(M_rig_upper);
    }
};

GrowthCertificate growth_constant(const NumberField::Ptr& field, const TransitionMatrix& tm,
                                  const CriticalOrbitData& orbit, int n_max);

std::string matrix_csv(const TransitionMatrix& tm);
std::string matrix_json(const TransitionMatrix& tm, const GrowthCertificate& cert);

}  // namespace tentsurgery
