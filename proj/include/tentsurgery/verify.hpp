#pragma once

// Numerical certification of the construction's desk-checkable claims:
// C1 difference quotients, hyperbolic derivative products, measure
// accounting, absorption into the orbit-interval cycle, attractor location,
// and topological entropy.

#include "tentsurgery/surgery.hpp"

namespace tentsurgery {

struct InsufficientDepth : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuotientSample {
    int depth = 0;
    int record = -1;
    DInterval quotient;   // |difference quotient| of the evaluator
    double bound_lo = 0;  // beta
    double bound_hi = 0;  // beta + 6/(n-1)
    bool within = false;
};

// Difference quotients at inserted-interval endpoints: across whole
// schedule branches, across random sub-pairs inside a branch, and across the
// Cantor gap to the nearest deeper materialized neighbor.
std::vector<QuotientSample> check_quotients(SurgeredMapDescriptor& d,
                                            const std::vector<int>& depths,
                                            int samples_per_depth, double tol,
                                            unsigned seed = 20240811);

struct LengthReport {
    DInterval schedule_mass;   // sum F(n) a(n)
    DInterval total_inserted;  // L
    DInterval cantor_fraction; // 1/(1+L)
    bool fraction_positive = false;
};

LengthReport check_lengths(SurgeredMapDescriptor& d);

enum class BasinClass { PeriodicCycle, Cantor, Exceptional, Undecided };

struct BasinReport {
    BasinClass cls = BasinClass::Undecided;
    int iterations = 0;
    int entered_cycle_at = -1;  // first step inside the periodic orbit intervals
    int period = 0;
    double multiplier = 0.0;
};

// Iterates the map from a seed inside a materialized inserted interval
// (local coordinate in [0,1]).
BasinReport simulate_basin(const SurgeredMapDescriptor& d, int record, double local,
                           int max_iter);

// Purely symbolic run of an endpoint seed.
BasinReport simulate_endpoint(const SurgeredMapDescriptor& d, EndpointRef seed, int max_iter);

struct AttractorReport {
    int renorm_depth = 0;
    // Embedded invariant region: core for k = 0, the 2^k-cycle of restrictive
    // cores for k >= 1, as host intervals with their embedded enclosures.
    std::vector<std::pair<FieldElem, FieldElem>> host_intervals;
    std::vector<std::pair<DInterval, DInterval>> embedded;
    DInterval entropy;  // log beta via the core transition matrix
    bool invariance_certified = false;
};

AttractorReport attractor_location(SurgeredMapDescriptor& d);

struct EntropyReport {
    DInterval via_matrix;  // log of the spectral-radius enclosure
    double via_laps = 0.0; // (1/n) log lap(f^n) at n_max
    double lap_tolerance = 0.0;
    int n_max = 0;
    bool consistent = false;
};

EntropyReport entropy_check(const NumberField::Ptr& field, const CriticalOrbitData& orbit,
                            int n_max);

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

std::string results_json(const std::vector<CheckResult>& results);

// Named suites: "lengths", "quotients", "hyperbolic", "absorption",
// "spectral", "conjugacy", "attractor", "entropy" or "all".
std::vector<CheckResult> run_suite(const std::string& beta_name, const std::string& suite,
                                   int depth, double eps);

}  // namespace tentsurgery
