#pragma once

// Certified evaluation of the inserted-length measure Lambda ("left mass"):
// unit intervals at critical-orbit hosts plus a(n)-length intervals at every
// other first-hit preimage host. For a point y whose forward orbit closes,
// the per-level host counts form a linear recurrence, so their generating
// function N(u) is an explicit rational function solved exactly over Q[u].
// The series is summed as
//     exact terms (n <= N0)
//   + K+ * sum_{n>N0} 2/(n(n+1))            dominant pole at u = 1/beta
//   + K- * sum_{n>N0} (-1)^n 2/(n(n+1))     dominant pole at u = -1/beta
//   + remainder with |R_n| <= M tau^-n      Cauchy bound off a certified
//                                           root-free disk (Rouche test)
// which turns the 1/N truncation tail into a closed form plus a
// geometrically small, certified remainder. Arbitrary points reduce to this
// case through the depth-N cylinder bracket, whose interior carries at most
// M_rig beta^-N 2/N of mass.

#include "tentsurgery/markov.hpp"

namespace tentsurgery {

struct TailBoundUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Rat> ratfun_series(const Poly& num, const Poly& den, int nmax);

class MassEngine {
  public:
    MassEngine(NumberField::Ptr field, CriticalOrbitData orbit, GrowthCertificate cert,
               int exact_terms = 128);

    // Inserted length attached to hosts strictly below y (inclusive: at or
    // below y). Requires the forward orbit of y to close (orbit points, tree
    // points, cut pullbacks); CapExceeded otherwise.
    DInterval mass(const FieldElem& y, bool inclusive);

    // Same for arbitrary exact y in [0,1]; eps steers the cylinder depth, the
    // result may be wider than eps only if the tail machinery degrades.
    DInterval mass_any(const FieldElem& y, bool inclusive, double eps);

    // Total inserted length L = (t+m) + sum a(n) (F(n) - orbit hosts at n).
    DInterval total_length();
    // sum_{n>=1} F(n) a(n), orbit hosts at schedule length (Lemma-3 style sum).
    DInterval schedule_mass_total();

    struct CylinderBracket {
        FieldElem lo, hi;   // closed-orbit bracket points, lo <= y <= hi
        int depth = 0;
        double gap_bound = 0.0;  // inserted mass strictly inside (lo, hi)
        bool exact = false;      // y itself closed; lo == hi == y
    };
    CylinderBracket cylinder_bracket(const FieldElem& y, double eps);

    // First-hit level of y when y is an insertion host.
    std::optional<int> host_level(const FieldElem& y);
    DInterval insertion_length(const FieldElem& y);  // 0 when y is not a host

    const CriticalOrbitData& orbit() const { return orbit_; }
    const NumberField::Ptr& field() const { return field_; }
    CountEngine& counts() { return counts_; }
    const LengthSchedule& schedule() const { return sched_; }
    double tail_constant() const { return m_rig_; }
    const GrowthCertificate& certificate() const { return cert_; }

    // Generating function of inclusive threshold counts at a registered
    // threshold (exposed for the dual-route tests).
    RatFun count_gf(int id);

  private:
    struct TailSplit {
        DInterval value;
        bool crude = false;
    };
    struct NodeGF {
        Poly num, den;  // raw fraction; den(0) != 0, no gcd reduction
    };

    const NodeGF& node_gf(int id);
    NodeGF host_count_gf(int id, const FieldElem& y, bool inclusive);
    TailSplit tail_beyond(const Poly& num, const Poly& den, int n0);
    DInterval series_mass(const std::vector<Int>& nx_exact, const NodeGF& nx);
    int cylinder_depth(double eps) const;

    NumberField::Ptr field_;
    CriticalOrbitData orbit_;
    GrowthCertificate cert_;
    CountEngine counts_;
    LengthSchedule sched_;
    double m_rig_;
    int n0_;
    std::vector<FieldElem> sorted_cuts_;
    std::vector<DInterval> a_iv_;  // a(1..n0)
    std::unordered_map<int, NodeGF> gf_cache_;
    std::unordered_map<long long, DInterval> mass_cache_;
};

}  // namespace tentsurgery
