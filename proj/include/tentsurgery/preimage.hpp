#pragma once

// First-hitting-time preimage sets of the periodic critical-orbit point:
// exact tree enumeration, and the threshold counting recursion
//   S_n(y) = S_{n-1}(f y)                                  y <= c
//   S_n(y) = 2 S_{n-1}(c1) - S_{n-1}(f y) + e_{n-1}(f y) - e_{n-1}(c1)   y > c
// for inclusive counts S_n(y) = #{x <= y : f^n(x) = target}, with the exact
// boundary indicators e_n(y) = [f^n(y) = target]. First-hit counts follow by
// the mod-period sieve, insertion-host counts by removing orbit points.

#include "tentsurgery/interval.hpp"
#include "tentsurgery/tent.hpp"

#include <unordered_map>

namespace tentsurgery {

struct PreimageNode {
    FieldElem point;
    int level = 0;
    ItineraryWord word;  // s_n ... s_0, length level+1
    bool on_orbit = false;
    int parent = -1;  // index into the previous level
};

struct PreimageTree {
    std::vector<std::vector<PreimageNode>> levels;
    int depth() const { return static_cast<int>(levels.size()) - 1; }
    std::vector<Int> level_sizes() const {
        std::vector<Int> out;
        for (const auto& l : levels) out.emplace_back(static_cast<long>(l.size()));
        return out;
    }
};

// The subset of {z/beta, 1 - z/beta} lying in the matching tent branch,
// ascending; size 0, 1 or 2.
std::vector<FieldElem> preimages_one_step(const FieldElem& z);

inline constexpr int kDefaultTreeCap = 18;

PreimageTree enumerate_tree(const NumberField::Ptr& field, const CriticalOrbitData& orbit,
                            int depth, int cap = kDefaultTreeCap);

// Exact counting engine over a fixed target point (default: the periodic
// critical-orbit point c_t).
class CountEngine {
  public:
    CountEngine(NumberField::Ptr field, const CriticalOrbitData& orbit);
    CountEngine(NumberField::Ptr field, const CriticalOrbitData& orbit, FieldElem target,
                bool target_periodic);

    struct Column {
        std::vector<Int> T;   // threshold counts (strict or inclusive as requested)
        std::vector<Int> N;   // first-hit counts (target must be periodic)
        std::vector<Int> Nx;  // N with orbit points removed (insertion hosts)
    };

    // All columns for n = 0..nmax at threshold y in [0,1]. Works for any
    // exact y; cost grows with the length of y's unresolved forward orbit.
    Column column(const FieldElem& y, int nmax, bool inclusive);

    // (T_n, N_n) with strict threshold semantics.
    std::pair<Int, Int> count_below(const FieldElem& y, int n);

    // F(n): first-hit count over the full interval, right endpoint included.
    Int level_count(int n);
    std::vector<Int> level_counts(int nmax);

    // #{x <= 1 : f^n(x) = target}; with target = c this drives lap counts.
    Int total_count(int n);

    const CriticalOrbitData& orbit() const { return orbit_; }
    const FieldElem& target() const { return target_; }

    // Identifier of a threshold whose forward orbit closes into the engine's
    // registry (orbit points, 0, 1 and previously registered chains always
    // do; arbitrary points may not and then get a transient chain).
    int register_threshold(const FieldElem& y, int max_chain = 4096);
    // S_n at a registered threshold.
    Int S(int id, int n);
    // e_n at a registered threshold.
    bool hits_at(int id, int n) const;
    // first n with f^n(y) = target, and the recurrence period (0 if single).
    std::pair<int, int> hit_pattern(int id) const;

    int next_of(int id) const { return th_[static_cast<std::size_t>(id)].next; }
    bool le_of(int id) const { return th_[static_cast<std::size_t>(id)].le_c; }
    const FieldElem& point_of(int id) const { return th_[static_cast<std::size_t>(id)].point; }

  private:
    struct Threshold {
        FieldElem point;
        bool le_c = true;
        int next = -1;        // registered id of f(point)
        int hit_first = -2;   // -2 unresolved, -1 never reaches the target
        int hit_period = 0;   // 0 when the target is hit at most once
        std::vector<Int> S;
    };

    void ensure_levels(int nmax);
    Int strict(int id, int n);

    NumberField::Ptr field_;
    CriticalOrbitData orbit_;
    FieldElem target_;
    bool target_periodic_;
    FieldElem c_, one_;
    int c1_id_ = -1;
    int levels_done_ = -1;
    std::vector<Threshold> th_;
    std::unordered_map<FieldElem, int, FieldElemHash, FieldElemEq> index_;
};

// Insertion lengths: a(n) = beta^-n * 2/(n(n+1)), orbit hosts get length 1.
class LengthSchedule {
  public:
    explicit LengthSchedule(NumberField::Ptr field);
    FieldElem a_exact(int n) const;
    DInterval a_enclosure(int n) const;
    FieldElem lambda_exact(int n) const;  // a(n)/a(n-1), lambda(1) = 1/beta
    const NumberField::Ptr& field() const { return field_; }

  private:
    NumberField::Ptr field_;
    FieldElem inv_beta_;
    DInterval inv_beta_iv_;
};

struct CountTableRow {
    int n;
    std::optional<Int> F_tree;
    Int F_recursion;
    DInterval a_n;
    DInterval cumulative;  // sum_{k<=n} F(k) a(k)
};

std::vector<CountTableRow> count_table(const NumberField::Ptr& field,
                                       const CriticalOrbitData& orbit, int nmax, int tree_cap);

std::string count_table_csv(const std::vector<CountTableRow>& rows);

}  // namespace tentsurgery
