#pragma once

// The Denjoy-like surgery: cubic transition branches, the layout of the
// fattened interval I_beta, the embedding/collapse coordinate pair, and the
// tolerance-contracted evaluator for g_beta and its unit-interval conjugate.

#include "tentsurgery/mass.hpp"

namespace tentsurgery {

struct ResolutionLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BranchKind { H_INC, R_DEC, UNIT_G, UNIT_W, CRIT_F1, CRIT_F2 };

// Closed-form cubic transition map between two intervals. The four monotone
// kinds share one family; the CRIT pair forms the turning branch on J_0.
struct CubicBranch {
    BranchKind kind;
    DInterval u1, v1, u2, v2;  // domain and range endpoints
    DInterval beta;

    DInterval dom_len() const { return v1 - u1; }
    DInterval ran_len() const { return v2 - u2; }
};

DInterval cubic_eval(const CubicBranch& b, DInterval x);
DInterval cubic_deriv(const CubicBranch& b, DInterval x);

// Normalized forms on [0,1] (local coordinates; lengths only).
DInterval cubic_local_eval(BranchKind kind, const DInterval& beta, const DInterval& dom_len,
                           const DInterval& ran_len, DInterval t);
DInterval cubic_local_deriv(BranchKind kind, const DInterval& beta, const DInterval& dom_len,
                            const DInterval& ran_len, DInterval t);
// Turning branch of J_0 in local coordinates (unit lengths).
DInterval crit_local_eval(const DInterval& beta, DInterval t);
DInterval crit_local_deriv(const DInterval& beta, DInterval t);

// Tight range of the branch derivative over the whole domain (the quadratic
// t - t^2 ranges over [0, 1/4], which naive interval evaluation misses).
DInterval branch_deriv_range(BranchKind kind, const DInterval& beta, const DInterval& dom_len,
                             const DInterval& ran_len);
DInterval crit_deriv_range(const DInterval& beta);

enum class SideTag { L, R, Orbit, Critical };

struct InsertedIntervalRecord {
    FieldElem host;
    int level = 0;  // first-hit time of the host
    ItineraryWord word;
    SideTag side = SideTag::L;
    int orbit_index = -1;  // for Orbit / Critical records
    FieldElem length_exact;
    DInterval length;
    DInterval iota_minus;
    int target = -1;  // index of the image record
    BranchKind branch = BranchKind::H_INC;
};

struct SurgeredMapDescriptor {
    NumberField::Ptr field;
    CriticalOrbitData orbit;
    int depth = 0;
    double eps = 1e-6;
    double lipschitz = 0.0;  // certified sup |g'| over materialized branches
    DInterval total_len;     // L
    DInterval right_end;     // b_beta = 1 + L; a_beta = 0
    std::vector<InsertedIntervalRecord> records;  // sorted by host
    std::shared_ptr<MassEngine> engine;

    int record_at_host(const FieldElem& x) const;  // -1 when absent
    const InsertedIntervalRecord& critical() const;
    CubicBranch branch_of(int record_index) const;
    DInterval iota_plus(int record_index) const;
};

SurgeredMapDescriptor layout(const NumberField::Ptr& field, const CriticalOrbitData& orbit,
                             int depth, double eps, const GrowthCertificate& cert);

// iota(x) for a point not covered by an insertion (or the left edge of the
// insertion at x); monotone embedding of [0,1] into I_beta.
DInterval embed(SurgeredMapDescriptor& d, const FieldElem& x, double eps = -1.0);

struct ClassifyResult {
    enum Kind { Inserted, Cantor } kind;
    int record = -1;       // for Inserted
    DInterval local;       // local coordinate in the record
    DInterval point;       // collapsed point pi(y) for Cantor
    bool resolution_ok = true;  // false: deep structure below eps remains
};

ClassifyResult classify(SurgeredMapDescriptor& d, double y, double eps);

// pi: collapse I_beta back onto [0,1].
DInterval collapse(SurgeredMapDescriptor& d, double y, double eps);

// g_beta(y) with absolute error steered by eps.
DInterval eval_map(SurgeredMapDescriptor& d, double y, double eps);

// Symbolic surface: exact endpoint dynamics. end = 0 for the left endpoint.
struct EndpointRef {
    int record;
    int end;  // 0 left, 1 right
};
EndpointRef endpoint_step(const SurgeredMapDescriptor& d, EndpointRef e);
// Exact endpoint derivative of the branch at an endpoint (is +-beta).
FieldElem endpoint_derivative_exact(const SurgeredMapDescriptor& d, EndpointRef e);
DInterval endpoint_position(SurgeredMapDescriptor& d, EndpointRef e);

ItineraryWord symbolic_step(const ItineraryWord& word);
// Steps a word of length n+1 to the orbit cycle; returns the step count (= n).
int steps_to_cycle(const ItineraryWord& word);

// Affine conjugacy to the unit interval.
DInterval to_unit(const SurgeredMapDescriptor& d, DInterval y);
DInterval from_unit(const SurgeredMapDescriptor& d, DInterval x);
DInterval eval_unit(SurgeredMapDescriptor& d, double x, double eps);

// Persistence (schema version 1); exact rationals as decimal strings.
std::string descriptor_to_json(const SurgeredMapDescriptor& d);
SurgeredMapDescriptor descriptor_from_json(const std::string& text,
                                           const GrowthCertificate* cert = nullptr);
void save_descriptor(const SurgeredMapDescriptor& d, const std::string& path);
SurgeredMapDescriptor load_descriptor(const std::string& path);

}  // namespace tentsurgery
