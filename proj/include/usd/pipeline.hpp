#pragma once

#include <string>
#include <vector>

#include "usd/ensemble.hpp"
#include "usd/final_config.hpp"
#include "usd/ladder.hpp"
#include "usd/rotations.hpp"
#include "usd/synthesis.hpp"
#include "usd/usd_sdp.hpp"

namespace usd {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct PipelineResult {
    Ensemble ensemble;
    LadderForm ladder;
    ReciprocalSet reciprocal;
    UsdSolution solution;
    FinalConfiguration final_config;
    SynthesisResult synthesis;
    RotationSequence rotations;
    std::vector<CheckResult> checks;

    [[nodiscard]] bool ok() const;
};

CheckResult make_check(std::string name, double value, double tolerance);

/// load -> ladder -> reciprocal -> SDP -> final configuration -> U1 -> rotations,
/// then every invariant check. Module errors propagate as usd::Error.
PipelineResult run_pipeline(const Ensemble &e, const Tolerances &tol = {});

/// Largest |<Q_if|P_k|Q_if> - p_i delta_ik| over k <= N, split into the
/// diagonal (k == i) and off-diagonal parts.
struct MeasurementDefect {
    double conclusive = 0.0;
    double cross_talk = 0.0;
};
MeasurementDefect measurement_defect(const ComplexMatrix &states_f, const RealVector &p);

/// Largest per-step Euler round-trip error.
double euler_roundtrip_error(const RotationSequence &seq);

} // namespace usd
