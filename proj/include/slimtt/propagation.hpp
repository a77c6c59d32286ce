#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "slimtt/als.hpp"
#include "slimtt/tensor_train.hpp"

namespace slimtt {

struct PropagationConfig {
    double tau = 0.1;
    int steps = 10;
};

struct StepRecord {
    int step = 0;
    double time = 0.0;
    double eps = 0.0;  ///< relative residual of the step's linear system
    double mass = 0.0; ///< sum of all entries of the state
    /// Most negative marginal entry; low-rank solutions may dip slightly
    /// below zero, which is flagged by callers rather than rejected.
    double min_marginal = 0.0;
    std::vector<Eigen::VectorXd> marginals;
};

struct PropagationResult {
    std::vector<StepRecord> records;
    TtTensor state;
    double max_eps = 0.0;
};

/// Implicit Euler for d/dt P = A P: each step solves (I - tau A) T_{k+1} = T_k
/// with ALS. The step operator is formed once by tt_add(identity, -tau A)
/// without rounding. eps_k is || (I - tau A) T_k - T_{k-1} || / || T_{k-1} ||.
/// The optional callback sees every accepted step (for snapshot export).
PropagationResult implicit_euler(
    const TtOperator& a, const TtTensor& initial, const PropagationConfig& pc,
    const AlsConfig& ac,
    const std::function<void(int, const TtTensor&)>& on_step = {});

/// Per-cell marginal distributions, computed by contracting every other core
/// with the all-ones vector (the dense tensor is never formed).
std::vector<Eigen::VectorXd> marginals(const TtTensor& t);

/// Reference integrator: e^{t A} v computed with fine-step classical RK4 on
/// the matricized generator. Substeps must keep tau*||A|| inside the RK4
/// stability region; accuracy is O((t/substeps)^4).
Eigen::VectorXd dense_expm_apply(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double t,
                                 int substeps);

} // namespace slimtt
