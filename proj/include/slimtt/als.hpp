#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "slimtt/tensor_train.hpp"

namespace slimtt {

struct AlsConfig {
    /// Interior bond ranks r_1..r_{d-1}; a single entry is applied uniformly.
    /// Ranks are clamped to the dimensions reachable from either end.
    std::vector<int> ranks = {10};
    int max_sweeps = 25;
    /// Stop when the relative residual, or its change between sweeps, falls
    /// below this value.
    double tolerance = 1e-10;
    /// Tikhonov regularization of the local systems (0 = plain solve).
    double lambda = 0.0;
    /// Seed for the random fill of rank-padded blocks in the initial guess.
    unsigned long long seed = 0x51135;
};

struct SingularLocalSystem : std::runtime_error {
    int bond;
    explicit SingularLocalSystem(int b)
        : std::runtime_error("ALS: singular local system at bond " + std::to_string(b)),
          bond(b) {}
};

struct AlsResult {
    TtTensor solution;
    double residual = 0.0; ///< final ||A x - b|| / ||b||
    int sweeps = 0;
};

/// One-site ALS for A x = b at fixed ranks. The initial guess is the
/// right-hand side truncated/padded to the configured ranks and
/// right-orthogonalized; a sweep runs left-to-right then right-to-left.
/// Deterministic for fixed config and seed.
AlsResult als_solve(const TtOperator& a, const TtTensor& b, const AlsConfig& cfg = {});

} // namespace slimtt
