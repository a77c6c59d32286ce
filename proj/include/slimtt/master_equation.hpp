#pragma once

#include <cstdint>

#include "slimtt/dense.hpp"
#include "slimtt/reaction_system.hpp"

namespace slimtt {

/// Desk-scale guard for the dense oracles: maximum admissible state count
/// (product of the mode sizes). Overridable via the SLIMTT_STATE_CAP
/// environment variable; default 10^6.
std::int64_t oracle_state_cap();

/// Generator assembled in tensor notation, A = sum_mu (G_mu - I) diag(a_mu),
/// with the multidimensional shift operators formed from per-cell shift
/// matrices and the propensities lifted as rank-one diagonal operators.
DenseOperator dense_generator(const ReactionSystem& rs);

/// Generator assembled from the elementwise master-equation form:
/// A(X,Y) = sum_mu a_mu(Y) 1{X = Y + xi_mu} - 1{X=Y} sum_mu a_mu(X),
/// with out-of-range targets dropped. Agrees with dense_generator exactly
/// (identical floating-point accumulation per entry).
DenseOperator elementwise_generator(const ReactionSystem& rs);

struct GeneratorReport {
    double min_offdiag = 0.0;     ///< most negative off-diagonal entry
    double max_abs_colsum = 0.0;  ///< probability leak magnitude
    bool offdiag_nonneg = true;
    bool conserving = true;       ///< max |column sum| <= 1e-12
};

GeneratorReport verify_generator(const DenseOperator& a);

} // namespace slimtt
