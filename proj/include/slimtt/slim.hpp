#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "slimtt/reaction_system.hpp"
#include "slimtt/shape.hpp"
#include "slimtt/tensor_train.hpp"

namespace slimtt {

/// Shift matrix G(k) with (G)_{x,y} = 1 iff y - x = k. k = 0 is the identity;
/// |k| >= n gives the zero matrix (out-of-range transitions are truncated).
Eigen::MatrixXd shift_matrix(int n, int k);

/// Per-cell components of a SLIM operator. L[i] holds the couplings between
/// cells i and i+1 (0-based); L[d-1] carries the cyclic edge (d,1) and must
/// be empty for non-cyclic systems. M[i] holds the matching right halves, so
/// M[i+1] pairs with L[i] and M[0] pairs with L[d-1].
struct SlimOperatorBlocks {
    std::vector<Eigen::MatrixXd> S;
    std::vector<std::vector<Eigen::MatrixXd>> L;
    std::vector<std::vector<Eigen::MatrixXd>> M;
};

/// Tensor-mode analogue with length-n_i vectors; the identity block is the
/// all-ones vector.
struct SlimTensorBlocks {
    std::vector<Eigen::VectorXd> S;
    std::vector<std::vector<Eigen::VectorXd>> L;
    std::vector<std::vector<Eigen::VectorXd>> M;
};

/// Assemble the SLIM supercore layout: first core [S L I M] (cyclic) or
/// [S L I], interior cores the 4x4 (3x3) block pattern with replicated-J
/// carry, last core [I M S L]^T ([I M S]^T). Interior ranks are
/// 2 + len(L_i) + beta_d (cyclic) or 2 + len(L_i).
/// With declared_homogeneous set, all cells' blocks are verified to be
/// elementwise identical before assembly.
TtOperator build_slim(const SlimOperatorBlocks& blocks, const Shape& shape,
                      bool declared_homogeneous = false);
TtTensor build_slim(const SlimTensorBlocks& blocks, const Shape& shape,
                    bool declared_homogeneous = false);

/// Replicate one cell's blocks across d cells (homogeneous system).
TtOperator build_slim_homogeneous(const Eigen::MatrixXd& S,
                                  const std::vector<Eigen::MatrixXd>& L,
                                  const std::vector<Eigen::MatrixXd>& M, int d, bool cyclic);
TtTensor build_slim_homogeneous(const Eigen::VectorXd& S,
                                const std::vector<Eigen::VectorXd>& L,
                                const std::vector<Eigen::VectorXd>& M, int d, bool cyclic);

/// Result of compressing a two-core contraction [L] (x) [M].
struct CompressedPair {
    std::vector<Eigen::MatrixXd> left;
    std::vector<Eigen::MatrixXd> right;
    int rank = 0;
};

/// Compress the pair so that sum_k left_k (x) right_k equals
/// sum_mu L_mu (x) M_mu with the minimal number of terms. The matricized
/// contraction is row/column equilibrated before the SVD so that the
/// detected rank matches the exact-arithmetic rank even when the blocks
/// span many orders of magnitude; singular values below rel_tol times the
/// largest are dropped. left comes from the U columns, right from the
/// Sigma*V^T rows (both rescaled by the equilibration).
CompressedPair compress_pair(const std::vector<Eigen::MatrixXd>& L,
                             const std::vector<Eigen::MatrixXd>& M, double rel_tol = 1e-12);

/// Algorithm-2 construction of the master-equation generator in SLIM form:
/// S_i = sum_mu (G(-p) - I) diag(a_mu) per cell; every TCR propensity matrix
/// factorized by compact SVD into shifted/unshifted diagonal factor pairs;
/// optional per-edge compression; assembly via build_slim. When edge_counts
/// is given it receives the per-edge coupling counts beta_i of the assembled
/// operator (after compression, if enabled).
TtOperator build_slim_markov(const ReactionSystem& rs, bool compress = true,
                             std::vector<int>* edge_counts = nullptr);

struct SlimStorage {
    std::vector<std::int64_t> per_core;
    std::int64_t total = 0;
};

/// Exact per-core parameter counts of the SLIM layout under dense-S/L/M,
/// sparse-I/J accounting. betas holds the per-edge coupling counts
/// (d-1 entries, or d with the cyclic edge last).
SlimStorage storage_count(const Shape& shape, std::span<const int> betas);

} // namespace slimtt
