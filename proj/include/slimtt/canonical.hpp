#pragma once

#include <Eigen/Core>
#include <vector>

#include "slimtt/shape.hpp"
#include "slimtt/tensor_train.hpp"

namespace slimtt {

/// Rank-r sum of elementary tensor products; core i holds the r factor
/// vectors for cell i as rows (r x n_i).
struct CanonicalTensor {
    Shape shape;
    std::vector<Eigen::MatrixXd> cores;

    CanonicalTensor(Shape s, std::vector<Eigen::MatrixXd> c);
    int rank() const { return static_cast<int>(cores.front().rows()); }
};

/// Operator analogue: term k of cell i is the n_i x n_i matrix cores[i][k].
struct CanonicalOperator {
    Shape shape;
    std::vector<std::vector<Eigen::MatrixXd>> cores;

    CanonicalOperator(Shape s, std::vector<std::vector<Eigen::MatrixXd>> c);
    int rank() const { return static_cast<int>(cores.front().size()); }
};

/// Exact TT representation with all interior ranks equal to the canonical
/// rank: boundary cores reshaped, interior cores diagonal in the rank indices.
TtTensor to_tt(const CanonicalTensor& c);
TtOperator to_tt(const CanonicalOperator& c);

} // namespace slimtt
