#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "slimtt/shape.hpp"

namespace slimtt {

/// Dense tensor T in R^{n_1 x ... x n_d}, entries linearized by the
/// little-endian multi-index. The substrate of all brute-force oracles.
class DenseTensor {
public:
    explicit DenseTensor(Shape shape);

    const Shape& shape() const { return shape_; }
    std::int64_t size() const { return static_cast<std::int64_t>(entries_.size()); }

    double at(std::span<const int> x) const { return entries_[static_cast<std::size_t>(multi_index(x, shape_) - 1)]; }
    double& at(std::span<const int> x) { return entries_[static_cast<std::size_t>(multi_index(x, shape_) - 1)]; }

    /// 0-based flat access in little-endian order.
    double flat(std::int64_t k) const { return entries_[static_cast<std::size_t>(k)]; }
    double& flat(std::int64_t k) { return entries_[static_cast<std::size_t>(k)]; }

    const std::vector<double>& entries() const { return entries_; }
    std::vector<double>& entries() { return entries_; }

    Eigen::Map<const Eigen::VectorXd> as_vector() const {
        return {entries_.data(), static_cast<Eigen::Index>(entries_.size())};
    }

private:
    Shape shape_;
    std::vector<double> entries_;
};

/// Dense linear operator A in R^{(n_1 x n_1) x ... x (n_d x n_d)}. Entries
/// linearized little-endian over the interleaved pair sequence
/// (x_1, y_1, ..., x_d, y_d) treated as a 2d-index with modes
/// (n_1, n_1, ..., n_d, n_d).
class DenseOperator {
public:
    explicit DenseOperator(Shape shape);

    const Shape& shape() const { return shape_; }
    std::int64_t size() const { return static_cast<std::int64_t>(entries_.size()); }

    double at(std::span<const int> x, std::span<const int> y) const {
        return entries_[static_cast<std::size_t>(pair_offset(x, y))];
    }
    double& at(std::span<const int> x, std::span<const int> y) {
        return entries_[static_cast<std::size_t>(pair_offset(x, y))];
    }

    /// 0-based offset of the interleaved pair index.
    std::int64_t pair_offset(std::span<const int> x, std::span<const int> y) const;

    /// Matricized view under the multi-index bijection:
    /// mat(phi(x)-1, phi(y)-1) = A(x, y).
    Eigen::MatrixXd to_matrix() const;
    static DenseOperator from_matrix(const Eigen::MatrixXd& mat, const Shape& shape);

    const std::vector<double>& entries() const { return entries_; }
    std::vector<double>& entries() { return entries_; }

private:
    Shape shape_;
    std::vector<double> entries_;
};

/// Tensor product: (a (x) b)(x, y) = a(x) * b(y), concatenated shape.
DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b);

double frobenius_norm(const DenseTensor& t);
double frobenius_norm(const DenseOperator& a);

/// Reference contraction result(x) = sum_y a(x, y) t(y), summed in ascending
/// multi-index order of y. Used as the oracle for all TT contractions.
DenseTensor dense_matvec(const DenseOperator& a, const DenseTensor& t);

} // namespace slimtt
