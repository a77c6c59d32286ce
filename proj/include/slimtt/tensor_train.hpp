#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "slimtt/dense.hpp"
#include "slimtt/shape.hpp"

namespace slimtt {

/// Order-3 TT core with dimensions (r0, n, r1). Entries are stored
/// little-endian, i.e. (k0, x, k1) lives at offset k0 + r0*(x + n*k1),
/// so both standard unfoldings are plain column-major views:
///   left_unfold  : (r0*n) x r1
///   right_unfold : r0 x (n*r1)
class Core3 {
public:
    Core3(int r0, int n, int r1)
        : r0_(r0), n_(n), r1_(r1),
          data_(static_cast<std::size_t>(r0) * n * r1, 0.0) {}

    int left_rank() const { return r0_; }
    int mode() const { return n_; }
    int right_rank() const { return r1_; }

    double operator()(int k0, int x, int k1) const {
        return data_[static_cast<std::size_t>(k0 + r0_ * (x + static_cast<std::size_t>(n_) * k1))];
    }
    double& operator()(int k0, int x, int k1) {
        return data_[static_cast<std::size_t>(k0 + r0_ * (x + static_cast<std::size_t>(n_) * k1))];
    }

    Eigen::Map<const Eigen::MatrixXd> left_unfold() const {
        return {data_.data(), static_cast<Eigen::Index>(r0_) * n_, r1_};
    }
    Eigen::Map<const Eigen::MatrixXd> right_unfold() const {
        return {data_.data(), r0_, static_cast<Eigen::Index>(n_) * r1_};
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    int r0_, n_, r1_;
    std::vector<double> data_;
};

/// Order-4 TT operator core with dimensions (r0, n, n, r1); (k0, x, y, k1)
/// at offset k0 + r0*(x + n*(y + n*k1)). Row index x, column index y.
class Core4 {
public:
    Core4(int r0, int n, int r1)
        : r0_(r0), n_(n), r1_(r1),
          data_(static_cast<std::size_t>(r0) * n * n * r1, 0.0) {}

    int left_rank() const { return r0_; }
    int mode() const { return n_; }
    int right_rank() const { return r1_; }

    double operator()(int k0, int x, int y, int k1) const { return data_[offset(k0, x, y, k1)]; }
    double& operator()(int k0, int x, int y, int k1) { return data_[offset(k0, x, y, k1)]; }

    Eigen::Map<const Eigen::MatrixXd> right_unfold() const {
        return {data_.data(), r0_, static_cast<Eigen::Index>(n_) * n_ * r1_};
    }

    /// The (k0, k1) block as an n x n matrix.
    Eigen::MatrixXd block(int k0, int k1) const;
    void set_block(int k0, int k1, const Eigen::MatrixXd& m);

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    std::size_t offset(int k0, int x, int y, int k1) const {
        return static_cast<std::size_t>(k0) +
               static_cast<std::size_t>(r0_) *
                   (static_cast<std::size_t>(x) +
                    static_cast<std::size_t>(n_) *
                        (static_cast<std::size_t>(y) + static_cast<std::size_t>(n_) * k1));
    }
    int r0_, n_, r1_;
    std::vector<double> data_;
};

class TtTensor {
public:
    TtTensor(Shape shape, std::vector<Core3> cores);

    const Shape& shape() const { return shape_; }
    int order() const { return shape_.order(); }
    const std::vector<Core3>& cores() const { return cores_; }
    std::vector<Core3>& cores() { return cores_; }
    const Core3& core(int i) const { return cores_[static_cast<std::size_t>(i)]; }
    Core3& core(int i) { return cores_[static_cast<std::size_t>(i)]; }

    /// Rank vector r_0..r_d (r_0 = r_d = 1).
    std::vector<int> ranks() const;

private:
    Shape shape_;
    std::vector<Core3> cores_;
};

class TtOperator {
public:
    TtOperator(Shape shape, std::vector<Core4> cores);

    const Shape& shape() const { return shape_; }
    int order() const { return shape_.order(); }
    const std::vector<Core4>& cores() const { return cores_; }
    std::vector<Core4>& cores() { return cores_; }
    const Core4& core(int i) const { return cores_[static_cast<std::size_t>(i)]; }
    Core4& core(int i) { return cores_[static_cast<std::size_t>(i)]; }

    std::vector<int> ranks() const;

private:
    Shape shape_;
    std::vector<Core4> cores_;
};

// -- construction -----------------------------------------------------------

TtTensor tt_zero(const Shape& shape);
/// Rank-1 point mass at the 1-based state x.
TtTensor tt_unit(const Shape& shape, std::span<const int> x);
/// Rank-1 all-ones tensor.
TtTensor tt_ones(const Shape& shape);
TtOperator tt_identity(const Shape& shape);

// -- conversion -------------------------------------------------------------

DenseTensor to_full(const TtTensor& t);
DenseOperator to_full(const TtOperator& a);

// -- arithmetic -------------------------------------------------------------

/// Block-diagonal TT sum; interior ranks add. No rounding is performed.
TtTensor tt_add(const TtTensor& a, const TtTensor& b);
TtOperator tt_add(const TtOperator& a, const TtOperator& b);

TtTensor tt_scale(TtTensor t, double s);
TtOperator tt_scale(TtOperator a, double s);

/// Operator-times-tensor; result ranks are products of the operand ranks.
TtTensor tt_matvec(const TtOperator& a, const TtTensor& t);

double tt_dot(const TtTensor& a, const TtTensor& b);
double tt_norm(const TtTensor& t);
/// Sum of all entries (contraction with the all-ones tensor).
double tt_sum(const TtTensor& t);

// -- core manipulation ------------------------------------------------------

/// Swap the leading and trailing rank indices; inner slices are untouched.
Core3 rank_transpose(const Core3& c);
Core4 rank_transpose(const Core4& c);

enum class Direction { Left, Right };

/// Left: every core except the last has an orthonormal left unfolding.
/// Right: every core except the first has an orthonormal right unfolding.
/// The represented tensor is unchanged up to floating-point error.
TtTensor orthogonalize(const TtTensor& t, Direction dir);

/// TT rounding. Per-core truncation keeps the smallest gamma with
/// sqrt(sum_{k>gamma} s_k^2) <= eps * sqrt(sum_k s_k^2); overall relative
/// error is bounded by eps*sqrt(d-1). eps = 0 drops only singular values
/// below 1e-14 relative. Optional per-bond rank caps (interior bonds 1..d-1).
TtTensor tt_truncate(const TtTensor& t, double eps, std::span<const int> rank_caps = {});

} // namespace slimtt
