#include "slimtt/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace slimtt {

DenseTensor::DenseTensor(Shape shape)
    : shape_(std::move(shape)), entries_(static_cast<std::size_t>(shape_.state_count()), 0.0) {}

DenseOperator::DenseOperator(Shape shape)
    : shape_(std::move(shape)),
      entries_(static_cast<std::size_t>(shape_.state_count() * shape_.state_count()), 0.0) {}

std::int64_t DenseOperator::pair_offset(std::span<const int> x, std::span<const int> y) const {
    const int d = shape_.order();
    if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
        throw std::invalid_argument("DenseOperator: index length mismatch");
    std::int64_t off = 0;
    std::int64_t stride = 1;
    for (int i = 0; i < d; ++i) {
        const int n = shape_.mode(i);
        const int xi = x[static_cast<std::size_t>(i)];
        const int yi = y[static_cast<std::size_t>(i)];
        if (xi < 1 || xi > n || yi < 1 || yi > n)
            throw std::out_of_range("DenseOperator: index for cell " + std::to_string(i + 1) +
                                    " out of range");
        off += static_cast<std::int64_t>(xi - 1) * stride;
        stride *= n;
        off += static_cast<std::int64_t>(yi - 1) * stride;
        stride *= n;
    }
    return off;
}

Eigen::MatrixXd DenseOperator::to_matrix() const {
    const std::int64_t N = shape_.state_count();
    Eigen::MatrixXd mat(N, N);
    // Walk the interleaved layout once; recover (row, col) strides per cell.
    const int d = shape_.order();
    std::vector<int> x(static_cast<std::size_t>(d), 1), y(static_cast<std::size_t>(d), 1);
    for (std::int64_t off = 0; off < size(); ++off) {
        std::int64_t r = 0, c = 0, stride = 1;
        for (int i = 0; i < d; ++i) {
            r += static_cast<std::int64_t>(x[static_cast<std::size_t>(i)] - 1) * stride;
            c += static_cast<std::int64_t>(y[static_cast<std::size_t>(i)] - 1) * stride;
            stride *= shape_.mode(i);
        }
        mat(r, c) = entries_[static_cast<std::size_t>(off)];
        // increment interleaved index (x_1, y_1, x_2, y_2, ...)
        int i = 0;
        for (; i < d; ++i) {
            auto& xi = x[static_cast<std::size_t>(i)];
            if (xi < shape_.mode(i)) { ++xi; break; }
            xi = 1;
            auto& yi = y[static_cast<std::size_t>(i)];
            if (yi < shape_.mode(i)) { ++yi; break; }
            yi = 1;
        }
    }
    return mat;
}

DenseOperator DenseOperator::from_matrix(const Eigen::MatrixXd& mat, const Shape& shape) {
    const std::int64_t N = shape.state_count();
    if (mat.rows() != N || mat.cols() != N)
        throw std::invalid_argument("DenseOperator::from_matrix: size mismatch");
    DenseOperator a(shape);
    const int d = shape.order();
    std::vector<int> x(static_cast<std::size_t>(d), 1), y(static_cast<std::size_t>(d), 1);
    for (std::int64_t off = 0; off < a.size(); ++off) {
        std::int64_t r = 0, c = 0, stride = 1;
        for (int i = 0; i < d; ++i) {
            r += static_cast<std::int64_t>(x[static_cast<std::size_t>(i)] - 1) * stride;
            c += static_cast<std::int64_t>(y[static_cast<std::size_t>(i)] - 1) * stride;
            stride *= shape.mode(i);
        }
        a.entries_[static_cast<std::size_t>(off)] = mat(r, c);
        int i = 0;
        for (; i < d; ++i) {
            auto& xi = x[static_cast<std::size_t>(i)];
            if (xi < shape.mode(i)) { ++xi; break; }
            xi = 1;
            auto& yi = y[static_cast<std::size_t>(i)];
            if (yi < shape.mode(i)) { ++yi; break; }
            yi = 1;
        }
    }
    return a;
}

DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b) {
    std::vector<int> modes = a.shape().modes();
    modes.insert(modes.end(), b.shape().modes().begin(), b.shape().modes().end());
    DenseTensor out(Shape(std::move(modes), false));
    std::int64_t k = 0;
    for (std::int64_t j = 0; j < b.size(); ++j)
        for (std::int64_t i = 0; i < a.size(); ++i)
            out.flat(k++) = a.flat(i) * b.flat(j);
    return out;
}

double frobenius_norm(const DenseTensor& t) {
    double s = 0.0;
    for (double v : t.entries()) s += v * v;
    return std::sqrt(s);
}

double frobenius_norm(const DenseOperator& a) {
    double s = 0.0;
    for (double v : a.entries()) s += v * v;
    return std::sqrt(s);
}

DenseTensor dense_matvec(const DenseOperator& a, const DenseTensor& t) {
    if (!(a.shape() == t.shape()))
        throw std::invalid_argument("dense_matvec: shape mismatch");
    const Shape& s = t.shape();
    const std::int64_t N = s.state_count();
    const int d = s.order();
    DenseTensor out(s);
    // Fixed ascending-y summation order; x and y tracked as multi-indices.
    std::vector<int> x(static_cast<std::size_t>(d), 1);
    for (std::int64_t r = 0; r < N; ++r) {
        double acc = 0.0;
        std::vector<int> y(static_cast<std::size_t>(d), 1);
        for (std::int64_t c = 0; c < N; ++c) {
            acc += a.at(x, y) * t.flat(c);
            for (int i = 0; i < d; ++i) {
                auto& yi = y[static_cast<std::size_t>(i)];
                if (yi < s.mode(i)) { ++yi; break; }
                yi = 1;
            }
        }
        out.flat(r) = acc;
        for (int i = 0; i < d; ++i) {
            auto& xi = x[static_cast<std::size_t>(i)];
            if (xi < s.mode(i)) { ++xi; break; }
            xi = 1;
        }
    }
    return out;
}

} // namespace slimtt
