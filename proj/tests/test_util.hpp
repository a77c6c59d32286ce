#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "slimtt/canonical.hpp"
#include "slimtt/dense.hpp"
#include "slimtt/shape.hpp"
#include "slimtt/tensor_train.hpp"

namespace testutil {

using namespace slimtt;

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline double runif(std::mt19937_64& g) {
    return std::uniform_real_distribution<double>(-1.0, 1.0)(g);
}

inline DenseTensor random_dense(const Shape& s, std::mt19937_64& g) {
    DenseTensor t(s);
    for (auto& v : t.entries()) v = runif(g);
    return t;
}

inline DenseOperator random_dense_op(const Shape& s, std::mt19937_64& g) {
    DenseOperator a(s);
    for (auto& v : a.entries()) v = runif(g);
    return a;
}

inline CanonicalTensor random_canonical(const Shape& s, int rank, std::mt19937_64& g) {
    std::vector<Eigen::MatrixXd> cores;
    for (int i = 0; i < s.order(); ++i) {
        Eigen::MatrixXd m(rank, s.mode(i));
        for (int r = 0; r < rank; ++r)
            for (int x = 0; x < s.mode(i); ++x) m(r, x) = runif(g);
        cores.push_back(std::move(m));
    }
    return {s, std::move(cores)};
}

inline CanonicalOperator random_canonical_op(const Shape& s, int rank, std::mt19937_64& g) {
    std::vector<std::vector<Eigen::MatrixXd>> cores;
    for (int i = 0; i < s.order(); ++i) {
        std::vector<Eigen::MatrixXd> list;
        for (int r = 0; r < rank; ++r) {
            Eigen::MatrixXd m(s.mode(i), s.mode(i));
            for (int x = 0; x < s.mode(i); ++x)
                for (int y = 0; y < s.mode(i); ++y) m(x, y) = runif(g);
            list.push_back(std::move(m));
        }
        cores.push_back(std::move(list));
    }
    return {s, std::move(cores)};
}

inline TtTensor random_tt(const Shape& s, int rank, std::mt19937_64& g) {
    return to_tt(random_canonical(s, rank, g));
}

inline TtOperator random_tt_op(const Shape& s, int rank, std::mt19937_64& g) {
    return to_tt(random_canonical_op(s, rank, g));
}

// Brute-force dense evaluation of a canonical tensor: plain nested loops,
// independent of the TT conversion path.
inline DenseTensor canonical_dense(const CanonicalTensor& c) {
    DenseTensor out(c.shape);
    const int d = c.shape.order();
    for (std::int64_t k = 1; k <= c.shape.state_count(); ++k) {
        const std::vector<int> x = inverse_multi_index(k, c.shape);
        double acc = 0.0;
        for (int r = 0; r < c.rank(); ++r) {
            double prod = 1.0;
            for (int i = 0; i < d; ++i)
                prod *= c.cores[static_cast<std::size_t>(i)](r, x[static_cast<std::size_t>(i)] - 1);
            acc += prod;
        }
        out.flat(k - 1) = acc;
    }
    return out;
}

inline DenseOperator canonical_dense_op(const CanonicalOperator& c) {
    DenseOperator out(c.shape);
    const int d = c.shape.order();
    const std::int64_t N = c.shape.state_count();
    for (std::int64_t kx = 1; kx <= N; ++kx) {
        const std::vector<int> x = inverse_multi_index(kx, c.shape);
        for (std::int64_t ky = 1; ky <= N; ++ky) {
            const std::vector<int> y = inverse_multi_index(ky, c.shape);
            double acc = 0.0;
            for (int r = 0; r < c.rank(); ++r) {
                double prod = 1.0;
                for (int i = 0; i < d; ++i)
                    prod *= c.cores[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)](
                        x[static_cast<std::size_t>(i)] - 1, y[static_cast<std::size_t>(i)] - 1);
                acc += prod;
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

inline double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

inline double max_abs(const DenseOperator& a) {
    double m = 0.0;
    for (double v : a.entries()) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs(const DenseTensor& a) {
    double m = 0.0;
    for (double v : a.entries()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace testutil
