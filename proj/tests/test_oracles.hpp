#pragma once

// Shared brute-force oracles for the unit and acceptance suites. Everything
// here is assembled entry by entry from elementary definitions and stays
// independent of the TT construction paths it checks.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "slimtt/models.hpp"
#include "slimtt/reaction_system.hpp"
#include "slimtt/slim.hpp"
#include "test_util.hpp"

namespace testutil {

using namespace slimtt;

// Dense sum of the nearest-neighbor canonical form: single-cell terms,
// per-edge coupling terms, and the wrap-around term for cyclic systems.
inline DenseOperator nnis_dense_op(const SlimOperatorBlocks& b, const Shape& s) {
    const int d = s.order();
    const std::int64_t N = s.state_count();
    DenseOperator out(s);
    auto add_product = [&](const std::vector<const Eigen::MatrixXd*>& factors) {
        for (std::int64_t kx = 1; kx <= N; ++kx) {
            const auto x = inverse_multi_index(kx, s);
            for (std::int64_t ky = 1; ky <= N; ++ky) {
                const auto y = inverse_multi_index(ky, s);
                double prod = 1.0;
                for (int i = 0; i < d; ++i)
                    prod *= (*factors[static_cast<std::size_t>(i)])(
                        x[static_cast<std::size_t>(i)] - 1, y[static_cast<std::size_t>(i)] - 1);
                out.at(x, y) += prod;
            }
        }
    };
    std::vector<Eigen::MatrixXd> eye;
    for (int i = 0; i < d; ++i) eye.push_back(Eigen::MatrixXd::Identity(s.mode(i), s.mode(i)));
    for (int i = 0; i < d; ++i) {
        std::vector<const Eigen::MatrixXd*> f;
        for (int j = 0; j < d; ++j)
            f.push_back(j == i ? &b.S[static_cast<std::size_t>(j)]
                               : &eye[static_cast<std::size_t>(j)]);
        add_product(f);
    }
    for (int i = 0; i + 1 < d; ++i)
        for (std::size_t mu = 0; mu < b.L[static_cast<std::size_t>(i)].size(); ++mu) {
            std::vector<const Eigen::MatrixXd*> f;
            for (int j = 0; j < d; ++j) {
                if (j == i)
                    f.push_back(&b.L[static_cast<std::size_t>(i)][mu]);
                else if (j == i + 1)
                    f.push_back(&b.M[static_cast<std::size_t>(i + 1)][mu]);
                else
                    f.push_back(&eye[static_cast<std::size_t>(j)]);
            }
            add_product(f);
        }
    if (s.cyclic())
        for (std::size_t mu = 0; mu < b.L.back().size(); ++mu) {
            std::vector<const Eigen::MatrixXd*> f;
            for (int j = 0; j < d; ++j) {
                if (j == d - 1)
                    f.push_back(&b.L.back()[mu]);
                else if (j == 0)
                    f.push_back(&b.M.front()[mu]);
                else
                    f.push_back(&eye[static_cast<std::size_t>(j)]);
            }
            add_product(f);
        }
    return out;
}

inline DenseTensor nnis_dense(const SlimTensorBlocks& b, const Shape& s) {
    const int d = s.order();
    DenseTensor out(s);
    auto add_product = [&](const std::vector<const Eigen::VectorXd*>& factors) {
        for (std::int64_t k = 1; k <= s.state_count(); ++k) {
            const auto x = inverse_multi_index(k, s);
            double prod = 1.0;
            for (int i = 0; i < d; ++i)
                prod *= (*factors[static_cast<std::size_t>(i)])(x[static_cast<std::size_t>(i)] - 1);
            out.flat(k - 1) += prod;
        }
    };
    std::vector<Eigen::VectorXd> one;
    for (int i = 0; i < d; ++i) one.push_back(Eigen::VectorXd::Ones(s.mode(i)));
    for (int i = 0; i < d; ++i) {
        std::vector<const Eigen::VectorXd*> f;
        for (int j = 0; j < d; ++j)
            f.push_back(j == i ? &b.S[static_cast<std::size_t>(j)]
                               : &one[static_cast<std::size_t>(j)]);
        add_product(f);
    }
    for (int i = 0; i + 1 < d; ++i)
        for (std::size_t mu = 0; mu < b.L[static_cast<std::size_t>(i)].size(); ++mu) {
            std::vector<const Eigen::VectorXd*> f;
            for (int j = 0; j < d; ++j) {
                if (j == i)
                    f.push_back(&b.L[static_cast<std::size_t>(i)][mu]);
                else if (j == i + 1)
                    f.push_back(&b.M[static_cast<std::size_t>(i + 1)][mu]);
                else
                    f.push_back(&one[static_cast<std::size_t>(j)]);
            }
            add_product(f);
        }
    if (s.cyclic())
        for (std::size_t mu = 0; mu < b.L.back().size(); ++mu) {
            std::vector<const Eigen::VectorXd*> f;
            for (int j = 0; j < d; ++j) {
                if (j == d - 1)
                    f.push_back(&b.L.back()[mu]);
                else if (j == 0)
                    f.push_back(&b.M.front()[mu]);
                else
                    f.push_back(&one[static_cast<std::size_t>(j)]);
            }
            add_product(f);
        }
    return out;
}

inline SlimOperatorBlocks random_op_blocks(const Shape& s, const std::vector<int>& betas,
                                           std::mt19937_64& g) {
    const int d = s.order();
    SlimOperatorBlocks b;
    b.L.resize(static_cast<std::size_t>(d));
    b.M.resize(static_cast<std::size_t>(d));
    auto rmat = [&](int n) {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = runif(g);
        return m;
    };
    for (int i = 0; i < d; ++i) b.S.push_back(rmat(s.mode(i)));
    for (int e = 0; e < s.edge_count(); ++e) {
        const int i = e;
        const int j = (e + 1) % d;
        for (int mu = 0; mu < betas[static_cast<std::size_t>(e)]; ++mu) {
            b.L[static_cast<std::size_t>(i)].push_back(rmat(s.mode(i)));
            b.M[static_cast<std::size_t>(j)].push_back(rmat(s.mode(j)));
        }
    }
    return b;
}

inline SlimTensorBlocks random_tensor_blocks(const Shape& s, const std::vector<int>& betas,
                                             std::mt19937_64& g) {
    const int d = s.order();
    SlimTensorBlocks b;
    b.L.resize(static_cast<std::size_t>(d));
    b.M.resize(static_cast<std::size_t>(d));
    auto rvec = [&](int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = runif(g);
        return v;
    };
    for (int i = 0; i < d; ++i) b.S.push_back(rvec(s.mode(i)));
    for (int e = 0; e < s.edge_count(); ++e) {
        const int i = e;
        const int j = (e + 1) % d;
        for (int mu = 0; mu < betas[static_cast<std::size_t>(e)]; ++mu) {
            b.L[static_cast<std::size_t>(i)].push_back(rvec(s.mode(i)));
            b.M[static_cast<std::size_t>(j)].push_back(rvec(s.mode(j)));
        }
    }
    return b;
}

// Numerical rank of the explicit matricized pair contraction (equilibrated).
inline int matricized_rank(const std::vector<Eigen::MatrixXd>& L,
                           const std::vector<Eigen::MatrixXd>& M, double tol = 1e-12) {
    const int m = static_cast<int>(L.front().rows());
    const int n = static_cast<int>(M.front().rows());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m * m, n * n);
    for (std::size_t mu = 0; mu < L.size(); ++mu)
        for (int x1 = 0; x1 < m; ++x1)
            for (int y1 = 0; y1 < m; ++y1)
                for (int x2 = 0; x2 < n; ++x2)
                    for (int y2 = 0; y2 < n; ++y2)
                        t(x1 + m * y1, x2 + n * y2) += L[mu](x1, y1) * M[mu](x2, y2);
    Eigen::VectorXd rn = t.rowwise().norm();
    Eigen::VectorXd cn = t.colwise().norm();
    for (Eigen::Index i = 0; i < rn.size(); ++i)
        if (rn(i) == 0) rn(i) = 1;
    for (Eigen::Index i = 0; i < cn.size(); ++i)
        if (cn(i) == 0) cn(i) = 1;
    Eigen::MatrixXd bal = rn.cwiseInverse().asDiagonal() * t * cn.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(bal);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > tol * s(0)) ++r;
    return r;
}

inline ReactionSystem random_system(int d, int n, bool cyclic, std::mt19937_64& g) {
    ReactionSystem rs{Shape(std::vector<int>(static_cast<std::size_t>(d), n), cyclic)};
    std::uniform_int_distribution<int> shift(-2, 2);
    std::uniform_int_distribution<int> count(0, 2);
    for (int c = 1; c <= d; ++c)
        for (int k = count(g); k > 0; --k) {
            SingleCellReaction r;
            r.net_change = shift(g);
            r.propensity = Eigen::VectorXd(n);
            for (int i = 0; i < n; ++i) r.propensity(i) = std::abs(runif(g));
            rs.add_scr(c, std::move(r));
        }
    for (int e = 1; e <= rs.shape().edge_count(); ++e)
        for (int k = count(g); k > 0; --k) {
            TwoCellReaction r;
            r.net_change_left = shift(g);
            r.net_change_right = shift(g);
            Eigen::MatrixXd a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a(i, j) = std::abs(runif(g));
            r.propensity = a;
            rs.add_tcr(e, std::move(r));
        }
    return rs;
}

inline double ising_energy(const std::vector<int>& state, double coupling, double field) {
    const int d = static_cast<int>(state.size());
    auto spin = [&](int i) { return state[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0; };
    double h = 0.0;
    for (int i = 0; i < d; ++i) h -= coupling * spin(i) * spin((i + 1) % d);
    for (int i = 0; i < d; ++i) h -= field * spin(i);
    return h;
}

// Dense assembly of the coupled-oscillator Hamiltonian straight from the
// per-cell terms: p^2/2m + (m w^2/2) x^2 + (cm/2)(x_i - x_{i+1})^2, periodic.
inline DenseOperator oscillator_dense_oracle(const OscillatorParams& p) {
    const int d = p.d;
    const int n = 2 * p.grid_halfwidth + 1;
    const Shape s(std::vector<int>(static_cast<std::size_t>(d), n), true);
    const double hmesh = 1.0 / p.grid_halfwidth;
    const Eigen::MatrixXd dp = momentum_stencil(p.grid_halfwidth);
    const Eigen::MatrixXd dx = position_grid(p.grid_halfwidth);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd kin = p.hbar * p.hbar / (2.0 * p.mass * hmesh * hmesh) * dp;
    const Eigen::MatrixXd pot = (p.mass * p.omega * p.omega / 2.0) * (dx * dx);
    const Eigen::MatrixXd halfsq = (p.coupling * p.mass / 2.0) * (dx * dx);
    const Eigen::MatrixXd cross = -(p.coupling * p.mass) * dx;

    DenseOperator out(s);
    const std::int64_t N = s.state_count();
    auto add_term = [&](const std::vector<const Eigen::MatrixXd*>& f) {
        for (std::int64_t kx = 1; kx <= N; ++kx) {
            const auto x = inverse_multi_index(kx, s);
            for (std::int64_t ky = 1; ky <= N; ++ky) {
                const auto y = inverse_multi_index(ky, s);
                double prod = 1.0;
                for (int i = 0; i < d; ++i)
                    prod *= (*f[static_cast<std::size_t>(i)])(x[static_cast<std::size_t>(i)] - 1,
                                                              y[static_cast<std::size_t>(i)] - 1);
                out.at(x, y) += prod;
            }
        }
    };
    for (int i = 0; i < d; ++i) {
        const int j = (i + 1) % d;
        std::vector<const Eigen::MatrixXd*> f(static_cast<std::size_t>(d), &eye);
        f[static_cast<std::size_t>(i)] = &kin;
        add_term(f);
        f[static_cast<std::size_t>(i)] = &pot;
        add_term(f);
        f[static_cast<std::size_t>(i)] = &halfsq;
        add_term(f);
        f[static_cast<std::size_t>(i)] = &eye;
        f[static_cast<std::size_t>(j)] = &halfsq;
        add_term(f);
        f[static_cast<std::size_t>(j)] = &eye;
        f[static_cast<std::size_t>(i)] = &cross;
        f[static_cast<std::size_t>(j)] = &dx;
        add_term(f);
    }
    return out;
}

} // namespace testutil
