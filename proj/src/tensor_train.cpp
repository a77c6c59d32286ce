#include "slimtt/tensor_train.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace slimtt {

namespace {

void check_chain(int d, std::span<const int> modes,
                 const std::vector<std::pair<int, std::pair<int, int>>>& dims) {
    // dims[i] = (n_i, (r_{i-1}, r_i))
    if (static_cast<int>(dims.size()) != d)
        throw std::invalid_argument("tt: core count does not match shape order");
    for (int i = 0; i < d; ++i) {
        if (dims[static_cast<std::size_t>(i)].first != modes[static_cast<std::size_t>(i)])
            throw std::invalid_argument("tt: core " + std::to_string(i + 1) +
                                        " mode size does not match shape");
    }
    if (dims.front().second.first != 1 || dims.back().second.second != 1)
        throw std::invalid_argument("tt: boundary ranks must equal 1");
    for (int i = 0; i + 1 < d; ++i)
        if (dims[static_cast<std::size_t>(i)].second.second !=
            dims[static_cast<std::size_t>(i + 1)].second.first)
            throw std::invalid_argument("tt: rank mismatch between cores " + std::to_string(i + 1) +
                                        " and " + std::to_string(i + 2));
}

} // namespace

Eigen::MatrixXd Core4::block(int k0, int k1) const {
    Eigen::MatrixXd m(n_, n_);
    for (int y = 0; y < n_; ++y)
        for (int x = 0; x < n_; ++x) m(x, y) = (*this)(k0, x, y, k1);
    return m;
}

void Core4::set_block(int k0, int k1, const Eigen::MatrixXd& m) {
    for (int y = 0; y < n_; ++y)
        for (int x = 0; x < n_; ++x) (*this)(k0, x, y, k1) = m(x, y);
}

TtTensor::TtTensor(Shape shape, std::vector<Core3> cores)
    : shape_(std::move(shape)), cores_(std::move(cores)) {
    std::vector<std::pair<int, std::pair<int, int>>> dims;
    dims.reserve(cores_.size());
    for (const auto& c : cores_) dims.push_back({c.mode(), {c.left_rank(), c.right_rank()}});
    check_chain(shape_.order(), shape_.modes(), dims);
}

TtOperator::TtOperator(Shape shape, std::vector<Core4> cores)
    : shape_(std::move(shape)), cores_(std::move(cores)) {
    std::vector<std::pair<int, std::pair<int, int>>> dims;
    dims.reserve(cores_.size());
    for (const auto& c : cores_) dims.push_back({c.mode(), {c.left_rank(), c.right_rank()}});
    check_chain(shape_.order(), shape_.modes(), dims);
}

std::vector<int> TtTensor::ranks() const {
    std::vector<int> r;
    r.reserve(cores_.size() + 1);
    r.push_back(cores_.front().left_rank());
    for (const auto& c : cores_) r.push_back(c.right_rank());
    return r;
}

std::vector<int> TtOperator::ranks() const {
    std::vector<int> r;
    r.reserve(cores_.size() + 1);
    r.push_back(cores_.front().left_rank());
    for (const auto& c : cores_) r.push_back(c.right_rank());
    return r;
}

// -- construction -----------------------------------------------------------

TtTensor tt_zero(const Shape& shape) {
    std::vector<Core3> cores;
    for (int i = 0; i < shape.order(); ++i) cores.emplace_back(1, shape.mode(i), 1);
    return {shape, std::move(cores)};
}

TtTensor tt_unit(const Shape& shape, std::span<const int> x) {
    if (static_cast<int>(x.size()) != shape.order())
        throw std::invalid_argument("tt_unit: state length mismatch");
    std::vector<Core3> cores;
    for (int i = 0; i < shape.order(); ++i) {
        const int xi = x[static_cast<std::size_t>(i)];
        if (xi < 1 || xi > shape.mode(i))
            throw std::out_of_range("tt_unit: state component for cell " + std::to_string(i + 1) +
                                    " out of range");
        Core3 c(1, shape.mode(i), 1);
        c(0, xi - 1, 0) = 1.0;
        cores.push_back(std::move(c));
    }
    return {shape, std::move(cores)};
}

TtTensor tt_ones(const Shape& shape) {
    std::vector<Core3> cores;
    for (int i = 0; i < shape.order(); ++i) {
        Core3 c(1, shape.mode(i), 1);
        for (int x = 0; x < shape.mode(i); ++x) c(0, x, 0) = 1.0;
        cores.push_back(std::move(c));
    }
    return {shape, std::move(cores)};
}

TtOperator tt_identity(const Shape& shape) {
    std::vector<Core4> cores;
    for (int i = 0; i < shape.order(); ++i) {
        Core4 c(1, shape.mode(i), 1);
        for (int x = 0; x < shape.mode(i); ++x) c(0, x, x, 0) = 1.0;
        cores.push_back(std::move(c));
    }
    return {shape, std::move(cores)};
}

// -- conversion -------------------------------------------------------------

DenseTensor to_full(const TtTensor& t) {
    Eigen::MatrixXd prefix = Eigen::MatrixXd::Ones(1, 1);
    for (const auto& c : t.cores()) {
        Eigen::MatrixXd q = prefix * c.right_unfold(); // N x (n*r1), column-major
        prefix = Eigen::Map<const Eigen::MatrixXd>(q.data(), q.rows() * c.mode(), c.right_rank());
    }
    DenseTensor out(t.shape());
    Eigen::Map<Eigen::VectorXd>(out.entries().data(), prefix.rows()) = prefix.col(0);
    return out;
}

DenseOperator to_full(const TtOperator& a) {
    Eigen::MatrixXd prefix = Eigen::MatrixXd::Ones(1, 1);
    for (const auto& c : a.cores()) {
        Eigen::MatrixXd q = prefix * c.right_unfold(); // N x (n*n*r1)
        prefix = Eigen::Map<const Eigen::MatrixXd>(q.data(), q.rows() * c.mode() * c.mode(),
                                                   c.right_rank());
    }
    // The prefix index order (x_1, y_1, x_2, y_2, ...) little-endian is
    // exactly the DenseOperator storage convention.
    DenseOperator out(a.shape());
    Eigen::Map<Eigen::VectorXd>(out.entries().data(), prefix.rows()) = prefix.col(0);
    return out;
}

// -- arithmetic -------------------------------------------------------------

TtTensor tt_add(const TtTensor& a, const TtTensor& b) {
    if (!(a.shape() == b.shape())) throw std::invalid_argument("tt_add: shape mismatch");
    const int d = a.order();
    if (d == 1) {
        Core3 c(1, a.shape().mode(0), 1);
        for (int x = 0; x < a.shape().mode(0); ++x)
            c(0, x, 0) = a.core(0)(0, x, 0) + b.core(0)(0, x, 0);
        return {a.shape(), {std::move(c)}};
    }
    std::vector<Core3> cores;
    for (int i = 0; i < d; ++i) {
        const Core3& ca = a.core(i);
        const Core3& cb = b.core(i);
        const int n = ca.mode();
        const int l0 = (i == 0) ? 1 : ca.left_rank() + cb.left_rank();
        const int l1 = (i == d - 1) ? 1 : ca.right_rank() + cb.right_rank();
        Core3 c(l0, n, l1);
        const int offs0 = (i == 0) ? 0 : ca.left_rank();
        const int offs1 = (i == d - 1) ? 0 : ca.right_rank();
        for (int k0 = 0; k0 < ca.left_rank(); ++k0)
            for (int x = 0; x < n; ++x)
                for (int k1 = 0; k1 < ca.right_rank(); ++k1) c(k0, x, k1) = ca(k0, x, k1);
        for (int k0 = 0; k0 < cb.left_rank(); ++k0)
            for (int x = 0; x < n; ++x)
                for (int k1 = 0; k1 < cb.right_rank(); ++k1)
                    c((i == 0) ? 0 : offs0 + k0, x, (i == d - 1) ? 0 : offs1 + k1) += cb(k0, x, k1);
        cores.push_back(std::move(c));
    }
    return {a.shape(), std::move(cores)};
}

TtOperator tt_add(const TtOperator& a, const TtOperator& b) {
    if (!(a.shape() == b.shape())) throw std::invalid_argument("tt_add: shape mismatch");
    const int d = a.order();
    if (d == 1) {
        Core4 c(1, a.shape().mode(0), 1);
        c.set_block(0, 0, a.core(0).block(0, 0) + b.core(0).block(0, 0));
        return {a.shape(), {std::move(c)}};
    }
    std::vector<Core4> cores;
    for (int i = 0; i < d; ++i) {
        const Core4& ca = a.core(i);
        const Core4& cb = b.core(i);
        const int n = ca.mode();
        const int l0 = (i == 0) ? 1 : ca.left_rank() + cb.left_rank();
        const int l1 = (i == d - 1) ? 1 : ca.right_rank() + cb.right_rank();
        Core4 c(l0, n, l1);
        const int offs0 = (i == 0) ? 0 : ca.left_rank();
        const int offs1 = (i == d - 1) ? 0 : ca.right_rank();
        for (int k0 = 0; k0 < ca.left_rank(); ++k0)
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    for (int k1 = 0; k1 < ca.right_rank(); ++k1)
                        c(k0, x, y, k1) = ca(k0, x, y, k1);
        for (int k0 = 0; k0 < cb.left_rank(); ++k0)
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    for (int k1 = 0; k1 < cb.right_rank(); ++k1)
                        c((i == 0) ? 0 : offs0 + k0, x, y, (i == d - 1) ? 0 : offs1 + k1) +=
                            cb(k0, x, y, k1);
        cores.push_back(std::move(c));
    }
    return {a.shape(), std::move(cores)};
}

TtTensor tt_scale(TtTensor t, double s) {
    for (double& v : t.core(0).data()) v *= s;
    return t;
}

TtOperator tt_scale(TtOperator a, double s) {
    for (double& v : a.core(0).data()) v *= s;
    return a;
}

TtTensor tt_matvec(const TtOperator& a, const TtTensor& t) {
    if (!(a.shape() == t.shape())) throw std::invalid_argument("tt_matvec: shape mismatch");
    const int d = a.order();
    std::vector<Core3> cores;
    for (int i = 0; i < d; ++i) {
        const Core4& ca = a.core(i);
        const Core3& ct = t.core(i);
        const int n = ca.mode();
        const int rA0 = ca.left_rank(), rA1 = ca.right_rank();
        const int rT0 = ct.left_rank(), rT1 = ct.right_rank();
        Core3 c(rA0 * rT0, n, rA1 * rT1);
        for (int a1 = 0; a1 < rA1; ++a1)
            for (int t1 = 0; t1 < rT1; ++t1)
                for (int x = 0; x < n; ++x)
                    for (int a0 = 0; a0 < rA0; ++a0)
                        for (int t0 = 0; t0 < rT0; ++t0) {
                            double acc = 0.0;
                            for (int y = 0; y < n; ++y) acc += ca(a0, x, y, a1) * ct(t0, y, t1);
                            c(a0 + rA0 * t0, x, a1 + rA1 * t1) = acc;
                        }
        cores.push_back(std::move(c));
    }
    return {a.shape(), std::move(cores)};
}

double tt_dot(const TtTensor& a, const TtTensor& b) {
    if (!(a.shape() == b.shape())) throw std::invalid_argument("tt_dot: shape mismatch");
    Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
    for (int i = 0; i < a.order(); ++i) {
        const Core3& ca = a.core(i);
        const Core3& cb = b.core(i);
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(ca.right_rank(), cb.right_rank());
        for (int x = 0; x < ca.mode(); ++x) {
            Eigen::MatrixXd sa(ca.left_rank(), ca.right_rank());
            for (int k0 = 0; k0 < ca.left_rank(); ++k0)
                for (int k1 = 0; k1 < ca.right_rank(); ++k1) sa(k0, k1) = ca(k0, x, k1);
            Eigen::MatrixXd sb(cb.left_rank(), cb.right_rank());
            for (int k0 = 0; k0 < cb.left_rank(); ++k0)
                for (int k1 = 0; k1 < cb.right_rank(); ++k1) sb(k0, k1) = cb(k0, x, k1);
            next += sa.transpose() * env * sb;
        }
        env = std::move(next);
    }
    return env(0, 0);
}

double tt_norm(const TtTensor& t) {
    // Concentrate the norm in the first core; more accurate than sqrt(dot).
    TtTensor r = orthogonalize(t, Direction::Right);
    return r.core(0).left_unfold().norm();
}

double tt_sum(const TtTensor& t) {
    Eigen::RowVectorXd env = Eigen::RowVectorXd::Ones(1);
    for (int i = 0; i < t.order(); ++i) {
        const Core3& c = t.core(i);
        Eigen::RowVectorXd next = Eigen::RowVectorXd::Zero(c.right_rank());
        for (int k1 = 0; k1 < c.right_rank(); ++k1) {
            double acc = 0.0;
            for (int x = 0; x < c.mode(); ++x)
                for (int k0 = 0; k0 < c.left_rank(); ++k0) acc += env(k0) * c(k0, x, k1);
            next(k1) = acc;
        }
        env = std::move(next);
    }
    return env(0);
}

// -- core manipulation ------------------------------------------------------

Core3 rank_transpose(const Core3& c) {
    Core3 out(c.right_rank(), c.mode(), c.left_rank());
    for (int k0 = 0; k0 < c.left_rank(); ++k0)
        for (int x = 0; x < c.mode(); ++x)
            for (int k1 = 0; k1 < c.right_rank(); ++k1) out(k1, x, k0) = c(k0, x, k1);
    return out;
}

Core4 rank_transpose(const Core4& c) {
    Core4 out(c.right_rank(), c.mode(), c.left_rank());
    for (int k0 = 0; k0 < c.left_rank(); ++k0)
        for (int x = 0; x < c.mode(); ++x)
            for (int y = 0; y < c.mode(); ++y)
                for (int k1 = 0; k1 < c.right_rank(); ++k1) out(k1, x, y, k0) = c(k0, x, y, k1);
    return out;
}

namespace {

Core3 from_matrix_core(const Eigen::MatrixXd& m, int r0, int n, int r1) {
    // m is the left unfolding (r0*n) x r1 of the new core.
    Core3 c(r0, n, r1);
    Eigen::Map<Eigen::MatrixXd>(c.data().data(), static_cast<Eigen::Index>(r0) * n, r1) = m;
    return c;
}

} // namespace

TtTensor orthogonalize(const TtTensor& t, Direction dir) {
    const int d = t.order();
    std::vector<Core3> cores = t.cores();
    if (dir == Direction::Left) {
        for (int i = 0; i + 1 < d; ++i) {
            Core3& c = cores[static_cast<std::size_t>(i)];
            const int r0 = c.left_rank(), n = c.mode(), r1 = c.right_rank();
            Eigen::MatrixXd lu = c.left_unfold();
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(lu);
            const int q = static_cast<int>(std::min<Eigen::Index>(lu.rows(), lu.cols()));
            Eigen::MatrixXd qmat =
                qr.householderQ() * Eigen::MatrixXd::Identity(lu.rows(), q);
            Eigen::MatrixXd rmat =
                qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
            c = from_matrix_core(qmat, r0, n, q);
            Core3& next = cores[static_cast<std::size_t>(i + 1)];
            Eigen::MatrixXd nu = rmat * next.right_unfold(); // q x (n2*r2)
            Core3 repl(q, next.mode(), next.right_rank());
            Eigen::Map<Eigen::MatrixXd>(repl.data().data(), q,
                                        static_cast<Eigen::Index>(next.mode()) *
                                            next.right_rank()) = nu;
            next = std::move(repl);
            (void)r1;
        }
    } else {
        for (int i = d - 1; i > 0; --i) {
            Core3& c = cores[static_cast<std::size_t>(i)];
            const int r0 = c.left_rank(), n = c.mode(), r1 = c.right_rank();
            Eigen::MatrixXd rut = Eigen::MatrixXd(c.right_unfold()).transpose(); // (n*r1) x r0
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(rut);
            const int q = static_cast<int>(std::min<Eigen::Index>(rut.rows(), rut.cols()));
            Eigen::MatrixXd qmat =
                qr.householderQ() * Eigen::MatrixXd::Identity(rut.rows(), q);
            Eigen::MatrixXd rmat =
                qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
            Core3 repl(q, n, r1);
            Eigen::Map<Eigen::MatrixXd>(repl.data().data(), q,
                                        static_cast<Eigen::Index>(n) * r1) = qmat.transpose();
            c = std::move(repl);
            Core3& prev = cores[static_cast<std::size_t>(i - 1)];
            Eigen::MatrixXd pu = prev.left_unfold() * rmat.transpose(); // (r*n) x q
            prev = from_matrix_core(pu, prev.left_rank(), prev.mode(), q);
            (void)r0;
        }
    }
    return {t.shape(), std::move(cores)};
}

TtTensor tt_truncate(const TtTensor& t, double eps, std::span<const int> rank_caps) {
    if (eps < 0) throw std::invalid_argument("tt_truncate: eps must be nonnegative");
    const int d = t.order();
    TtTensor r = orthogonalize(t, Direction::Right);
    std::vector<Core3> cores = r.cores();
    for (int i = 0; i + 1 < d; ++i) {
        Core3& c = cores[static_cast<std::size_t>(i)];
        Eigen::MatrixXd lu = c.left_unfold();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(lu, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& s = svd.singularValues();
        const int q = static_cast<int>(s.size());
        int gamma;
        if (s(0) == 0.0) {
            gamma = 1;
        } else if (eps == 0.0) {
            gamma = 0;
            for (int k = 0; k < q; ++k)
                if (s(k) > 1e-14 * s(0)) ++gamma;
            gamma = std::max(gamma, 1);
        } else {
            const double total = s.squaredNorm();
            double tail = 0.0;
            gamma = q;
            for (int k = q - 1; k >= 1; --k) {
                tail += s(k) * s(k);
                if (std::sqrt(tail) <= eps * std::sqrt(total))
                    gamma = k;
                else
                    break;
            }
        }
        if (!rank_caps.empty() && i < static_cast<int>(rank_caps.size()))
            gamma = std::min(gamma, std::max(1, rank_caps[static_cast<std::size_t>(i)]));
        Eigen::MatrixXd u = svd.matrixU().leftCols(gamma);
        Eigen::MatrixXd carry =
            s.head(gamma).asDiagonal() * svd.matrixV().leftCols(gamma).transpose();
        c = from_matrix_core(u, c.left_rank(), c.mode(), gamma);
        Core3& next = cores[static_cast<std::size_t>(i + 1)];
        Eigen::MatrixXd nu = carry * next.right_unfold();
        Core3 repl(gamma, next.mode(), next.right_rank());
        Eigen::Map<Eigen::MatrixXd>(repl.data().data(), gamma,
                                    static_cast<Eigen::Index>(next.mode()) * next.right_rank()) =
            nu;
        next = std::move(repl);
    }
    return {t.shape(), std::move(cores)};
}

} // namespace slimtt
