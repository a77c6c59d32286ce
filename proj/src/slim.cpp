#include "slimtt/slim.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <stdexcept>
#include <string>

namespace slimtt {

Eigen::MatrixXd shift_matrix(int n, int k) {
    if (n < 1) throw std::invalid_argument("shift_matrix: n must be >= 1");
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        const int y = x + k;
        if (y >= 0 && y < n) g(x, y) = 1.0;
    }
    return g;
}

namespace {

// Shared assembly for operator and tensor mode. Mode-specific pieces:
// the block type, the core type, the identity block, and block placement.

struct OperatorMode {
    using Block = Eigen::MatrixXd;
    using Core = Core4;
    static Block identity(int n) { return Eigen::MatrixXd::Identity(n, n); }
    static bool valid(const Block& b, int n) { return b.rows() == n && b.cols() == n; }
    static void put(Core& c, int k0, int k1, const Block& b) { c.set_block(k0, k1, b); }
};

struct TensorMode {
    using Block = Eigen::VectorXd;
    using Core = Core3;
    static Block identity(int n) { return Eigen::VectorXd::Ones(n); }
    static bool valid(const Block& b, int n) { return b.size() == n; }
    static void put(Core& c, int k0, int k1, const Block& b) {
        for (int x = 0; x < c.mode(); ++x) c(k0, x, k1) = b(x);
    }
};

template <class Mode, class Blocks>
std::vector<typename Mode::Core> assemble_slim(const Blocks& blocks, const Shape& shape,
                                               bool declared_homogeneous) {
    const int d = shape.order();
    const bool cyc = shape.cyclic();
    if (d < 2) throw std::invalid_argument("build_slim: need at least 2 cells");
    if (static_cast<int>(blocks.S.size()) != d || static_cast<int>(blocks.L.size()) != d ||
        static_cast<int>(blocks.M.size()) != d)
        throw std::invalid_argument("build_slim: block lists must have one entry per cell");
    for (int i = 0; i < d; ++i) {
        if (!Mode::valid(blocks.S[static_cast<std::size_t>(i)], shape.mode(i)))
            throw std::invalid_argument("build_slim: S block of cell " + std::to_string(i + 1) +
                                        " has wrong dimensions");
        for (const auto& b : blocks.L[static_cast<std::size_t>(i)])
            if (!Mode::valid(b, shape.mode(i)))
                throw std::invalid_argument("build_slim: L block of cell " +
                                            std::to_string(i + 1) + " has wrong dimensions");
        for (const auto& b : blocks.M[static_cast<std::size_t>(i)])
            if (!Mode::valid(b, shape.mode(i)))
                throw std::invalid_argument("build_slim: M block of cell " +
                                            std::to_string(i + 1) + " has wrong dimensions");
    }
    // Pairing: len(L_i) = len(M_{i+1}); cyclic couples L_d with M_1.
    for (int i = 0; i + 1 < d; ++i)
        if (blocks.L[static_cast<std::size_t>(i)].size() !=
            blocks.M[static_cast<std::size_t>(i + 1)].size())
            throw std::invalid_argument("build_slim: len(L_" + std::to_string(i + 1) +
                                        ") != len(M_" + std::to_string(i + 2) + ")");
    if (cyc) {
        if (blocks.L.back().size() != blocks.M.front().size())
            throw std::invalid_argument("build_slim: cyclic edge needs len(L_d) == len(M_1)");
    } else {
        if (!blocks.L.back().empty() || !blocks.M.front().empty())
            throw std::invalid_argument(
                "build_slim: non-cyclic systems must not carry L_d / M_1 blocks");
    }
    if (declared_homogeneous) {
        auto exact_equal = [](const auto& a, const auto& b) {
            return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
        };
        auto equal_lists = [&](const auto& a, const auto& b) {
            if (a.size() != b.size()) return false;
            for (std::size_t k = 0; k < a.size(); ++k)
                if (!exact_equal(a[k], b[k])) return false;
            return true;
        };
        const char* msg = "build_slim: declared homogeneous but blocks differ across cells";
        for (int i = 1; i < d; ++i)
            if (shape.mode(i) != shape.mode(0) ||
                !exact_equal(blocks.S[static_cast<std::size_t>(i)], blocks.S.front()))
                throw std::invalid_argument(msg);
        // Interior coupling lists must match; non-cyclic boundaries carry none.
        const int last_l = cyc ? d : d - 1;
        for (int i = 1; i < last_l; ++i)
            if (!equal_lists(blocks.L[static_cast<std::size_t>(i)], blocks.L.front()))
                throw std::invalid_argument(msg);
        const int first_m = cyc ? 0 : 1;
        for (int i = first_m; i < d; ++i)
            if (i != 1 && !equal_lists(blocks.M[static_cast<std::size_t>(i)],
                                       blocks.M[1]))
                throw std::invalid_argument(msg);
    }

    const int beta_d = cyc ? static_cast<int>(blocks.L.back().size()) : 0;
    auto beta = [&](int i) { return static_cast<int>(blocks.L[static_cast<std::size_t>(i)].size()); };

    std::vector<typename Mode::Core> cores;
    cores.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const int n = shape.mode(i);
        const auto ident = Mode::identity(n);
        if (i == 0) {
            // [S_1  L_1  I_1  M_1]
            const int w = 2 + beta(0) + beta_d;
            typename Mode::Core c(1, n, w);
            Mode::put(c, 0, 0, blocks.S.front());
            for (int k = 0; k < beta(0); ++k) Mode::put(c, 0, 1 + k, blocks.L.front()[static_cast<std::size_t>(k)]);
            Mode::put(c, 0, 1 + beta(0), ident);
            for (int k = 0; k < beta_d; ++k)
                Mode::put(c, 0, 2 + beta(0) + k, blocks.M.front()[static_cast<std::size_t>(k)]);
            cores.push_back(std::move(c));
        } else if (i == d - 1) {
            // [I_d  M_d  S_d  L_d]^T
            const int h = 2 + beta(d - 2) + beta_d;
            typename Mode::Core c(h, n, 1);
            Mode::put(c, 0, 0, ident);
            for (int k = 0; k < beta(d - 2); ++k)
                Mode::put(c, 1 + k, 0, blocks.M.back()[static_cast<std::size_t>(k)]);
            Mode::put(c, 1 + beta(d - 2), 0, blocks.S.back());
            for (int k = 0; k < beta_d; ++k)
                Mode::put(c, 2 + beta(d - 2) + k, 0, blocks.L.back()[static_cast<std::size_t>(k)]);
            cores.push_back(std::move(c));
        } else {
            // [ I    0   0   0 ]
            // [ M_i  0   0   0 ]
            // [ S_i  L_i I   0 ]
            // [ 0    0   0   J ]
            const int h = 2 + beta(i - 1) + beta_d;
            const int w = 2 + beta(i) + beta_d;
            typename Mode::Core c(h, n, w);
            Mode::put(c, 0, 0, ident);
            for (int k = 0; k < beta(i - 1); ++k)
                Mode::put(c, 1 + k, 0, blocks.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
            Mode::put(c, 1 + beta(i - 1), 0, blocks.S[static_cast<std::size_t>(i)]);
            for (int k = 0; k < beta(i); ++k)
                Mode::put(c, 1 + beta(i - 1), 1 + k,
                          blocks.L[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
            Mode::put(c, 1 + beta(i - 1), 1 + beta(i), ident);
            for (int j = 0; j < beta_d; ++j) Mode::put(c, 2 + beta(i - 1) + j, 2 + beta(i) + j, ident);
            cores.push_back(std::move(c));
        }
    }
    return cores;
}

} // namespace

TtOperator build_slim(const SlimOperatorBlocks& blocks, const Shape& shape,
                      bool declared_homogeneous) {
    return {shape, assemble_slim<OperatorMode>(blocks, shape, declared_homogeneous)};
}

TtTensor build_slim(const SlimTensorBlocks& blocks, const Shape& shape,
                    bool declared_homogeneous) {
    return {shape, assemble_slim<TensorMode>(blocks, shape, declared_homogeneous)};
}

TtOperator build_slim_homogeneous(const Eigen::MatrixXd& S,
                                  const std::vector<Eigen::MatrixXd>& L,
                                  const std::vector<Eigen::MatrixXd>& M, int d, bool cyclic) {
    if (L.size() != M.size())
        throw std::invalid_argument("build_slim_homogeneous: len(L) != len(M)");
    const int n = static_cast<int>(S.rows());
    Shape shape(std::vector<int>(static_cast<std::size_t>(d), n), cyclic);
    SlimOperatorBlocks b;
    b.S.assign(static_cast<std::size_t>(d), S);
    b.L.assign(static_cast<std::size_t>(d), L);
    b.M.assign(static_cast<std::size_t>(d), M);
    if (!cyclic) {
        b.L.back().clear();
        b.M.front().clear();
    }
    return build_slim(b, shape, true);
}

TtTensor build_slim_homogeneous(const Eigen::VectorXd& S, const std::vector<Eigen::VectorXd>& L,
                                const std::vector<Eigen::VectorXd>& M, int d, bool cyclic) {
    if (L.size() != M.size())
        throw std::invalid_argument("build_slim_homogeneous: len(L) != len(M)");
    const int n = static_cast<int>(S.size());
    Shape shape(std::vector<int>(static_cast<std::size_t>(d), n), cyclic);
    SlimTensorBlocks b;
    b.S.assign(static_cast<std::size_t>(d), S);
    b.L.assign(static_cast<std::size_t>(d), L);
    b.M.assign(static_cast<std::size_t>(d), M);
    if (!cyclic) {
        b.L.back().clear();
        b.M.front().clear();
    }
    return build_slim(b, shape, true);
}

CompressedPair compress_pair(const std::vector<Eigen::MatrixXd>& L,
                             const std::vector<Eigen::MatrixXd>& M, double rel_tol) {
    if (L.empty() || M.empty()) throw std::invalid_argument("compress_pair: empty input list");
    if (L.size() != M.size()) throw std::invalid_argument("compress_pair: list length mismatch");
    const int beta = static_cast<int>(L.size());
    const int m = static_cast<int>(L.front().rows());
    const int n = static_cast<int>(M.front().rows());
    for (const auto& b : L)
        if (b.rows() != m || b.cols() != m)
            throw std::invalid_argument("compress_pair: L blocks must be square and equal-sized");
    for (const auto& b : M)
        if (b.rows() != n || b.cols() != n)
            throw std::invalid_argument("compress_pair: M blocks must be square and equal-sized");

    // Factored form of the matricized contraction: T = P Q^T with
    // column mu = vec(L_mu) / vec(M_mu) (little-endian (x,y) vectorization).
    Eigen::MatrixXd P(m * m, beta), Q(n * n, beta);
    for (int mu = 0; mu < beta; ++mu) {
        P.col(mu) = Eigen::Map<const Eigen::VectorXd>(L[static_cast<std::size_t>(mu)].data(),
                                                      static_cast<Eigen::Index>(m) * m);
        Q.col(mu) = Eigen::Map<const Eigen::VectorXd>(M[static_cast<std::size_t>(mu)].data(),
                                                      static_cast<Eigen::Index>(n) * n);
    }

    // Row/column equilibration of T computed without forming T:
    // row_norms^2 = diag(P Gq P^T), col_norms^2 = diag(Q Gp Q^T).
    const Eigen::MatrixXd gp = P.transpose() * P;
    const Eigen::MatrixXd gq = Q.transpose() * Q;
    const Eigen::ArrayXd rn2 = ((P * gq).array() * P.array()).rowwise().sum();
    const Eigen::ArrayXd cn2 = ((Q * gp).array() * Q.array()).rowwise().sum();
    Eigen::VectorXd rn = rn2.max(0.0).sqrt().matrix();
    Eigen::VectorXd cn = cn2.max(0.0).sqrt().matrix();
    for (Eigen::Index i = 0; i < rn.size(); ++i)
        if (rn(i) == 0.0) rn(i) = 1.0;
    for (Eigen::Index i = 0; i < cn.size(); ++i)
        if (cn(i) == 0.0) cn(i) = 1.0;

    const Eigen::MatrixXd pb = rn.cwiseInverse().asDiagonal() * P;
    const Eigen::MatrixXd qb = cn.cwiseInverse().asDiagonal() * Q;

    Eigen::HouseholderQR<Eigen::MatrixXd> qrp(pb), qrq(qb);
    const int kp = static_cast<int>(std::min<Eigen::Index>(pb.rows(), pb.cols()));
    const int kq = static_cast<int>(std::min<Eigen::Index>(qb.rows(), qb.cols()));
    const Eigen::MatrixXd qpm = qrp.householderQ() * Eigen::MatrixXd::Identity(pb.rows(), kp);
    const Eigen::MatrixXd rpm = qrp.matrixQR().topRows(kp).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd qqm = qrq.householderQ() * Eigen::MatrixXd::Identity(qb.rows(), kq);
    const Eigen::MatrixXd rqm = qrq.matrixQR().topRows(kq).triangularView<Eigen::Upper>();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rpm * rqm.transpose(),
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();

    CompressedPair out;
    if (s.size() == 0 || s(0) == 0.0) return out; // exactly zero contraction
    int gamma = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > rel_tol * s(0)) ++gamma;
    out.rank = gamma;

    // Undo the equilibration: T = Dr (U Sigma V^T) Dc.
    const Eigen::MatrixXd ut = rn.asDiagonal() * (qpm * svd.matrixU().leftCols(gamma));
    const Eigen::MatrixXd wt = (s.head(gamma).asDiagonal() *
                                (svd.matrixV().leftCols(gamma).transpose() * qqm.transpose())) *
                               cn.asDiagonal();
    out.left.reserve(static_cast<std::size_t>(gamma));
    out.right.reserve(static_cast<std::size_t>(gamma));
    for (int k = 0; k < gamma; ++k) {
        const Eigen::VectorXd col = ut.col(k);
        out.left.emplace_back(Eigen::Map<const Eigen::MatrixXd>(col.data(), m, m));
        const Eigen::VectorXd row = wt.row(k).transpose();
        out.right.emplace_back(Eigen::Map<const Eigen::MatrixXd>(row.data(), n, n));
    }
    return out;
}

TtOperator build_slim_markov(const ReactionSystem& rs, bool compress,
                             std::vector<int>* edge_counts) {
    const Shape& shape = rs.shape();
    const int d = shape.order();
    if (edge_counts) edge_counts->assign(static_cast<std::size_t>(shape.edge_count()), 0);
    SlimOperatorBlocks blocks;
    blocks.S.reserve(static_cast<std::size_t>(d));
    blocks.L.assign(static_cast<std::size_t>(d), {});
    blocks.M.assign(static_cast<std::size_t>(d), {});

    for (int c = 1; c <= d; ++c) {
        const int n = shape.mode(c - 1);
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
        for (const auto& r : rs.scrs(c))
            s += (shift_matrix(n, -r.net_change) - Eigen::MatrixXd::Identity(n, n)) *
                 r.propensity.asDiagonal();
        blocks.S.push_back(std::move(s));
    }

    for (int e = 1; e <= shape.edge_count(); ++e) {
        const int i = e - 1;            // left cell, 0-based
        const int j = e % d;            // right cell, 0-based (wraps on the cyclic edge)
        const int m = shape.mode(i);
        const int n = shape.mode(j);
        std::vector<Eigen::MatrixXd> lvec, mvec;
        for (const auto& r : rs.tcrs(e)) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(r.propensity,
                                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
            const Eigen::VectorXd& s = svd.singularValues();
            if (s.size() == 0 || s(0) == 0.0) continue;
            const Eigen::MatrixXd gl = shift_matrix(m, -r.net_change_left);
            const Eigen::MatrixXd gr = shift_matrix(n, -r.net_change_right);
            for (Eigen::Index k = 0; k < s.size(); ++k) {
                if (s(k) <= 1e-12 * s(0)) break;
                const Eigen::VectorXd u = s(k) * svd.matrixU().col(k);
                const Eigen::VectorXd v = svd.matrixV().col(k);
                // shifted factor, then the negated unshifted factor
                lvec.emplace_back(gl * u.asDiagonal());
                lvec.emplace_back(-Eigen::MatrixXd(u.asDiagonal()));
                mvec.emplace_back(gr * v.asDiagonal());
                mvec.emplace_back(Eigen::MatrixXd(v.asDiagonal()));
            }
        }
        if (compress && !lvec.empty()) {
            CompressedPair cp = compress_pair(lvec, mvec);
            lvec = std::move(cp.left);
            mvec = std::move(cp.right);
        }
        if (edge_counts)
            (*edge_counts)[static_cast<std::size_t>(e - 1)] = static_cast<int>(lvec.size());
        blocks.L[static_cast<std::size_t>(i)] = std::move(lvec);
        blocks.M[static_cast<std::size_t>(j)] = std::move(mvec);
    }

    return build_slim(blocks, shape);
}

SlimStorage storage_count(const Shape& shape, std::span<const int> betas) {
    const int d = shape.order();
    if (static_cast<int>(betas.size()) != shape.edge_count())
        throw std::invalid_argument("storage_count: need one beta per edge");
    const int beta_d = shape.cyclic() ? betas[static_cast<std::size_t>(d - 1)] : 0;
    auto beta = [&](int i) { // coupling count of edge (i, i+1), 0-based; beta(-1) wraps
        if (i < 0) return beta_d;
        if (i >= static_cast<int>(betas.size())) return 0;
        return betas[static_cast<std::size_t>(i)];
    };
    SlimStorage out;
    out.per_core.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const std::int64_t n = shape.mode(i);
        std::int64_t cnt;
        if (i == 0)
            cnt = (beta_d + beta(0) + 1) * n * n + n;
        else if (i == d - 1)
            cnt = (beta(d - 2) + beta_d + 1) * n * n + n;
        else
            cnt = (beta(i - 1) + beta(i) + 1) * n * n + (2 + beta_d) * n;
        out.per_core[static_cast<std::size_t>(i)] = cnt;
        out.total += cnt;
    }
    return out;
}

} // namespace slimtt
