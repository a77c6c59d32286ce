#include "slimtt/master_equation.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "slimtt/slim.hpp"

namespace slimtt {

std::int64_t oracle_state_cap() {
    if (const char* env = std::getenv("SLIMTT_STATE_CAP")) {
        const long long v = std::atoll(env);
        if (v > 0) return v;
    }
    return 1000000;
}

namespace {

void check_cap(const Shape& shape) {
    const std::int64_t cap = oracle_state_cap();
    if (shape.state_count() > cap)
        throw std::runtime_error("dense oracle: state count " +
                                 std::to_string(shape.state_count()) + " exceeds cap " +
                                 std::to_string(cap) +
                                 "; reduce d/n or set SLIMTT_STATE_CAP to override");
}

// Reactions in canonical order: all SCRs (cells ascending, declaration order),
// then all TCRs (edges ascending, declaration order). Both oracle routes must
// walk this order so their per-entry accumulation sequences coincide.
struct FlatReaction {
    std::vector<int> cells;    // 0-based cells the reaction touches (1 or 2)
    std::vector<int> shifts;   // net change per touched cell
    const Eigen::VectorXd* vec = nullptr;
    const Eigen::MatrixXd* mat = nullptr;
};

std::vector<FlatReaction> flatten(const ReactionSystem& rs) {
    const Shape& shape = rs.shape();
    std::vector<FlatReaction> out;
    for (int c = 1; c <= shape.order(); ++c)
        for (const auto& r : rs.scrs(c))
            out.push_back({{c - 1}, {r.net_change}, &r.propensity, nullptr});
    for (int e = 1; e <= shape.edge_count(); ++e)
        for (const auto& r : rs.tcrs(e))
            out.push_back({{e - 1, e % shape.order()},
                           {r.net_change_left, r.net_change_right},
                           nullptr,
                           &r.propensity});
    return out;
}

} // namespace

DenseOperator dense_generator(const ReactionSystem& rs) {
    const Shape& shape = rs.shape();
    check_cap(shape);
    const int d = shape.order();
    const std::int64_t N = shape.state_count();
    DenseOperator a(shape);

    for (const FlatReaction& r : flatten(rs)) {
        // Per-cell factors of the multidimensional shift operator G_mu and of
        // the rank-one propensity tensor a_mu (identity / ones elsewhere).
        std::vector<Eigen::MatrixXd> g;
        g.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) g.push_back(Eigen::MatrixXd::Identity(shape.mode(i), shape.mode(i)));
        for (std::size_t t = 0; t < r.cells.size(); ++t)
            g[static_cast<std::size_t>(r.cells[t])] =
                shift_matrix(shape.mode(r.cells[t]), -r.shifts[t]);

        auto prop_value = [&](std::span<const int> y) {
            double v = 1.0;
            if (r.vec) v *= (*r.vec)(y[static_cast<std::size_t>(r.cells[0])] - 1);
            if (r.mat)
                v *= (*r.mat)(y[static_cast<std::size_t>(r.cells[0])] - 1,
                              y[static_cast<std::size_t>(r.cells[1])] - 1);
            return v;
        };

        // Pass 1: A += G_mu * diag(a_mu).
        std::vector<int> x(static_cast<std::size_t>(d), 1), y(static_cast<std::size_t>(d), 1);
        for (std::int64_t col = 0; col < N; ++col) {
            const double av = prop_value(y);
            if (av != 0.0) {
                std::fill(x.begin(), x.end(), 1);
                for (std::int64_t row = 0; row < N; ++row) {
                    double gv = 1.0;
                    for (int i = 0; i < d; ++i)
                        gv *= g[static_cast<std::size_t>(i)](x[static_cast<std::size_t>(i)] - 1,
                                                             y[static_cast<std::size_t>(i)] - 1);
                    if (gv != 0.0) a.at(x, y) += gv * av;
                    for (int i = 0; i < d; ++i) {
                        auto& xi = x[static_cast<std::size_t>(i)];
                        if (xi < shape.mode(i)) { ++xi; break; }
                        xi = 1;
                    }
                }
            }
            for (int i = 0; i < d; ++i) {
                auto& yi = y[static_cast<std::size_t>(i)];
                if (yi < shape.mode(i)) { ++yi; break; }
                yi = 1;
            }
        }
        // Pass 2: A -= diag(a_mu).
        std::fill(y.begin(), y.end(), 1);
        for (std::int64_t col = 0; col < N; ++col) {
            const double av = prop_value(y);
            if (av != 0.0) a.at(y, y) -= av;
            for (int i = 0; i < d; ++i) {
                auto& yi = y[static_cast<std::size_t>(i)];
                if (yi < shape.mode(i)) { ++yi; break; }
                yi = 1;
            }
        }
    }
    return a;
}

DenseOperator elementwise_generator(const ReactionSystem& rs) {
    const Shape& shape = rs.shape();
    check_cap(shape);
    const int d = shape.order();
    const std::int64_t N = shape.state_count();
    DenseOperator a(shape);

    for (const FlatReaction& r : flatten(rs)) {
        std::vector<int> y(static_cast<std::size_t>(d), 1);
        std::vector<int> x(static_cast<std::size_t>(d));
        // Pass 1: shifted contributions X = Y + xi (dropped when out of range).
        for (std::int64_t col = 0; col < N; ++col) {
            double av = 1.0;
            if (r.vec) av *= (*r.vec)(y[static_cast<std::size_t>(r.cells[0])] - 1);
            if (r.mat)
                av *= (*r.mat)(y[static_cast<std::size_t>(r.cells[0])] - 1,
                               y[static_cast<std::size_t>(r.cells[1])] - 1);
            if (av != 0.0) {
                x.assign(y.begin(), y.end());
                bool ok = true;
                for (std::size_t t = 0; t < r.cells.size(); ++t) {
                    int& xc = x[static_cast<std::size_t>(r.cells[t])];
                    xc += r.shifts[t];
                    if (xc < 1 || xc > shape.mode(r.cells[t])) { ok = false; break; }
                }
                if (ok) a.at(x, y) += av;
            }
            for (int i = 0; i < d; ++i) {
                auto& yi = y[static_cast<std::size_t>(i)];
                if (yi < shape.mode(i)) { ++yi; break; }
                yi = 1;
            }
        }
        // Pass 2: diagonal drain -a_mu(Y).
        std::fill(y.begin(), y.end(), 1);
        for (std::int64_t col = 0; col < N; ++col) {
            double av = 1.0;
            if (r.vec) av *= (*r.vec)(y[static_cast<std::size_t>(r.cells[0])] - 1);
            if (r.mat)
                av *= (*r.mat)(y[static_cast<std::size_t>(r.cells[0])] - 1,
                               y[static_cast<std::size_t>(r.cells[1])] - 1);
            if (av != 0.0) a.at(y, y) -= av;
            for (int i = 0; i < d; ++i) {
                auto& yi = y[static_cast<std::size_t>(i)];
                if (yi < shape.mode(i)) { ++yi; break; }
                yi = 1;
            }
        }
    }
    return a;
}

GeneratorReport verify_generator(const DenseOperator& a) {
    const Eigen::MatrixXd m = a.to_matrix();
    GeneratorReport rep;
    rep.min_offdiag = 0.0;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (r != c && m(r, c) < rep.min_offdiag) rep.min_offdiag = m(r, c);
    rep.offdiag_nonneg = rep.min_offdiag >= 0.0;
    rep.max_abs_colsum = m.colwise().sum().cwiseAbs().maxCoeff();
    rep.conserving = rep.max_abs_colsum <= 1e-12;
    return rep;
}

} // namespace slimtt
