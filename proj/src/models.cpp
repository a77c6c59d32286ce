#include "slimtt/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slimtt/slim.hpp"

namespace slimtt {

double TollParams::f_in(double t) const {
    return 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma2_in) *
               std::exp(-0.5 * t * t / sigma2_in) +
           in_offset;
}

double TollParams::f_out(double t) const {
    const double dl = t - nu_out_left;
    const double dr = t - nu_out_right;
    return 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma2_out_left) *
               std::exp(-0.5 * dl * dl / sigma2_out_left) +
           1.0 / std::sqrt(2.0 * std::numbers::pi * sigma2_out_right) *
               std::exp(-0.5 * dr * dr / sigma2_out_right);
}

Eigen::MatrixXd momentum_stencil(int m) {
    if (m < 1) throw std::invalid_argument("momentum_stencil: m must be >= 1");
    const int n = 2 * m + 1;
    Eigen::MatrixXd dp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        dp(i, i) = 2.0;
        if (i + 1 < n) {
            dp(i, i + 1) = -1.0;
            dp(i + 1, i) = -1.0;
        }
    }
    return dp;
}

Eigen::MatrixXd position_grid(int m) {
    if (m < 1) throw std::invalid_argument("position_grid: m must be >= 1");
    const int n = 2 * m + 1;
    const double h = 1.0 / m;
    Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(n, n);
    for (int k = -m; k <= m; ++k) dx(k + m, k + m) = k * h;
    return dx;
}

TtTensor build_ising(const IsingParams& p) {
    if (p.d < 3) throw std::invalid_argument("build_ising: cyclic model needs d >= 3");
    Eigen::VectorXd spin(2);
    spin << 1.0, -1.0;
    const Eigen::VectorXd s = -p.field * spin;
    const std::vector<Eigen::VectorXd> l = {-p.coupling * spin};
    const std::vector<Eigen::VectorXd> m = {spin};
    return build_slim_homogeneous(s, l, m, p.d, true);
}

TtOperator build_oscillator(const OscillatorParams& p) {
    if (p.d < 3) throw std::invalid_argument("build_oscillator: cyclic model needs d >= 3");
    const double h = 1.0 / p.grid_halfwidth;
    const Eigen::MatrixXd dp = momentum_stencil(p.grid_halfwidth);
    const Eigen::MatrixXd dx = position_grid(p.grid_halfwidth);
    const Eigen::MatrixXd dx2 = dx * dx;
    const Eigen::MatrixXd s = p.hbar * p.hbar / (2.0 * p.mass * h * h) * dp +
                              (p.mass * p.omega * p.omega / 2.0) * dx2 +
                              p.coupling * p.mass * dx2;
    const std::vector<Eigen::MatrixXd> l = {-p.coupling * p.mass * dx};
    const std::vector<Eigen::MatrixXd> m = {dx};
    return build_slim_homogeneous(s, l, m, p.d, true);
}

ReactionSystem build_cascade(const CascadeParams& p) {
    if (p.d < 2) throw std::invalid_argument("build_cascade: need at least 2 genes");
    if (p.n < 2) throw std::invalid_argument("build_cascade: need at least 2 states per gene");
    ReactionSystem rs{Shape(std::vector<int>(static_cast<std::size_t>(p.d), p.n), false)};

    SingleCellReaction creation;
    creation.net_change = +1;
    creation.propensity = Eigen::VectorXd::Constant(p.n, p.creation_rate);
    rs.add_scr(1, std::move(creation));

    for (int c = 1; c <= p.d; ++c) {
        SingleCellReaction destruction;
        destruction.net_change = -1;
        destruction.propensity = Eigen::VectorXd::Zero(p.n);
        for (int x = 0; x < p.n; ++x) destruction.propensity(x) = p.destruction_rate * x;
        rs.add_scr(c, std::move(destruction));
    }

    for (int e = 1; e <= p.d - 1; ++e) {
        TwoCellReaction creation_by_neighbor;
        creation_by_neighbor.net_change_left = 0;
        creation_by_neighbor.net_change_right = +1;
        Eigen::MatrixXd a(p.n, p.n);
        for (int x = 0; x < p.n; ++x) {
            const double hill = x / (p.hill_offset + x);
            for (int y = 0; y < p.n; ++y) a(x, y) = hill;
        }
        creation_by_neighbor.propensity = std::move(a);
        rs.add_tcr(e, std::move(creation_by_neighbor));
    }
    return rs;
}

ReactionSystem build_co_oxidation(const CoOxidationParams& p) {
    if (p.d < 3) throw std::invalid_argument("build_co_oxidation: cyclic model needs d >= 3");
    ReactionSystem rs{Shape(std::vector<int>(static_cast<std::size_t>(p.d), 3), true)};

    for (int c = 1; c <= p.d; ++c) {
        SingleCellReaction co_ad;
        co_ad.net_change = +2;
        co_ad.propensity = Eigen::VectorXd::Zero(3);
        co_ad.propensity(0) = p.k_co_ad;
        rs.add_scr(c, std::move(co_ad));

        SingleCellReaction co_de;
        co_de.net_change = -2;
        co_de.propensity = Eigen::VectorXd::Zero(3);
        co_de.propensity(2) = p.k_co_de;
        rs.add_scr(c, std::move(co_de));
    }

    struct Tcr {
        int row, col;    // 1-based nonzero position
        double rate;
        int pl, pr;
    };
    const Tcr tcrs[] = {
        {1, 1, p.k_o2_ad, +1, +1},   // dissociative O2 adsorption
        {2, 2, p.k_o2_de, -1, -1},   // associative O2 desorption
        {3, 2, p.k_co2_de, -2, -1},  // CO2 formation, CO on the left site
        {2, 3, p.k_co2_de, -1, -2},  // CO2 formation, CO on the right site
        {2, 1, p.k_o_diff, -1, +1},  // O diffusion rightwards
        {1, 2, p.k_o_diff, +1, -1},  // O diffusion leftwards
        {3, 1, p.k_co_diff, -2, +2}, // CO diffusion rightwards
        {1, 3, p.k_co_diff, +2, -2}, // CO diffusion leftwards
    };
    for (int e = 1; e <= p.d; ++e)
        for (const Tcr& t : tcrs) {
            TwoCellReaction r;
            r.net_change_left = t.pl;
            r.net_change_right = t.pr;
            r.propensity = Eigen::MatrixXd::Zero(3, 3);
            r.propensity(t.row - 1, t.col - 1) = t.rate;
            rs.add_tcr(e, std::move(r));
        }
    return rs;
}

ReactionSystem build_toll(const TollParams& p) {
    if (p.d < 2) throw std::invalid_argument("build_toll: need at least 2 lanes");
    if (p.n < 2) throw std::invalid_argument("build_toll: need at least 2 queue states");
    ReactionSystem rs{Shape(std::vector<int>(static_cast<std::size_t>(p.d), p.n), false)};

    for (int i = 1; i <= p.d; ++i) {
        const double t = p.lane_position(i);

        SingleCellReaction arrival;
        arrival.net_change = +1;
        arrival.propensity = Eigen::VectorXd::Constant(p.n, p.f_in(t));
        rs.add_scr(i, std::move(arrival));

        SingleCellReaction departure; // zero on the empty lane
        departure.net_change = -1;
        departure.propensity = Eigen::VectorXd::Constant(p.n, p.f_out(t));
        departure.propensity(0) = 0.0;
        rs.add_scr(i, std::move(departure));
    }

    for (int e = 1; e <= p.d - 1; ++e) {
        TwoCellReaction right; // car moves from lane e to lane e+1
        right.net_change_left = -1;
        right.net_change_right = +1;
        right.propensity = Eigen::MatrixXd::Zero(p.n, p.n);
        for (int x = 1; x <= p.n; ++x)
            for (int y = 1; y <= p.n; ++y) right.propensity(x - 1, y - 1) = p.f_change(x - y);
        rs.add_tcr(e, std::move(right));

        TwoCellReaction left;
        left.net_change_left = +1;
        left.net_change_right = -1;
        left.propensity = Eigen::MatrixXd::Zero(p.n, p.n);
        for (int x = 1; x <= p.n; ++x)
            for (int y = 1; y <= p.n; ++y) left.propensity(x - 1, y - 1) = p.f_change(y - x);
        rs.add_tcr(e, std::move(left));
    }
    return rs;
}

} // namespace slimtt
