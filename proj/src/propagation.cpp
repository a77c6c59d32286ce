#include "slimtt/propagation.hpp"

#include <stdexcept>
#include <string>

namespace slimtt {

std::vector<Eigen::VectorXd> marginals(const TtTensor& t) {
    const int d = t.order();
    // ones-contracted partial products from the left and from the right
    std::vector<Eigen::RowVectorXd> left(static_cast<std::size_t>(d + 1));
    std::vector<Eigen::VectorXd> right(static_cast<std::size_t>(d + 1));
    left[0] = Eigen::RowVectorXd::Ones(1);
    right[static_cast<std::size_t>(d)] = Eigen::VectorXd::Ones(1);
    for (int i = 0; i < d; ++i) {
        const Core3& c = t.core(i);
        Eigen::RowVectorXd next = Eigen::RowVectorXd::Zero(c.right_rank());
        for (int k1 = 0; k1 < c.right_rank(); ++k1)
            for (int x = 0; x < c.mode(); ++x)
                for (int k0 = 0; k0 < c.left_rank(); ++k0)
                    next(k1) += left[static_cast<std::size_t>(i)](k0) * c(k0, x, k1);
        left[static_cast<std::size_t>(i + 1)] = std::move(next);
    }
    for (int i = d - 1; i >= 0; --i) {
        const Core3& c = t.core(i);
        Eigen::VectorXd prev = Eigen::VectorXd::Zero(c.left_rank());
        for (int k0 = 0; k0 < c.left_rank(); ++k0)
            for (int x = 0; x < c.mode(); ++x)
                for (int k1 = 0; k1 < c.right_rank(); ++k1)
                    prev(k0) += c(k0, x, k1) * right[static_cast<std::size_t>(i + 1)](k1);
        right[static_cast<std::size_t>(i)] = std::move(prev);
    }
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const Core3& c = t.core(i);
        Eigen::VectorXd m = Eigen::VectorXd::Zero(c.mode());
        for (int x = 0; x < c.mode(); ++x) {
            double acc = 0.0;
            for (int k0 = 0; k0 < c.left_rank(); ++k0)
                for (int k1 = 0; k1 < c.right_rank(); ++k1)
                    acc += left[static_cast<std::size_t>(i)](k0) * c(k0, x, k1) *
                           right[static_cast<std::size_t>(i + 1)](k1);
            m(x) = acc;
        }
        out.push_back(std::move(m));
    }
    return out;
}

PropagationResult implicit_euler(const TtOperator& a, const TtTensor& initial,
                                 const PropagationConfig& pc, const AlsConfig& ac,
                                 const std::function<void(int, const TtTensor&)>& on_step) {
    if (pc.tau <= 0.0) throw std::invalid_argument("implicit_euler: tau must be positive");
    if (pc.steps < 1) throw std::invalid_argument("implicit_euler: need at least one step");
    const TtOperator sys = tt_add(tt_identity(a.shape()), tt_scale(a, -pc.tau));

    PropagationResult out{.records = {}, .state = initial, .max_eps = 0.0};
    out.records.reserve(static_cast<std::size_t>(pc.steps));
    for (int k = 1; k <= pc.steps; ++k) {
        AlsResult sol = [&] {
            try {
                return als_solve(sys, out.state, ac);
            } catch (const std::exception& e) {
                throw std::runtime_error("implicit_euler: step " + std::to_string(k) +
                                         " failed: " + e.what());
            }
        }();
        out.state = std::move(sol.solution);
        StepRecord rec;
        rec.step = k;
        rec.time = k * pc.tau;
        rec.eps = sol.residual;
        rec.mass = tt_sum(out.state);
        rec.marginals = marginals(out.state);
        for (const auto& lane : rec.marginals)
            rec.min_marginal = std::min(rec.min_marginal, lane.minCoeff());
        out.max_eps = std::max(out.max_eps, rec.eps);
        out.records.push_back(std::move(rec));
        if (on_step) on_step(k, out.state);
    }
    return out;
}

Eigen::VectorXd dense_expm_apply(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double t,
                                 int substeps) {
    if (substeps < 1) throw std::invalid_argument("dense_expm_apply: substeps must be >= 1");
    const double h = t / substeps;
    Eigen::VectorXd y = v;
    for (int k = 0; k < substeps; ++k) {
        const Eigen::VectorXd k1 = a * y;
        const Eigen::VectorXd k2 = a * (y + 0.5 * h * k1);
        const Eigen::VectorXd k3 = a * (y + 0.5 * h * k2);
        const Eigen::VectorXd k4 = a * (y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

} // namespace slimtt
