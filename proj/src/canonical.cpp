#include "slimtt/canonical.hpp"

#include <stdexcept>
#include <string>

namespace slimtt {

CanonicalTensor::CanonicalTensor(Shape s, std::vector<Eigen::MatrixXd> c)
    : shape(std::move(s)), cores(std::move(c)) {
    if (static_cast<int>(cores.size()) != shape.order())
        throw std::invalid_argument("CanonicalTensor: core count mismatch");
    const auto r = cores.front().rows();
    if (r < 1) throw std::invalid_argument("CanonicalTensor: rank must be >= 1");
    for (int i = 0; i < shape.order(); ++i) {
        const auto& m = cores[static_cast<std::size_t>(i)];
        if (m.rows() != r || m.cols() != shape.mode(i))
            throw std::invalid_argument("CanonicalTensor: core " + std::to_string(i + 1) +
                                        " has wrong dimensions");
    }
}

CanonicalOperator::CanonicalOperator(Shape s, std::vector<std::vector<Eigen::MatrixXd>> c)
    : shape(std::move(s)), cores(std::move(c)) {
    if (static_cast<int>(cores.size()) != shape.order())
        throw std::invalid_argument("CanonicalOperator: core count mismatch");
    const auto r = cores.front().size();
    if (r < 1) throw std::invalid_argument("CanonicalOperator: rank must be >= 1");
    for (int i = 0; i < shape.order(); ++i) {
        const auto& list = cores[static_cast<std::size_t>(i)];
        if (list.size() != r)
            throw std::invalid_argument("CanonicalOperator: core " + std::to_string(i + 1) +
                                        " has wrong rank");
        for (const auto& m : list)
            if (m.rows() != shape.mode(i) || m.cols() != shape.mode(i))
                throw std::invalid_argument("CanonicalOperator: block of cell " +
                                            std::to_string(i + 1) + " has wrong dimensions");
    }
}

TtTensor to_tt(const CanonicalTensor& c) {
    const int d = c.shape.order();
    const int r = c.rank();
    std::vector<Core3> cores;
    for (int i = 0; i < d; ++i) {
        const auto& m = c.cores[static_cast<std::size_t>(i)];
        const int n = c.shape.mode(i);
        const int l0 = (i == 0) ? 1 : r;
        const int l1 = (i == d - 1) ? 1 : r;
        Core3 core(l0, n, l1);
        for (int k = 0; k < r; ++k)
            for (int x = 0; x < n; ++x) {
                if (i == 0)
                    core(0, x, (d == 1) ? 0 : k) += m(k, x);
                else if (i == d - 1)
                    core(k, x, 0) = m(k, x);
                else
                    core(k, x, k) = m(k, x);
            }
        cores.push_back(std::move(core));
    }
    return {c.shape, std::move(cores)};
}

TtOperator to_tt(const CanonicalOperator& c) {
    const int d = c.shape.order();
    const int r = c.rank();
    std::vector<Core4> cores;
    for (int i = 0; i < d; ++i) {
        const auto& list = c.cores[static_cast<std::size_t>(i)];
        const int n = c.shape.mode(i);
        const int l0 = (i == 0) ? 1 : r;
        const int l1 = (i == d - 1) ? 1 : r;
        Core4 core(l0, n, l1);
        for (int k = 0; k < r; ++k) {
            const auto& m = list[static_cast<std::size_t>(k)];
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) {
                    if (i == 0)
                        core(0, x, y, (d == 1) ? 0 : k) += m(x, y);
                    else if (i == d - 1)
                        core(k, x, y, 0) = m(x, y);
                    else
                        core(k, x, y, k) = m(x, y);
                }
        }
        cores.push_back(std::move(core));
    }
    return {c.shape, std::move(cores)};
}

} // namespace slimtt
