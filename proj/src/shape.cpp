#include "slimtt/shape.hpp"

#include <stdexcept>
#include <string>

namespace slimtt {

Shape::Shape(std::vector<int> modes, bool cyclic)
    : modes_(std::move(modes)), cyclic_(cyclic) {
    if (modes_.empty())
        throw std::invalid_argument("Shape: need at least one cell");
    for (std::size_t i = 0; i < modes_.size(); ++i)
        if (modes_[i] < 1)
            throw std::invalid_argument("Shape: mode size of cell " + std::to_string(i + 1) +
                                        " must be positive");
    if (cyclic_ && modes_.size() < 3)
        throw std::invalid_argument("Shape: cyclic systems have at least 3 cells");
}

std::int64_t Shape::state_count() const {
    std::int64_t n = 1;
    for (int m : modes_) n *= m;
    return n;
}

std::int64_t multi_index(std::span<const int> x, const Shape& shape) {
    if (static_cast<int>(x.size()) != shape.order())
        throw std::invalid_argument("multi_index: component count does not match shape order");
    std::int64_t k = 0;
    std::int64_t stride = 1;
    for (int i = 0; i < shape.order(); ++i) {
        const int xi = x[static_cast<std::size_t>(i)];
        if (xi < 1 || xi > shape.mode(i))
            throw std::out_of_range("multi_index: component for cell " + std::to_string(i + 1) +
                                    " is outside {1,...," + std::to_string(shape.mode(i)) + "}");
        k += static_cast<std::int64_t>(xi - 1) * stride;
        stride *= shape.mode(i);
    }
    return k + 1;
}

std::vector<int> inverse_multi_index(std::int64_t k, const Shape& shape) {
    if (k < 1 || k > shape.state_count())
        throw std::out_of_range("inverse_multi_index: linear index out of range");
    std::vector<int> x(static_cast<std::size_t>(shape.order()));
    std::int64_t rest = k - 1;
    for (int i = 0; i < shape.order(); ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<int>(rest % shape.mode(i)) + 1;
        rest /= shape.mode(i);
    }
    return x;
}

} // namespace slimtt
