#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace slimtt {

/// State-space skeleton of a nearest-neighbor interaction system: the
/// per-cell mode sizes n_1..n_d plus the cyclic/non-cyclic distinction.
///
/// Cell states are 1-based throughout the public API, matching the
/// convention that each cell lives on {1,...,n_i}.
class Shape {
public:
    Shape(std::vector<int> modes, bool cyclic = false);

    int order() const { return static_cast<int>(modes_.size()); }
    int mode(int i) const { return modes_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& modes() const { return modes_; }
    bool cyclic() const { return cyclic_; }

    /// Number of edges carrying two-cell couplings: d-1, or d if cyclic.
    int edge_count() const { return order() - 1 + (cyclic_ ? 1 : 0); }

    std::int64_t state_count() const;

    bool operator==(const Shape&) const = default;

private:
    std::vector<int> modes_;
    bool cyclic_;
};

/// Little-endian multi-index: phi(x) = 1 + sum_i (x_i - 1) prod_{j<i} n_j.
/// Components are 1-based; the returned linear index is 1-based as well.
/// Throws std::out_of_range naming the offending cell if a component is
/// outside {1,...,n_i}.
std::int64_t multi_index(std::span<const int> x, const Shape& shape);

/// Inverse of multi_index: 1-based linear index k to the 1-based state vector.
std::vector<int> inverse_multi_index(std::int64_t k, const Shape& shape);

} // namespace slimtt
