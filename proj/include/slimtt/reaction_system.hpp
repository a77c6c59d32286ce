#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "slimtt/shape.hpp"

namespace slimtt {

/// Elementary reaction on a single cell: net change p and the propensity
/// values on the cell's states 1..n_i.
struct SingleCellReaction {
    int net_change = 0;
    Eigen::VectorXd propensity;
};

/// Elementary reaction on an adjacent cell pair (i, i+1): net changes (p, q)
/// and the propensity matrix indexed by (state of i, state of i+1).
struct TwoCellReaction {
    int net_change_left = 0;
    int net_change_right = 0;
    Eigen::MatrixXd propensity;
};

/// Input of the Markov-generator SLIM construction: per-cell SCRs and
/// per-edge TCRs over a state-space shape. Cells and edges are 1-based;
/// edge i couples cells (i, i+1) and edge d couples (d, 1) when cyclic.
class ReactionSystem {
public:
    explicit ReactionSystem(Shape shape);

    const Shape& shape() const { return shape_; }

    void add_scr(int cell, SingleCellReaction r);
    void add_tcr(int edge, TwoCellReaction r);

    const std::vector<SingleCellReaction>& scrs(int cell) const;
    const std::vector<TwoCellReaction>& tcrs(int edge) const;

    int total_reactions() const;

    /// Model-file round trip. The format is a line-oriented text schema:
    ///   modes n1 n2 ... nd
    ///   cyclic 0|1
    ///   scr <cell> <p> constant:<c> | linear:<c> | values v1 ... vn
    ///   tcr <edge> <p> <q> constant:<c> | values v11 v12 ... (row-major)
    /// Lines starting with '#' are comments. Values parse as decimal doubles.
    static ReactionSystem load(std::istream& in);
    static ReactionSystem load_file(const std::string& path);
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;

private:
    Shape shape_;
    std::vector<std::vector<SingleCellReaction>> scrs_;
    std::vector<std::vector<TwoCellReaction>> tcrs_;
};

} // namespace slimtt
