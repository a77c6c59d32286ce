#include "slimtt/reaction_system.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace slimtt {

ReactionSystem::ReactionSystem(Shape shape)
    : shape_(std::move(shape)),
      scrs_(static_cast<std::size_t>(shape_.order())),
      tcrs_(static_cast<std::size_t>(shape_.edge_count())) {}

void ReactionSystem::add_scr(int cell, SingleCellReaction r) {
    if (cell < 1 || cell > shape_.order())
        throw std::out_of_range("add_scr: cell " + std::to_string(cell) + " out of range");
    const int n = shape_.mode(cell - 1);
    if (r.propensity.size() != n)
        throw std::invalid_argument("add_scr: propensity length must equal the cell mode size");
    if ((r.propensity.array() < 0).any())
        throw std::invalid_argument("add_scr: propensity entries must be nonnegative");
    scrs_[static_cast<std::size_t>(cell - 1)].push_back(std::move(r));
}

void ReactionSystem::add_tcr(int edge, TwoCellReaction r) {
    if (edge < 1 || edge > shape_.edge_count())
        throw std::out_of_range("add_tcr: edge " + std::to_string(edge) + " out of range");
    const int i = edge - 1;
    const int m = shape_.mode(i);
    const int n = shape_.mode((i + 1) % shape_.order());
    if (r.propensity.rows() != m || r.propensity.cols() != n)
        throw std::invalid_argument("add_tcr: propensity must be n_i x n_{i+1}");
    if ((r.propensity.array() < 0).any())
        throw std::invalid_argument("add_tcr: propensity entries must be nonnegative");
    tcrs_[static_cast<std::size_t>(i)].push_back(std::move(r));
}

const std::vector<SingleCellReaction>& ReactionSystem::scrs(int cell) const {
    if (cell < 1 || cell > shape_.order()) throw std::out_of_range("scrs: cell out of range");
    return scrs_[static_cast<std::size_t>(cell - 1)];
}

const std::vector<TwoCellReaction>& ReactionSystem::tcrs(int edge) const {
    if (edge < 1 || edge > shape_.edge_count()) throw std::out_of_range("tcrs: edge out of range");
    return tcrs_[static_cast<std::size_t>(edge - 1)];
}

int ReactionSystem::total_reactions() const {
    std::size_t k = 0;
    for (const auto& v : scrs_) k += v.size();
    for (const auto& v : tcrs_) k += v.size();
    return static_cast<int>(k);
}

namespace {

Eigen::VectorXd parse_propensity_vector(std::istringstream& ss, int n, const std::string& line) {
    std::string tok;
    if (!(ss >> tok)) throw std::runtime_error("model file: missing propensity in line: " + line);
    Eigen::VectorXd v(n);
    if (tok.rfind("constant:", 0) == 0) {
        const double c = std::stod(tok.substr(9));
        v.setConstant(c);
    } else if (tok.rfind("linear:", 0) == 0) {
        const double c = std::stod(tok.substr(7));
        for (int x = 0; x < n; ++x) v(x) = c * x;
    } else if (tok == "values") {
        for (int x = 0; x < n; ++x)
            if (!(ss >> v(x)))
                throw std::runtime_error("model file: expected " + std::to_string(n) +
                                         " values in line: " + line);
    } else {
        throw std::runtime_error("model file: unknown propensity spec '" + tok + "'");
    }
    return v;
}

Eigen::MatrixXd parse_propensity_matrix(std::istringstream& ss, int m, int n,
                                        const std::string& line) {
    std::string tok;
    if (!(ss >> tok)) throw std::runtime_error("model file: missing propensity in line: " + line);
    Eigen::MatrixXd a(m, n);
    if (tok.rfind("constant:", 0) == 0) {
        a.setConstant(std::stod(tok.substr(9)));
    } else if (tok == "values") {
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n; ++c)
                if (!(ss >> a(r, c)))
                    throw std::runtime_error("model file: expected " + std::to_string(m * n) +
                                             " values in line: " + line);
    } else {
        throw std::runtime_error("model file: unknown propensity spec '" + tok + "'");
    }
    return a;
}

} // namespace

ReactionSystem ReactionSystem::load(std::istream& in) {
    std::string line;
    std::vector<int> modes;
    bool cyclic = false;
    bool have_modes = false;
    // header
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "modes") {
            int n;
            while (ss >> n) modes.push_back(n);
            have_modes = true;
        } else if (key == "cyclic") {
            int c;
            if (!(ss >> c)) throw std::runtime_error("model file: bad cyclic line");
            cyclic = (c != 0);
            break;
        } else {
            throw std::runtime_error("model file: expected 'modes'/'cyclic', got: " + line);
        }
    }
    if (!have_modes) throw std::runtime_error("model file: missing 'modes' line");
    ReactionSystem rs{Shape(modes, cyclic)};
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "scr") {
            int cell, p;
            if (!(ss >> cell >> p)) throw std::runtime_error("model file: bad scr line: " + line);
            if (cell < 1 || cell > rs.shape().order())
                throw std::runtime_error("model file: scr cell out of range: " + line);
            SingleCellReaction r;
            r.net_change = p;
            r.propensity = parse_propensity_vector(ss, rs.shape().mode(cell - 1), line);
            rs.add_scr(cell, std::move(r));
        } else if (key == "tcr") {
            int edge, p, q;
            if (!(ss >> edge >> p >> q))
                throw std::runtime_error("model file: bad tcr line: " + line);
            if (edge < 1 || edge > rs.shape().edge_count())
                throw std::runtime_error("model file: tcr edge out of range: " + line);
            TwoCellReaction r;
            r.net_change_left = p;
            r.net_change_right = q;
            const int m = rs.shape().mode(edge - 1);
            const int n = rs.shape().mode(edge % rs.shape().order());
            r.propensity = parse_propensity_matrix(ss, m, n, line);
            rs.add_tcr(edge, std::move(r));
        } else {
            throw std::runtime_error("model file: unknown entry '" + key + "'");
        }
    }
    return rs;
}

ReactionSystem ReactionSystem::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load(in);
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void ReactionSystem::save(std::ostream& out) const {
    out << "# slimtt reaction-system model\n";
    out << "modes";
    for (int n : shape_.modes()) out << ' ' << n;
    out << "\ncyclic " << (shape_.cyclic() ? 1 : 0) << "\n";
    for (int c = 1; c <= shape_.order(); ++c)
        for (const auto& r : scrs(c)) {
            out << "scr " << c << ' ' << r.net_change << " values";
            for (int x = 0; x < r.propensity.size(); ++x) out << ' ' << fmt17(r.propensity(x));
            out << "\n";
        }
    for (int e = 1; e <= shape_.edge_count(); ++e)
        for (const auto& r : tcrs(e)) {
            out << "tcr " << e << ' ' << r.net_change_left << ' ' << r.net_change_right
                << " values";
            for (int i = 0; i < r.propensity.rows(); ++i)
                for (int j = 0; j < r.propensity.cols(); ++j) out << ' ' << fmt17(r.propensity(i, j));
            out << "\n";
        }
}

void ReactionSystem::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    save(out);
}

} // namespace slimtt
