// slimtt command-line tool: build SLIM tensor-train operators for
// nearest-neighbor models, validate them against dense oracles, and run
// implicit-Euler propagation with an ALS linear solver.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "slimtt/als.hpp"
#include "slimtt/master_equation.hpp"
#include "slimtt/models.hpp"
#include "slimtt/propagation.hpp"
#include "slimtt/serialization.hpp"
#include "slimtt/slim.hpp"

namespace {

constexpr const char* kVersion = "slimtt 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ModelOptions {
    std::string name;
    std::optional<int> d;
    std::optional<int> n;
};

slimtt::ReactionSystem make_reaction_system(const ModelOptions& mo) {
    using namespace slimtt;
    if (mo.name == "ising" || mo.name == "oscillator")
        throw std::invalid_argument("model '" + mo.name +
                                    "' is a Hamiltonian, not a reaction system");
    if (mo.name == "cascade") {
        CascadeParams p;
        if (mo.d) p.d = *mo.d;
        if (mo.n) p.n = *mo.n;
        return build_cascade(p);
    }
    if (mo.name == "co2") {
        CoOxidationParams p;
        if (mo.d) p.d = *mo.d;
        return build_co_oxidation(p);
    }
    if (mo.name == "toll") {
        TollParams p;
        if (mo.d) p.d = *mo.d;
        if (mo.n) p.n = *mo.n;
        return build_toll(p);
    }
    // otherwise treat the name as a model-file path
    return ReactionSystem::load_file(mo.name);
}

void write_manifest(const std::string& out_path, const std::string& command,
                    const ModelOptions& mo, const std::string& extra) {
    std::ofstream m(out_path);
    if (!m) throw std::runtime_error("cannot write manifest " + out_path);
    m << "# slimtt run manifest\n";
    m << "version " << kVersion << "\n";
    m << "command " << command << "\n";
    m << "model " << mo.name << "\n";
    if (mo.d) m << "d " << *mo.d << "\n";
    if (mo.n) m << "n " << *mo.n << "\n";
    m << extra;
}

int cmd_build(const ModelOptions& mo, bool compress, const std::string& out,
              const std::string& report) {
    using namespace slimtt;
    std::vector<int> betas;
    std::vector<int> ranks;
    std::string kind;
    Shape shape({1});
    if (mo.name == "ising") {
        IsingParams p;
        if (mo.d) p.d = *mo.d;
        TtTensor h = build_ising(p);
        ranks = h.ranks();
        shape = h.shape();
        betas.assign(static_cast<std::size_t>(shape.edge_count()), 1);
        kind = "tensor";
        if (!out.empty()) save_tt_file(h, out);
    } else if (mo.name == "oscillator") {
        OscillatorParams p;
        if (mo.d) p.d = *mo.d;
        if (mo.n) p.grid_halfwidth = *mo.n;
        TtOperator h = build_oscillator(p);
        ranks = h.ranks();
        shape = h.shape();
        betas.assign(static_cast<std::size_t>(shape.edge_count()), 1);
        kind = "operator";
        if (!out.empty()) save_tt_file(h, out);
    } else {
        ReactionSystem rs = make_reaction_system(mo);
        TtOperator a = build_slim_markov(rs, compress, &betas);
        ranks = a.ranks();
        shape = a.shape();
        kind = "operator";
        if (!out.empty()) save_tt_file(a, out);
    }

    std::ostringstream rep;
    rep << "model " << mo.name << " (" << kind << ", d=" << shape.order()
        << ", cyclic=" << (shape.cyclic() ? 1 : 0) << ")\n";
    rep << "ranks";
    for (int r : ranks) rep << ' ' << r;
    rep << "\nedge couplings";
    for (int b : betas) rep << ' ' << b;
    rep << "\n";
    if (kind == "operator") { // block-storage accounting applies to matrix blocks
        const SlimStorage st = storage_count(shape, betas);
        rep << "storage per core";
        for (auto c : st.per_core) rep << ' ' << c;
        rep << "\nstorage total " << st.total << "\n";
    }
    std::cout << rep.str();
    if (!report.empty()) {
        std::ofstream rf(report);
        rf << rep.str();
    }
    if (!out.empty()) {
        std::cout << "wrote " << out << "\n";
        write_manifest(out + ".manifest", "build", mo,
                       std::string("compress ") + (compress ? "1" : "0") + "\nout " + out + "\n");
    }
    return kExitOk;
}

// Direct Hamiltonian evaluations used as validation oracles.
double ising_direct(const std::vector<int>& state, double coupling, double field) {
    const int d = static_cast<int>(state.size());
    auto spin = [&](int i) { return state[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0; };
    double h = 0.0;
    for (int i = 0; i < d; ++i) h -= coupling * spin(i) * spin((i + 1) % d);
    for (int i = 0; i < d; ++i) h -= field * spin(i);
    return h;
}

// Dense assembly of the coupled-oscillator Hamiltonian, term by term:
// sum_i p_i^2/2m + (m w^2/2) x_i^2 + (cm/2)(x_i - x_{i+1})^2, periodic.
slimtt::DenseOperator oscillator_dense_oracle(const slimtt::OscillatorParams& p) {
    using namespace slimtt;
    const int d = p.d;
    const int n = 2 * p.grid_halfwidth + 1;
    const Shape s(std::vector<int>(static_cast<std::size_t>(d), n), true);
    const double hmesh = 1.0 / p.grid_halfwidth;
    const Eigen::MatrixXd dp = momentum_stencil(p.grid_halfwidth);
    const Eigen::MatrixXd dx = position_grid(p.grid_halfwidth);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd kin = p.hbar * p.hbar / (2.0 * p.mass * hmesh * hmesh) * dp;
    const Eigen::MatrixXd pot = (p.mass * p.omega * p.omega / 2.0) * (dx * dx);
    const Eigen::MatrixXd halfsq = (p.coupling * p.mass / 2.0) * (dx * dx);
    const Eigen::MatrixXd cross = -(p.coupling * p.mass) * dx;

    DenseOperator out(s);
    const std::int64_t N = s.state_count();
    auto add_term = [&](const std::vector<const Eigen::MatrixXd*>& f) {
        for (std::int64_t kx = 1; kx <= N; ++kx) {
            const auto x = inverse_multi_index(kx, s);
            for (std::int64_t ky = 1; ky <= N; ++ky) {
                const auto y = inverse_multi_index(ky, s);
                double prod = 1.0;
                for (int i = 0; i < d; ++i)
                    prod *= (*f[static_cast<std::size_t>(i)])(x[static_cast<std::size_t>(i)] - 1,
                                                              y[static_cast<std::size_t>(i)] - 1);
                out.at(x, y) += prod;
            }
        }
    };
    for (int i = 0; i < d; ++i) {
        const int j = (i + 1) % d;
        std::vector<const Eigen::MatrixXd*> f(static_cast<std::size_t>(d), &eye);
        f[static_cast<std::size_t>(i)] = &kin;
        add_term(f);
        f[static_cast<std::size_t>(i)] = &pot;
        add_term(f);
        f[static_cast<std::size_t>(i)] = &halfsq;
        add_term(f);
        f[static_cast<std::size_t>(i)] = &eye;
        f[static_cast<std::size_t>(j)] = &halfsq;
        add_term(f);
        f[static_cast<std::size_t>(j)] = &eye;
        f[static_cast<std::size_t>(i)] = &cross;
        f[static_cast<std::size_t>(j)] = &dx;
        add_term(f);
    }
    return out;
}

int cmd_validate(const ModelOptions& mo, bool compress) {
    using namespace slimtt;
    double diff = 0.0, scale = 1.0, leak = 0.0;
    if (mo.name == "ising") {
        IsingParams p;
        if (mo.d) p.d = *mo.d;
        const DenseTensor h = to_full(build_ising(p));
        const Shape& s = h.shape();
        for (std::int64_t k = 1; k <= s.state_count(); ++k) {
            const auto x = inverse_multi_index(k, s);
            diff = std::max(diff, std::abs(h.flat(k - 1) - ising_direct(x, p.coupling, p.field)));
        }
    } else if (mo.name == "oscillator") {
        OscillatorParams p;
        if (mo.d) p.d = *mo.d;
        if (mo.n) p.grid_halfwidth = *mo.n;
        const DenseOperator h = to_full(build_oscillator(p));
        const DenseOperator oracle = oscillator_dense_oracle(p);
        for (std::size_t i = 0; i < h.entries().size(); ++i)
            diff = std::max(diff, std::abs(h.entries()[i] - oracle.entries()[i]));
    } else {
        ReactionSystem rs = make_reaction_system(mo);
        const DenseOperator oracle = dense_generator(rs);
        const DenseOperator elem = elementwise_generator(rs);
        for (std::size_t i = 0; i < oracle.entries().size(); ++i)
            if (oracle.entries()[i] != elem.entries()[i]) {
                std::cout << "FAIL: generator routes disagree\n";
                return kExitValidationFailure;
            }
        const DenseOperator slim = to_full(build_slim_markov(rs, compress));
        for (std::size_t i = 0; i < oracle.entries().size(); ++i)
            diff = std::max(diff, std::abs(oracle.entries()[i] - slim.entries()[i]));
        for (double v : oracle.entries()) scale = std::max(scale, std::abs(v));
        leak = verify_generator(oracle).max_abs_colsum;
    }
    std::cout << "max abs diff " << fmt17(diff) << "\n";
    std::cout << "oracle scale " << fmt17(scale) << "\n";
    std::cout << "column-sum leak " << fmt17(leak) << "\n";
    const bool pass = diff <= 1e-12 * scale;
    std::cout << (pass ? "PASS" : "FAIL") << " (tolerance 1e-12 relative to scale)\n";
    return pass ? kExitOk : kExitValidationFailure;
}

int cmd_simulate(const ModelOptions& mo, bool compress, double tau, int steps, int ranks,
                 int sweeps, int init_state, const std::string& out, int snapshot_every,
                 const std::string& snapshot_prefix) {
    using namespace slimtt;
    ReactionSystem rs = make_reaction_system(mo);
    TtOperator a = build_slim_markov(rs, compress);
    const Shape& s = a.shape();

    int init = init_state;
    if (init <= 0) init = std::min(6, (s.mode(0) + 1) / 2 + 1);
    for (int i = 0; i < s.order(); ++i)
        if (init > s.mode(i)) {
            std::cerr << "initial state " << init << " outside cell range\n";
            return kExitUsage;
        }
    TtTensor t0 = tt_unit(s, std::vector<int>(static_cast<std::size_t>(s.order()), init));

    PropagationConfig pc{.tau = tau, .steps = steps};
    AlsConfig ac;
    ac.ranks = {ranks};
    ac.max_sweeps = sweeps;
    ac.tolerance = 1e-8;

    std::ofstream csv;
    if (!out.empty()) {
        csv.open(out);
        if (!csv) {
            std::cerr << "cannot write " << out << "\n";
            return kExitUsage;
        }
        csv << "step,time,eps,mass";
        for (int i = 1; i <= s.order(); ++i)
            for (int x = 1; x <= s.mode(i - 1); ++x) csv << ",m" << i << "_" << x;
        csv << "\n";
    }

    PropagationResult res{.records = {}, .state = t0, .max_eps = 0.0};
    try {
        res = implicit_euler(a, t0, pc, ac, [&](int k, const TtTensor& state) {
            if (snapshot_every > 0 && k % snapshot_every == 0 && !snapshot_prefix.empty())
                save_tt_file(state, snapshot_prefix + std::to_string(k) + ".tt");
        });
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }

    for (const StepRecord& r : res.records) {
        if (!csv.is_open()) break;
        csv << r.step << ',' << fmt17(r.time) << ',' << fmt17(r.eps) << ',' << fmt17(r.mass);
        for (const auto& lane : r.marginals)
            for (int x = 0; x < lane.size(); ++x) csv << ',' << fmt17(lane(x));
        csv << "\n";
    }
    std::cout << "max eps " << fmt17(res.max_eps) << "\n";
    double dip = 0.0;
    for (const StepRecord& r : res.records) dip = std::min(dip, r.min_marginal);
    if (dip < -1e-8)
        std::cout << "note: marginals dip to " << fmt17(dip)
                  << " (low-rank solutions may go slightly negative)\n";
    if (!out.empty()) {
        std::ostringstream extra;
        extra << "tau " << fmt17(tau) << "\nsteps " << steps << "\nranks " << ranks
              << "\nsweeps " << sweeps << "\nseed " << ac.seed << "\ninit " << init << "\nout "
              << out << "\n";
        write_manifest(out + ".manifest", "simulate", mo, extra.str());
        std::cout << "wrote " << out << "\n";
    }
    return kExitOk;
}

int cmd_info(const std::string& path) {
    using namespace slimtt;
    const ContainerInfo info = peek_tt_file(path);
    std::cout << "kind " << (info.kind == 'T' ? "tensor" : "operator") << "\n";
    std::cout << "cyclic " << (info.cyclic ? 1 : 0) << "\n";
    std::cout << "modes";
    for (int n : info.modes) std::cout << ' ' << n;
    std::cout << "\nranks";
    for (int r : info.ranks) std::cout << ' ' << r;
    std::cout << "\n";
    return kExitOk;
}

int cmd_export_model(const ModelOptions& mo, const std::string& out) {
    slimtt::ReactionSystem rs = make_reaction_system(mo);
    rs.save_file(out);
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SLIM tensor-train toolkit for nearest-neighbor interaction systems"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    ModelOptions mo;
    bool no_compress = false;

    auto add_model_opts = [&](CLI::App* cmd, bool with_n = true) {
        cmd->add_option("model", mo.name,
                        "cascade | co2 | toll | ising | oscillator | model-file path")
            ->required();
        cmd->add_option("--d", mo.d, "number of cells");
        if (with_n) cmd->add_option("--n", mo.n, "states per cell (grid half-width for oscillator)");
        cmd->add_flag("--no-compress", no_compress, "skip the pair compression");
    };

    auto* build = app.add_subcommand("build", "construct the SLIM decomposition");
    std::string out_path, report_path;
    add_model_opts(build);
    build->add_option("--out", out_path, "write the TT container here");
    build->add_option("--report", report_path, "write the rank/storage report here");

    auto* validate = app.add_subcommand("validate", "compare against the dense oracles");
    add_model_opts(validate);

    auto* simulate = app.add_subcommand("simulate", "implicit Euler propagation");
    double tau = 0.1;
    int steps = 10, ranks = 10, sweeps = 8, init_state = 0, snapshot_every = 0;
    std::string traj_path, snapshot_prefix;
    add_model_opts(simulate);
    simulate->add_option("--tau", tau, "time step");
    simulate->add_option("--steps", steps, "number of steps");
    simulate->add_option("--ranks", ranks, "solution TT ranks");
    simulate->add_option("--sweeps", sweeps, "max ALS sweeps per step");
    simulate->add_option("--init-state", init_state, "uniform initial cell state (1-based)");
    simulate->add_option("--out", traj_path, "trajectory CSV path");
    simulate->add_option("--snapshot-every", snapshot_every, "serialize every N steps");
    simulate->add_option("--snapshot-prefix", snapshot_prefix, "snapshot file prefix");

    auto* info = app.add_subcommand("info", "print TT container metadata");
    std::string info_path;
    info->add_option("container", info_path, "TT container file")->required();

    auto* exportm = app.add_subcommand("export-model", "write the reaction system model file");
    std::string export_path;
    add_model_opts(exportm);
    exportm->add_option("--out", export_path, "model file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) return cmd_build(mo, !no_compress, out_path, report_path);
        if (validate->parsed()) return cmd_validate(mo, !no_compress);
        if (simulate->parsed())
            return cmd_simulate(mo, !no_compress, tau, steps, ranks, sweeps, init_state,
                                traj_path, snapshot_every, snapshot_prefix);
        if (info->parsed()) return cmd_info(info_path);
        if (exportm->parsed()) return cmd_export_model(mo, export_path);
    } catch (const slimtt::SingularLocalSystem& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
