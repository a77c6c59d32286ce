#include "slimtt/als.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace slimtt {

namespace {

// Dense 3-index environment W[p, a, q] with little-endian layout.
struct Env3 {
    int r1 = 1, r2 = 1, r3 = 1;
    Eigen::VectorXd v;
    Env3() : v(Eigen::VectorXd::Ones(1)) {}
    Env3(int a, int b, int c) : r1(a), r2(b), r3(c), v(Eigen::VectorXd::Zero(a * b * c)) {}
    double at(int i, int j, int k) const { return v(i + r1 * (j + static_cast<Eigen::Index>(r2) * k)); }
    double& at(int i, int j, int k) { return v(i + r1 * (j + static_cast<Eigen::Index>(r2) * k)); }
};

// W'[p',a',q'] = sum_{p,a,q,x,y} W[p,a,q] X(p,x,p') A(a,x,y,a') X(q,y,q')
Env3 advance_left(const Env3& w, const Core3& xc, const Core4& ac) {
    const int n = xc.mode();
    const int p0 = xc.left_rank(), p1 = xc.right_rank();
    const int a0 = ac.left_rank(), a1 = ac.right_rank();
    // t1[p, a, y, q'] = sum_q W[p,a,q] X(q,y,q')
    std::vector<double> t1(static_cast<std::size_t>(p0) * a0 * n * p1, 0.0);
    auto t1at = [&](int p, int a, int y, int q) -> double& {
        return t1[static_cast<std::size_t>(p) +
                  static_cast<std::size_t>(p0) *
                      (a + static_cast<std::size_t>(a0) * (y + static_cast<std::size_t>(n) * q))];
    };
    for (int q1 = 0; q1 < p1; ++q1)
        for (int y = 0; y < n; ++y)
            for (int q = 0; q < p0; ++q) {
                const double xv = xc(q, y, q1);
                if (xv == 0.0) continue;
                for (int a = 0; a < a0; ++a)
                    for (int p = 0; p < p0; ++p) t1at(p, a, y, q1) += w.at(p, a, q) * xv;
            }
    // t2[p, a', x, q'] = sum_{a,y} t1[p,a,y,q'] A(a,x,y,a')
    std::vector<double> t2(static_cast<std::size_t>(p0) * a1 * n * p1, 0.0);
    auto t2at = [&](int p, int a, int x, int q) -> double& {
        return t2[static_cast<std::size_t>(p) +
                  static_cast<std::size_t>(p0) *
                      (a + static_cast<std::size_t>(a1) * (x + static_cast<std::size_t>(n) * q))];
    };
    for (int ap = 0; ap < a1; ++ap)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int a = 0; a < a0; ++a) {
                    const double av = ac(a, x, y, ap);
                    if (av == 0.0) continue;
                    for (int q1 = 0; q1 < p1; ++q1)
                        for (int p = 0; p < p0; ++p) t2at(p, ap, x, q1) += t1at(p, a, y, q1) * av;
                }
    // W'[p', a', q'] = sum_{p,x} t2[p,a',x,q'] X(p,x,p')
    Env3 out(p1, a1, p1);
    for (int pp = 0; pp < p1; ++pp)
        for (int x = 0; x < n; ++x)
            for (int p = 0; p < p0; ++p) {
                const double xv = xc(p, x, pp);
                if (xv == 0.0) continue;
                for (int ap = 0; ap < a1; ++ap)
                    for (int q1 = 0; q1 < p1; ++q1)
                        out.at(pp, ap, q1) += t2at(p, ap, x, q1) * xv;
            }
    return out;
}

// Mirror update coming from the right end.
Env3 advance_right(const Env3& w, const Core3& xc, const Core4& ac) {
    const int n = xc.mode();
    const int p0 = xc.left_rank(), p1 = xc.right_rank();
    const int a0 = ac.left_rank(), a1 = ac.right_rank();
    // t1[p, a, y, q0] = sum_q W[p,a,q] X(q0,y,q)
    std::vector<double> t1(static_cast<std::size_t>(p1) * a1 * n * p0, 0.0);
    auto t1at = [&](int p, int a, int y, int q) -> double& {
        return t1[static_cast<std::size_t>(p) +
                  static_cast<std::size_t>(p1) *
                      (a + static_cast<std::size_t>(a1) * (y + static_cast<std::size_t>(n) * q))];
    };
    for (int q0 = 0; q0 < p0; ++q0)
        for (int y = 0; y < n; ++y)
            for (int q = 0; q < p1; ++q) {
                const double xv = xc(q0, y, q);
                if (xv == 0.0) continue;
                for (int a = 0; a < a1; ++a)
                    for (int p = 0; p < p1; ++p) t1at(p, a, y, q0) += w.at(p, a, q) * xv;
            }
    // t2[p, a0, x, q0] = sum_{a,y} t1[p,a,y,q0] A(a0,x,y,a)
    std::vector<double> t2(static_cast<std::size_t>(p1) * a0 * n * p0, 0.0);
    auto t2at = [&](int p, int a, int x, int q) -> double& {
        return t2[static_cast<std::size_t>(p) +
                  static_cast<std::size_t>(p1) *
                      (a + static_cast<std::size_t>(a0) * (x + static_cast<std::size_t>(n) * q))];
    };
    for (int am = 0; am < a0; ++am)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int a = 0; a < a1; ++a) {
                    const double av = ac(am, x, y, a);
                    if (av == 0.0) continue;
                    for (int q0 = 0; q0 < p0; ++q0)
                        for (int p = 0; p < p1; ++p) t2at(p, am, x, q0) += t1at(p, a, y, q0) * av;
                }
    // W'[p0', a0, q0] = sum_{p,x} t2[p,a0,x,q0] X(p0',x,p)
    Env3 out(p0, a0, p0);
    for (int pp = 0; pp < p0; ++pp)
        for (int x = 0; x < n; ++x)
            for (int p = 0; p < p1; ++p) {
                const double xv = xc(pp, x, p);
                if (xv == 0.0) continue;
                for (int am = 0; am < a0; ++am)
                    for (int q0 = 0; q0 < p0; ++q0)
                        out.at(pp, am, q0) += t2at(p, am, x, q0) * xv;
            }
    return out;
}

// Rhs environments: E'[p', c'] = sum_{p,c,x} E[p,c] X(p,x,p') B(c,x,c')
Eigen::MatrixXd advance_left_rhs(const Eigen::MatrixXd& e, const Core3& xc, const Core3& bc) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(xc.right_rank(), bc.right_rank());
    for (int x = 0; x < xc.mode(); ++x) {
        Eigen::MatrixXd xs(xc.left_rank(), xc.right_rank());
        for (int p = 0; p < xc.left_rank(); ++p)
            for (int pp = 0; pp < xc.right_rank(); ++pp) xs(p, pp) = xc(p, x, pp);
        Eigen::MatrixXd bs(bc.left_rank(), bc.right_rank());
        for (int c = 0; c < bc.left_rank(); ++c)
            for (int cc = 0; cc < bc.right_rank(); ++cc) bs(c, cc) = bc(c, x, cc);
        out += xs.transpose() * e * bs;
    }
    return out;
}

Eigen::MatrixXd advance_right_rhs(const Eigen::MatrixXd& e, const Core3& xc, const Core3& bc) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(xc.left_rank(), bc.left_rank());
    for (int x = 0; x < xc.mode(); ++x) {
        Eigen::MatrixXd xs(xc.left_rank(), xc.right_rank());
        for (int p = 0; p < xc.left_rank(); ++p)
            for (int pp = 0; pp < xc.right_rank(); ++pp) xs(p, pp) = xc(p, x, pp);
        Eigen::MatrixXd bs(bc.left_rank(), bc.right_rank());
        for (int c = 0; c < bc.left_rank(); ++c)
            for (int cc = 0; cc < bc.right_rank(); ++cc) bs(c, cc) = bc(c, x, cc);
        out += xs * e * bs.transpose();
    }
    return out;
}

TtTensor initial_guess(const TtOperator& a, const TtTensor& b, const AlsConfig& cfg) {
    const Shape& shape = b.shape();
    const int d = shape.order();
    (void)a;
    // Reachable-dimension caps per interior bond.
    std::vector<int> caps(static_cast<std::size_t>(std::max(0, d - 1)));
    for (int i = 0; i + 1 < d; ++i) {
        std::int64_t left = 1, right = 1;
        for (int j = 0; j <= i; ++j) left = std::min<std::int64_t>(left * shape.mode(j), 1 << 20);
        for (int j = i + 1; j < d; ++j)
            right = std::min<std::int64_t>(right * shape.mode(j), 1 << 20);
        const int want = cfg.ranks.size() == 1
                             ? cfg.ranks.front()
                             : cfg.ranks.at(static_cast<std::size_t>(i));
        caps[static_cast<std::size_t>(i)] =
            static_cast<int>(std::min<std::int64_t>({want, left, right}));
    }
    TtTensor x = tt_truncate(b, 0.0, caps);
    // Pad under-sized bonds with a small seeded random fill.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double scale = 1e-2 * (tt_norm(b) + 1e-300);
    std::vector<Core3> cores = x.cores();
    for (int i = 0; i + 1 < d; ++i) {
        const int want = caps[static_cast<std::size_t>(i)];
        const int have = cores[static_cast<std::size_t>(i)].right_rank();
        if (have >= want) continue;
        const Core3& cl = cores[static_cast<std::size_t>(i)];
        Core3 nl(cl.left_rank(), cl.mode(), want);
        for (int p = 0; p < cl.left_rank(); ++p)
            for (int xx = 0; xx < cl.mode(); ++xx) {
                for (int q = 0; q < have; ++q) nl(p, xx, q) = cl(p, xx, q);
                for (int q = have; q < want; ++q) nl(p, xx, q) = scale * unif(rng);
            }
        const Core3& cr = cores[static_cast<std::size_t>(i + 1)];
        Core3 nr(want, cr.mode(), cr.right_rank());
        for (int xx = 0; xx < cr.mode(); ++xx)
            for (int q = 0; q < cr.right_rank(); ++q) {
                for (int p = 0; p < have; ++p) nr(p, xx, q) = cr(p, xx, q);
                for (int p = have; p < want; ++p) nr(p, xx, q) = scale * unif(rng);
            }
        cores[static_cast<std::size_t>(i)] = std::move(nl);
        cores[static_cast<std::size_t>(i + 1)] = std::move(nr);
    }
    return orthogonalize(TtTensor(shape, std::move(cores)), Direction::Right);
}

double relative_residual(const TtOperator& a, const TtTensor& x, const TtTensor& b,
                         double bnorm) {
    TtTensor r = tt_add(b, tt_scale(tt_matvec(a, x), -1.0));
    r = tt_truncate(r, 1e-12);
    return tt_norm(r) / bnorm;
}

} // namespace

AlsResult als_solve(const TtOperator& a, const TtTensor& b, const AlsConfig& cfg) {
    if (!(a.shape() == b.shape())) throw std::invalid_argument("als_solve: shape mismatch");
    if (cfg.max_sweeps < 1) throw std::invalid_argument("als_solve: max_sweeps must be >= 1");
    for (int r : cfg.ranks)
        if (r < 1) throw std::invalid_argument("als_solve: ranks must be >= 1");
    const int d = a.order();
    const double bnorm = tt_norm(b);
    if (bnorm == 0.0) throw std::invalid_argument("als_solve: right-hand side is zero");

    TtTensor x = initial_guess(a, b, cfg);

    // Environments around the active site; index i holds the contraction of
    // everything left (right) of core i.
    std::vector<Env3> wl(static_cast<std::size_t>(d + 1));
    std::vector<Env3> wr(static_cast<std::size_t>(d + 1));
    std::vector<Eigen::MatrixXd> el(static_cast<std::size_t>(d + 1));
    std::vector<Eigen::MatrixXd> er(static_cast<std::size_t>(d + 1));
    el[0] = Eigen::MatrixXd::Ones(1, 1);
    er[static_cast<std::size_t>(d)] = Eigen::MatrixXd::Ones(1, 1);
    for (int i = d - 1; i > 0; --i) {
        wr[static_cast<std::size_t>(i)] =
            advance_right(wr[static_cast<std::size_t>(i + 1)], x.core(i), a.core(i));
        er[static_cast<std::size_t>(i)] =
            advance_right_rhs(er[static_cast<std::size_t>(i + 1)], x.core(i), b.core(i));
    }

    auto solve_site = [&](int i) {
        const Core3& xc = x.core(i);
        const Core4& ac = a.core(i);
        const Core3& bc = b.core(i);
        const int n = xc.mode();
        const int p0 = xc.left_rank(), p1 = xc.right_rank();
        const int a0 = ac.left_rank(), a1 = ac.right_rank();
        const Env3& l = wl[static_cast<std::size_t>(i)];
        const Env3& r = wr[static_cast<std::size_t>(i + 1)];
        const Eigen::Index loc = static_cast<Eigen::Index>(p0) * n * p1;

        // tmp[p, x, p0c, y, a1] = sum_{a0} L[p,a0,p0c] A(a0,x,y,a1)
        std::vector<double> tmp(static_cast<std::size_t>(p0) * n * p0 * n * a1, 0.0);
        auto tat = [&](int p, int xx, int pc, int y, int aa) -> double& {
            return tmp[static_cast<std::size_t>(p) +
                       static_cast<std::size_t>(p0) *
                           (xx + static_cast<std::size_t>(n) *
                                     (pc + static_cast<std::size_t>(p0) *
                                               (y + static_cast<std::size_t>(n) * aa)))];
        };
        for (int aa = 0; aa < a1; ++aa)
            for (int y = 0; y < n; ++y)
                for (int xx = 0; xx < n; ++xx)
                    for (int a0i = 0; a0i < a0; ++a0i) {
                        const double av = ac(a0i, xx, y, aa);
                        if (av == 0.0) continue;
                        for (int pc = 0; pc < p0; ++pc)
                            for (int p = 0; p < p0; ++p)
                                tat(p, xx, pc, y, aa) += l.at(p, a0i, pc) * av;
                    }
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(loc, loc);
        for (int aa = 0; aa < a1; ++aa)
            for (int q = 0; q < p1; ++q)
                for (int qc = 0; qc < p1; ++qc) {
                    const double rv = r.at(q, aa, qc);
                    if (rv == 0.0) continue;
                    for (int y = 0; y < n; ++y)
                        for (int pc = 0; pc < p0; ++pc)
                            for (int xx = 0; xx < n; ++xx)
                                for (int p = 0; p < p0; ++p)
                                    h(p + static_cast<Eigen::Index>(p0) * (xx + static_cast<Eigen::Index>(n) * q),
                                      pc + static_cast<Eigen::Index>(p0) * (y + static_cast<Eigen::Index>(n) * qc)) +=
                                        tat(p, xx, pc, y, aa) * rv;
                }
        Eigen::VectorXd g = Eigen::VectorXd::Zero(loc);
        const Eigen::MatrixXd& le = el[static_cast<std::size_t>(i)];
        const Eigen::MatrixXd& re = er[static_cast<std::size_t>(i + 1)];
        for (int xx = 0; xx < n; ++xx) {
            Eigen::MatrixXd bs(bc.left_rank(), bc.right_rank());
            for (int c = 0; c < bc.left_rank(); ++c)
                for (int cc = 0; cc < bc.right_rank(); ++cc) bs(c, cc) = bc(c, xx, cc);
            const Eigen::MatrixXd gblock = le * bs * re.transpose(); // p0 x p1
            for (int q = 0; q < p1; ++q)
                for (int p = 0; p < p0; ++p)
                    g(p + static_cast<Eigen::Index>(p0) * (xx + static_cast<Eigen::Index>(n) * q)) = gblock(p, q);
        }
        if (cfg.lambda > 0.0) h.diagonal().array() += cfg.lambda;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(h);
        Eigen::VectorXd w = lu.solve(g);
        if (!w.allFinite() ||
            (h * w - g).norm() > 1e-6 * (h.norm() * w.norm() + g.norm() + 1e-300))
            throw SingularLocalSystem(i);
        Core3 c(p0, n, p1);
        Eigen::Map<Eigen::VectorXd>(c.data().data(), loc) = w;
        x.core(i) = std::move(c);
    };

    double res_prev = -1.0;
    int sweeps_done = 0;
    double res = 0.0;
    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        // left-to-right
        for (int i = 0; i < d; ++i) {
            solve_site(i);
            if (i + 1 < d) {
                // shift the orthogonality center right
                Core3& c = x.core(i);
                Eigen::MatrixXd lu = c.left_unfold();
                Eigen::HouseholderQR<Eigen::MatrixXd> qr(lu);
                const int q = static_cast<int>(std::min<Eigen::Index>(lu.rows(), lu.cols()));
                Eigen::MatrixXd qm = qr.householderQ() * Eigen::MatrixXd::Identity(lu.rows(), q);
                Eigen::MatrixXd rm = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
                Core3 nc(c.left_rank(), c.mode(), q);
                Eigen::Map<Eigen::MatrixXd>(nc.data().data(), lu.rows(), q) = qm;
                x.core(i) = std::move(nc);
                Core3& cn = x.core(i + 1);
                Eigen::MatrixXd nu = rm * cn.right_unfold();
                Core3 nn(q, cn.mode(), cn.right_rank());
                Eigen::Map<Eigen::MatrixXd>(nn.data().data(), q,
                                            static_cast<Eigen::Index>(cn.mode()) *
                                                cn.right_rank()) = nu;
                x.core(i + 1) = std::move(nn);
                wl[static_cast<std::size_t>(i + 1)] =
                    advance_left(wl[static_cast<std::size_t>(i)], x.core(i), a.core(i));
                el[static_cast<std::size_t>(i + 1)] =
                    advance_left_rhs(el[static_cast<std::size_t>(i)], x.core(i), b.core(i));
            }
        }
        // right-to-left
        for (int i = d - 1; i >= 0; --i) {
            solve_site(i);
            if (i > 0) {
                Core3& c = x.core(i);
                Eigen::MatrixXd rut = Eigen::MatrixXd(c.right_unfold()).transpose();
                Eigen::HouseholderQR<Eigen::MatrixXd> qr(rut);
                const int q = static_cast<int>(std::min<Eigen::Index>(rut.rows(), rut.cols()));
                Eigen::MatrixXd qm = qr.householderQ() * Eigen::MatrixXd::Identity(rut.rows(), q);
                Eigen::MatrixXd rm = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
                Core3 nc(q, c.mode(), c.right_rank());
                Eigen::Map<Eigen::MatrixXd>(nc.data().data(), q,
                                            static_cast<Eigen::Index>(c.mode()) * c.right_rank()) =
                    qm.transpose();
                x.core(i) = std::move(nc);
                Core3& cp = x.core(i - 1);
                Eigen::MatrixXd pu = cp.left_unfold() * rm.transpose();
                Core3 np(cp.left_rank(), cp.mode(), q);
                Eigen::Map<Eigen::MatrixXd>(np.data().data(),
                                            static_cast<Eigen::Index>(cp.left_rank()) * cp.mode(),
                                            q) = pu;
                x.core(i - 1) = std::move(np);
                wr[static_cast<std::size_t>(i)] =
                    advance_right(wr[static_cast<std::size_t>(i + 1)], x.core(i), a.core(i));
                er[static_cast<std::size_t>(i)] =
                    advance_right_rhs(er[static_cast<std::size_t>(i + 1)], x.core(i), b.core(i));
            }
        }
        sweeps_done = sweep;
        res = relative_residual(a, x, b, bnorm);
        if (res < cfg.tolerance) break;
        if (res_prev >= 0.0 && std::abs(res_prev - res) < cfg.tolerance) break;
        res_prev = res;
    }
    return {std::move(x), res, sweeps_done};
}

} // namespace slimtt
