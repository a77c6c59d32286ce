#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slimtt/slim.hpp"
#include "test_oracles.hpp"
#include "test_util.hpp"

using namespace slimtt;
using namespace testutil;



TEST_CASE("shift_matrix") {
    CHECK(shift_matrix(3, 0) == Eigen::MatrixXd::Identity(3, 3));
    Eigen::MatrixXd down = shift_matrix(3, -1);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
    expect(1, 0) = 1.0;
    expect(2, 1) = 1.0;
    CHECK(down == expect);
    CHECK(shift_matrix(3, 5) == Eigen::MatrixXd::Zero(3, 3));
    CHECK(shift_matrix(3, -3) == Eigen::MatrixXd::Zero(3, 3));
}

TEST_CASE("build_slim: empty system gives the zero operator at interior rank 2") {
    const Shape s({2, 2, 2});
    SlimOperatorBlocks b;
    for (int i = 0; i < 3; ++i) b.S.push_back(Eigen::MatrixXd::Zero(2, 2));
    b.L.resize(3);
    b.M.resize(3);
    TtOperator a = build_slim(b, s);
    CHECK(a.ranks() == std::vector<int>{1, 2, 2, 1});
    CHECK(max_abs(to_full(a)) == 0.0);
}

TEST_CASE("build_slim equals the canonical-sum oracle (operator, non-cyclic)") {
    auto g = rng(101);
    const Shape s({2, 3, 2, 3});
    SlimOperatorBlocks b = random_op_blocks(s, {1, 1, 1}, g);
    TtOperator a = build_slim(b, s);
    CHECK(max_abs_diff(to_full(a), nnis_dense_op(b, s)) <= 1e-13);
    CHECK(a.ranks() == std::vector<int>{1, 3, 3, 3, 1});
}

TEST_CASE("build_slim equals the canonical-sum oracle (randomized sweep)") {
    auto g = rng(103);
    for (int d : {3, 4, 5}) {
        for (bool cyc : {false, true}) {
            std::vector<int> modes;
            for (int i = 0; i < d; ++i) modes.push_back(2 + (i % 2));
            const Shape s(modes, cyc);
            std::vector<int> betas;
            for (int e = 0; e < s.edge_count(); ++e) betas.push_back(e % 3); // includes beta=0
            SlimOperatorBlocks b = random_op_blocks(s, betas, g);
            TtOperator a = build_slim(b, s);
            CHECK(max_abs_diff(to_full(a), nnis_dense_op(b, s)) <= 1e-13);

            // tensor mode with the same structure
            SlimTensorBlocks tb;
            tb.L.resize(static_cast<std::size_t>(d));
            tb.M.resize(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) {
                Eigen::VectorXd v(s.mode(i));
                for (int x = 0; x < s.mode(i); ++x) v(x) = runif(g);
                tb.S.push_back(v);
            }
            for (int e = 0; e < s.edge_count(); ++e) {
                const int i = e, j = (e + 1) % d;
                for (int mu = 0; mu < betas[static_cast<std::size_t>(e)]; ++mu) {
                    Eigen::VectorXd l(s.mode(i)), mvec(s.mode(j));
                    for (int x = 0; x < s.mode(i); ++x) l(x) = runif(g);
                    for (int x = 0; x < s.mode(j); ++x) mvec(x) = runif(g);
                    tb.L[static_cast<std::size_t>(i)].push_back(l);
                    tb.M[static_cast<std::size_t>(j)].push_back(mvec);
                }
            }
            TtTensor t = build_slim(tb, s);
            CHECK(max_abs_diff(to_full(t), nnis_dense(tb, s)) <= 1e-13);

            // interior rank formula
            const int beta_d = cyc ? betas.back() : 0;
            auto rk = a.ranks();
            for (int i = 1; i < d; ++i)
                CHECK(rk[static_cast<std::size_t>(i)] ==
                      2 + betas[static_cast<std::size_t>(i - 1)] + beta_d);
        }
    }
}

TEST_CASE("build_slim validation") {
    const Shape s({2, 2, 2});
    SlimOperatorBlocks b;
    for (int i = 0; i < 3; ++i) b.S.push_back(Eigen::MatrixXd::Zero(2, 2));
    b.L.resize(3);
    b.M.resize(3);
    b.L[0].push_back(Eigen::MatrixXd::Zero(2, 2)); // no matching M at cell 2
    CHECK_THROWS_AS(build_slim(b, s), std::invalid_argument);

    // non-cyclic must not carry the wrap-around lists
    SlimOperatorBlocks b2;
    for (int i = 0; i < 3; ++i) b2.S.push_back(Eigen::MatrixXd::Zero(2, 2));
    b2.L.resize(3);
    b2.M.resize(3);
    b2.L[2].push_back(Eigen::MatrixXd::Zero(2, 2));
    b2.M[0].push_back(Eigen::MatrixXd::Zero(2, 2));
    CHECK_THROWS_AS(build_slim(b2, s), std::invalid_argument);

    // declared homogeneous with unequal blocks
    auto g = rng(5);
    SlimOperatorBlocks b3 = random_op_blocks(s, {1, 1}, g);
    CHECK_THROWS_AS(build_slim(b3, s, true), std::invalid_argument);
}

TEST_CASE("homogeneous cyclic layout: identical supercores, rank 2+beta+beta") {
    auto g = rng(107);
    Eigen::MatrixXd S(2, 2), L1(2, 2), M1(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            S(i, j) = runif(g);
            L1(i, j) = runif(g);
            M1(i, j) = runif(g);
        }
    TtOperator a = build_slim_homogeneous(S, {L1}, {M1}, 4, true);
    CHECK(a.ranks() == std::vector<int>{1, 4, 4, 4, 1});
    // interior supercores elementwise identical
    CHECK(a.core(1).data() == a.core(2).data());

    // inserting one more interior core yields the (d+1)-cell operator
    std::vector<Core4> cores = a.cores();
    cores.insert(cores.begin() + 2, a.core(1));
    TtOperator grown{Shape({2, 2, 2, 2, 2}, true), std::move(cores)};
    TtOperator b5 = build_slim_homogeneous(S, {L1}, {M1}, 5, true);
    CHECK(max_abs_diff(to_full(grown), to_full(b5)) == 0.0);
}

TEST_CASE("compress_pair basics") {
    auto g = rng(109);
    Eigen::MatrixXd l(3, 3), m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            l(i, j) = runif(g);
            m(i, j) = runif(g);
        }

    // beta = 1: nothing to compress
    CompressedPair one = compress_pair({l}, {m});
    CHECK(one.rank == 1);
    Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(9, 9);
    for (int x1 = 0; x1 < 3; ++x1)
        for (int y1 = 0; y1 < 3; ++y1)
            for (int x2 = 0; x2 < 3; ++x2)
                for (int y2 = 0; y2 < 3; ++y2)
                    recon(x1 + 3 * y1, x2 + 3 * y2) =
                        one.left[0](x1, y1) * one.right[0](x2, y2) - l(x1, y1) * m(x2, y2);
    CHECK(recon.cwiseAbs().maxCoeff() <= 1e-13);

    // duplicated pair collapses to rank 1
    CompressedPair dup = compress_pair({l, l}, {m, m});
    CHECK(dup.rank == 1);

    CHECK_THROWS_AS(compress_pair({}, {}), std::invalid_argument);
}

TEST_CASE("compress_pair on the cascade edge structure") {
    const int n = 4;
    Eigen::VectorXd hill(n);
    for (int x = 0; x < n; ++x) hill(x) = x / (5.0 + x);
    const Eigen::MatrixXd h1 = hill.asDiagonal();
    const Eigen::MatrixXd gdown = shift_matrix(n, -1);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

    CompressedPair cp = compress_pair({h1, -h1}, {gdown, eye});
    CHECK(cp.rank == 1);
    // contraction preserved: equals H1 (x) (Gdown - I)
    const Eigen::MatrixXd target = gdown - eye;
    double md = 0.0;
    for (int x1 = 0; x1 < n; ++x1)
        for (int y1 = 0; y1 < n; ++y1)
            for (int x2 = 0; x2 < n; ++x2)
                for (int y2 = 0; y2 < n; ++y2)
                    md = std::max(md, std::abs(cp.left[0](x1, y1) * cp.right[0](x2, y2) -
                                               h1(x1, y1) * target(x2, y2)));
    CHECK(md <= 1e-12);
}

TEST_CASE("compress_pair rank equals the matricized numerical rank") {
    auto g = rng(113);
    for (int trial = 0; trial < 6; ++trial) {
        const int m = 3, n = 4;
        const int beta = 2 + trial % 3;
        std::vector<Eigen::MatrixXd> L, M;
        // build lists with deliberate redundancy
        Eigen::MatrixXd base_l(m, m), base_m(n, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) base_l(i, j) = runif(g);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) base_m(i, j) = runif(g);
        for (int mu = 0; mu < beta; ++mu) {
            if (mu % 2 == 0) {
                L.push_back(base_l * (mu + 1));
                M.push_back(base_m);
            } else {
                Eigen::MatrixXd l(m, m), mm(n, n);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) l(i, j) = runif(g);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) mm(i, j) = runif(g);
                L.push_back(l);
                M.push_back(mm);
            }
        }
        CompressedPair cp = compress_pair(L, M);
        CHECK(cp.rank == matricized_rank(L, M));
        // reconstruction error
        double md = 0.0;
        for (int x1 = 0; x1 < m; ++x1)
            for (int y1 = 0; y1 < m; ++y1)
                for (int x2 = 0; x2 < n; ++x2)
                    for (int y2 = 0; y2 < n; ++y2) {
                        double want = 0.0, got = 0.0;
                        for (std::size_t mu = 0; mu < L.size(); ++mu)
                            want += L[mu](x1, y1) * M[mu](x2, y2);
                        for (int k = 0; k < cp.rank; ++k)
                            got += cp.left[static_cast<std::size_t>(k)](x1, y1) *
                                   cp.right[static_cast<std::size_t>(k)](x2, y2);
                        md = std::max(md, std::abs(want - got));
                    }
        CHECK(md <= 1e-12);
    }
}

TEST_CASE("build_slim_markov: no reactions gives the zero operator") {
    ReactionSystem rs{Shape({3, 3})};
    TtOperator a = build_slim_markov(rs);
    CHECK(max_abs(to_full(a)) == 0.0);
    CHECK(a.ranks() == std::vector<int>{1, 2, 1});
}

TEST_CASE("build_slim_markov pre-compression rank formula (cyclic heterogeneous)") {
    auto g = rng(127);
    const Shape s({3, 3, 3}, true);
    ReactionSystem rs{s};
    // one full-rank TCR per edge: matrix rank 3, two entry pairs per term
    for (int e = 1; e <= 3; ++e) {
        TwoCellReaction r;
        r.net_change_left = -1;
        r.net_change_right = +1;
        Eigen::MatrixXd a(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a(i, j) = 1.0 + std::abs(runif(g));
        r.propensity = a;
        rs.add_tcr(e, std::move(r));
    }
    TtOperator raw = build_slim_markov(rs, false);
    // each edge carries 2 * rank(a) = 6 entries; r_i = 2 + beta_i + beta_d
    auto rk = raw.ranks();
    CHECK(rk == std::vector<int>{1, 2 + 6 + 6, 2 + 6 + 6, 1});
    // compression must not change the represented operator
    TtOperator comp = build_slim_markov(rs, true);
    const DenseOperator dr = to_full(raw), dc = to_full(comp);
    CHECK(max_abs_diff(dr, dc) <= 1e-12 * std::max(1.0, max_abs(dr)));
}

TEST_CASE("storage_count formula instantiations") {
    // d=3 cyclic, all beta=1, n=2: first core (1+1+1)*4 + 2 = 14
    SlimStorage st = storage_count(Shape({2, 2, 2}, true), std::vector<int>{1, 1, 1});
    CHECK(st.per_core[0] == 14);
    CHECK(st.per_core[1] == (1 + 1 + 1) * 4 + (2 + 1) * 2);
    CHECK(st.per_core[2] == 14);

    // non-cyclic, beta = 0 everywhere: interior n^2 + 2n
    SlimStorage st2 = storage_count(Shape({3, 3, 3}), std::vector<int>{0, 0});
    CHECK(st2.per_core[1] == 9 + 6);
    CHECK(st2.per_core[0] == 9 + 3);
    CHECK(st2.per_core[2] == 9 + 3);
}

TEST_CASE("storage_count equals an independent census of constructed cores") {
    auto g = rng(131);
    for (int trial = 0; trial < 4; ++trial) {
        const int d = 3 + trial % 3;
        const bool cyc = trial % 2 == 0 && d >= 3;
        std::vector<int> modes;
        for (int i = 0; i < d; ++i) modes.push_back(2 + (trial + i) % 2);
        const Shape s(modes, cyc);
        std::vector<int> betas;
        for (int e = 0; e < s.edge_count(); ++e) betas.push_back((trial + e) % 3);
        SlimOperatorBlocks b = random_op_blocks(s, betas, g);
        TtOperator a = build_slim(b, s);

        // census: walk the constructed supercore layout and count parameter
        // slots, dense blocks as n^2, identity blocks as n
        const int beta_d = cyc ? betas.back() : 0;
        std::int64_t total = 0;
        std::vector<std::int64_t> per(static_cast<std::size_t>(d), 0);
        for (int i = 0; i < d; ++i) {
            const std::int64_t n = s.mode(i);
            std::int64_t cnt = 0;
            const int bl = i < static_cast<int>(betas.size()) ? betas[static_cast<std::size_t>(i)] : 0;
            const int bm = i == 0 ? beta_d : betas[static_cast<std::size_t>(i - 1)];
            if (i == 0) {
                cnt = n * n /*S*/ + bl * n * n /*L*/ + n /*I*/ + beta_d * n * n /*M*/;
            } else if (i == d - 1) {
                const int blast = cyc ? betas.back() : 0;
                cnt = n /*I*/ + bm * n * n /*M*/ + n * n /*S*/ + blast * n * n /*L*/;
            } else {
                cnt = n /*I top*/ + bm * n * n /*M*/ + n * n /*S*/ + bl * n * n /*L*/ +
                      n /*I mid*/ + beta_d * n /*J*/;
            }
            // the constructed core must have the matching slot structure
            CHECK(a.core(i).left_rank() == (i == 0 ? 1 : 2 + bm + beta_d));
            per[static_cast<std::size_t>(i)] = cnt;
            total += cnt;
        }
        SlimStorage st = storage_count(s, betas);
        CHECK(st.per_core == per);
        CHECK(st.total == total);
    }
}
