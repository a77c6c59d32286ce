#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slimtt/dense.hpp"
#include "slimtt/shape.hpp"
#include "test_util.hpp"

using namespace slimtt;
using namespace testutil;

TEST_CASE("multi_index little-endian formula") {
    CHECK(multi_index(std::vector<int>{1, 1, 1}, Shape({3, 4, 5})) == 1);
    CHECK(multi_index(std::vector<int>{2, 1}, Shape({3, 4})) == 2);
    CHECK(multi_index(std::vector<int>{1, 2}, Shape({3, 4})) == 4);
    CHECK(multi_index(std::vector<int>{3, 4, 5}, Shape({3, 4, 5})) == 60);
}

TEST_CASE("multi_index rejects out-of-range components naming the cell") {
    try {
        multi_index(std::vector<int>{1, 5}, Shape({3, 4}));
        FAIL("expected out_of_range");
    } catch (const std::out_of_range& e) {
        CHECK(std::string(e.what()).find("cell 2") != std::string::npos);
    }
    CHECK_THROWS_AS(multi_index(std::vector<int>{0, 1}, Shape({3, 4})), std::out_of_range);
}

TEST_CASE("multi_index is a bijection over the full range") {
    for (const Shape& s : {Shape({2}), Shape({3, 4}), Shape({2, 3, 2}), Shape({5, 2, 3, 4})}) {
        for (std::int64_t k = 1; k <= s.state_count(); ++k)
            CHECK(multi_index(inverse_multi_index(k, s), s) == k);
    }
}

TEST_CASE("shape invariants") {
    CHECK_THROWS_AS(Shape({}), std::invalid_argument);
    CHECK_THROWS_AS(Shape({2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(Shape({2, 2}, true), std::invalid_argument); // cyclic needs d >= 3
    CHECK(Shape({2, 2, 2}, true).edge_count() == 3);
    CHECK(Shape({2, 2, 2}, false).edge_count() == 2);
}

TEST_CASE("tensor product definitional 2x2 case") {
    DenseTensor a{Shape({2})};
    a.flat(0) = 1; a.flat(1) = 2;
    DenseTensor b{Shape({2})};
    b.flat(0) = 3; b.flat(1) = 4;
    DenseTensor p = tensor_product(a, b);
    CHECK(p.at(std::vector<int>{1, 1}) == 3.0);
    CHECK(p.at(std::vector<int>{2, 1}) == 6.0);
    CHECK(p.at(std::vector<int>{1, 2}) == 4.0);
    CHECK(p.at(std::vector<int>{2, 2}) == 8.0);
}

TEST_CASE("tensor product annihilator and bilinearity") {
    auto g = rng(42);
    DenseTensor z{Shape({2})};
    DenseTensor b = random_dense(Shape({3, 2}), g);
    DenseTensor p = tensor_product(z, b);
    for (double v : p.entries()) CHECK(v == 0.0);

    // (a1 + a2) (x) b == a1 (x) b + a2 (x) b on random 3x3 inputs
    const Shape s({3, 3});
    DenseTensor a1 = random_dense(s, g), a2 = random_dense(s, g), u = random_dense(s, g);
    DenseTensor sum(s);
    for (std::int64_t i = 0; i < sum.size(); ++i) sum.flat(i) = a1.flat(i) + a2.flat(i);
    DenseTensor lhs = tensor_product(sum, u);
    DenseTensor r1 = tensor_product(a1, u), r2 = tensor_product(a2, u);
    double md = 0.0;
    for (std::int64_t i = 0; i < lhs.size(); ++i)
        md = std::max(md, std::abs(lhs.flat(i) - (r1.flat(i) + r2.flat(i))));
    CHECK(md <= 1e-14);

    // scalar pull-through
    DenseTensor sa(s);
    for (std::int64_t i = 0; i < sa.size(); ++i) sa.flat(i) = 2.5 * a1.flat(i);
    DenseTensor l2 = tensor_product(sa, u);
    double md2 = 0.0;
    for (std::int64_t i = 0; i < l2.size(); ++i)
        md2 = std::max(md2, std::abs(l2.flat(i) - 2.5 * r1.flat(i)));
    CHECK(md2 <= 1e-14);
}

TEST_CASE("frobenius norm basics") {
    DenseTensor z{Shape({2, 2})};
    CHECK(frobenius_norm(z) == 0.0);
    DenseTensor one{Shape({1})};
    one.flat(0) = 3.0;
    CHECK(frobenius_norm(one) == 3.0);
    DenseTensor ones{Shape({2, 2})};
    for (auto& v : ones.entries()) v = 1.0;
    CHECK(frobenius_norm(ones) == 2.0);
}

TEST_CASE("dense_matvec identity and zero") {
    auto g = rng(7);
    const Shape s({2, 3});
    DenseTensor t = random_dense(s, g);
    DenseOperator id(s);
    for (std::int64_t k = 1; k <= s.state_count(); ++k) {
        auto x = inverse_multi_index(k, s);
        id.at(x, x) = 1.0;
    }
    DenseTensor r = dense_matvec(id, t);
    for (std::int64_t i = 0; i < t.size(); ++i) CHECK(r.flat(i) == t.flat(i));

    DenseOperator zero(s);
    DenseTensor rz = dense_matvec(zero, t);
    for (double v : rz.entries()) CHECK(v == 0.0);
}

TEST_CASE("dense_matvec equals the matricized product exactly") {
    auto g = rng(11);
    for (const Shape& s : {Shape({2, 2}), Shape({3}), Shape({2, 3, 2}), Shape({4, 2, 3})}) {
        DenseOperator a = random_dense_op(s, g);
        DenseTensor t = random_dense(s, g);
        DenseTensor r = dense_matvec(a, t);
        const Eigen::MatrixXd mat = a.to_matrix();
        // same fixed ascending-y loop as the contraction contract
        for (std::int64_t row = 0; row < s.state_count(); ++row) {
            double acc = 0.0;
            for (std::int64_t col = 0; col < s.state_count(); ++col)
                acc += mat(row, col) * t.flat(col);
            CHECK(r.flat(row) == acc);
        }
    }
}

TEST_CASE("dense operator matrix round trip") {
    auto g = rng(13);
    const Shape s({2, 3, 2});
    DenseOperator a = random_dense_op(s, g);
    DenseOperator b = DenseOperator::from_matrix(a.to_matrix(), s);
    CHECK(max_abs_diff(a, b) == 0.0);
}

TEST_CASE("dense_matvec rejects shape mismatch") {
    DenseOperator a{Shape({2, 2})};
    DenseTensor t{Shape({2, 3})};
    CHECK_THROWS_AS(dense_matvec(a, t), std::invalid_argument);
}
