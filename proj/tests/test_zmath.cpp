#include <catch2/catch_amalgamated.hpp>

#include "cmcoincide/lattice.hpp"

using namespace cmcoincide;

TEST_CASE("integer roots and squares", "[zmath]") {
    CHECK(isqrt_floor(Integer(0)) == 0);
    CHECK(isqrt_floor(Integer(35)) == 5);
    CHECK(isqrt_floor(Integer(36)) == 6);
    CHECK(iroot_floor(Integer(400), 2) == 20);
    CHECK(iroot_floor(Integer(400), 4) == 4);
    CHECK(iroot_floor(Integer(399), 2) == 19);
    CHECK(iroot_floor_rat(Rational(400), 2) == 20);
    CHECK(iroot_floor_rat(Rational(115600), 2) == 340);
    Integer r;
    CHECK(is_perfect_square(Integer(7225), &r));
    CHECK(r == 85);
    CHECK_FALSE(is_perfect_square(Integer(1445)));
}

TEST_CASE("floor division and rounding", "[zmath]") {
    CHECK(floor_div(Integer(7), Integer(2)) == 3);
    CHECK(floor_div(Integer(-7), Integer(2)) == -4);
    CHECK(mod_floor(Integer(-7), Integer(2)) == 1);
    CHECK(round_rat(Rational(5, 2)) == 2);   // halves round down
    CHECK(round_rat(Rational(-5, 2)) == -3);
    CHECK(round_rat(Rational(7, 3)) == 2);
}

TEST_CASE("primality and factoring", "[zmath]") {
    CHECK(is_probable_prime(Integer(2)));
    CHECK(is_probable_prime(Integer(521)));
    CHECK(is_probable_prime(Integer("2710921")));
    CHECK_FALSE(is_probable_prime(Integer(1)));
    CHECK_FALSE(is_probable_prime(Integer(5777)));  // 53 * 109
    auto f = factor_integer(Integer(5776));
    CHECK(f[Integer(2)] == 4);
    CHECK(f[Integer(19)] == 2);
    auto g = factor_integer(Integer("1000000007") * 1445);
    CHECK(g[Integer("1000000007")] == 1);
    CHECK(g[Integer(5)] == 1);
    CHECK(g[Integer(17)] == 2);
}

TEST_CASE("hnf, kernel, solve", "[zlinalg]") {
    IMat A = {{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}};
    IMat H = hnf_rows(A);
    REQUIRE(H.size() == 2);  // rank 2
    // row space preserved: original rows solvable in H and vice versa
    for (const auto& r : A) {
        IMat Ht(H[0].size(), IVec(H.size()));
        for (std::size_t i = 0; i < H.size(); ++i)
            for (std::size_t j = 0; j < H[0].size(); ++j) Ht[j][i] = H[i][j];
        CHECK(solve_int(Ht, r).has_value());
    }
    IMat ker = kernel_int(A);
    REQUIRE(ker.size() == 1);
    for (const auto& row : A) {
        Integer s = 0;
        for (std::size_t j = 0; j < 3; ++j) s += row[j] * ker[0][j];
        CHECK(s == 0);
    }
    auto x = solve_int({{2, 0}, {0, 3}}, {4, 9});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
    CHECK((*x)[1] == 3);
    CHECK_FALSE(solve_int({{2, 0}, {0, 3}}, {1, 0}).has_value());
}

TEST_CASE("smith normal form with transform", "[zlinalg]") {
    IMat A = {{2, 4}, {6, 8}};
    IMat V;
    IVec d = snf_with_col_transform(A, V);
    CHECK(d[0] == 2);
    CHECK(d[1] == 4);
    CHECK(det_int(V) * det_int(V) == 1);  // unimodular
    // quotient Z^2 / <(2,4),(6,8)> has order 8
    CHECK(d[0] * d[1] == 8);
}

TEST_CASE("bareiss determinant", "[zlinalg]") {
    CHECK(det_int({{3}}) == 3);
    CHECK(det_int({{1, 2}, {3, 4}}) == -2);
    CHECK(det_int({{2, 0, 0}, {0, 3, 0}, {0, 0, 5}}) == 30);
    CHECK(det_int({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}) == 0);
}
