#include <catch_amalgamated.hpp>

#include "idemfactor/matrix.hpp"
#include "support.hpp"

using namespace idemfactor;
using testing::frac;
using testing::mat;

TEST_CASE("gf arithmetic")
{
    CHECK(Gf3(2) * Gf3(2) == Gf3(1));
    CHECK(Gf5(3).inverse() == Gf5(2));
    CHECK(-Gf5(1) == Gf5(4));
    CHECK(Gf2(-1) == Gf2(1));
    CHECK_THROWS_AS(Gf3(0).inverse(), Error);
    for (int a = 1; a < 5; ++a)
        CHECK(Gf5(a) * Gf5(a).inverse() == Gf5(1));
}

TEST_CASE("rational text round trip")
{
    CHECK(format_rational(frac(-3, 2)) == "-3/2");
    CHECK(format_rational(Rational(4)) == "4");
    CHECK(parse_rational("6/4") == frac(3, 2));
    CHECK(parse_rational(" -7 ") == Rational(-7));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("0.5"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("rref examples")
{
    const auto id = rref<Rational>(identity<Rational>(2));
    CHECK(id.reduced == identity<Rational>(2));
    CHECK(id.pivots == std::vector<Index>{0, 1});

    const auto dep = rref<Rational>(mat({{1, 2}, {2, 4}}));
    CHECK(dep.rank() == 1);
    CHECK(dep.pivots == std::vector<Index>{0});

    CHECK(rref<Rational>(zeros<Rational>(3, 3)).rank() == 0);
}

TEST_CASE("nullspace and column space examples")
{
    CHECK(nullspace_basis<Rational>(identity<Rational>(3)).cols() == 0);
    CHECK(nullspace_basis<Rational>(mat({{2, 3}, {0, 0}})) == mat({{frac(-3, 2)}, {1}}));
    CHECK(nullspace_basis<Rational>(zeros<Rational>(2, 2)) == identity<Rational>(2));

    CHECK(colspace_basis<Rational>(identity<Rational>(2)) == identity<Rational>(2));
    CHECK(colspace_basis<Rational>(mat({{1, 2}, {2, 4}})) == mat({{1}, {2}}));
    CHECK(colspace_basis<Rational>(zeros<Rational>(2, 2)).cols() == 0);
}

TEST_CASE("pseudoinverse examples")
{
    const Mat<Rational> m = mat({{2, 1}, {1, 1}});
    CHECK(pseudoinverse(m) == inverse(m));
    const Mat<Rational> p = mat({{1, 0}, {0, 0}});
    CHECK(pseudoinverse(p) == p);
    CHECK(pseudoinverse<Rational>(mat({{1}, {1}})) == mat({{frac(1, 2), frac(1, 2)}}));
    CHECK_THROWS_AS(pseudoinverse<Gf2>(identity<Gf2>(2)), Error);

    const Mat<double> f = mat<double>({{1}, {1}});
    CHECK(approx_equal<double>(pseudoinverse(f), mat<double>({{0.5, 0.5}})));
}

TEST_CASE("solve_linear examples")
{
    const Mat<Rational> b = mat({{1, 2}, {3, 4}});
    CHECK(*solve_linear<Rational>(identity<Rational>(2), b) == b);
    CHECK_FALSE(solve_linear<Rational>(mat({{1, 0}, {0, 0}}), mat({{0}, {1}})));

    const Mat<Gf2> a = mat<Gf2>({{1, 1}, {0, 0}});
    const Mat<Gf2> rhs = mat<Gf2>({{1}, {0}});
    // Oracle: the candidates solving A x = b among all four vectors of GF(2)².
    std::vector<Mat<Gf2>> solutions;
    testing::for_each_matrix<Gf2>(2, 1, [&](const Mat<Gf2>& x) {
        if (a * x == rhs)
            solutions.push_back(x);
    });
    REQUIRE(solutions.size() == 2);
    const auto x = solve_linear(a, rhs);
    REQUIRE(x);
    CHECK(*x == mat<Gf2>({{1}, {0}}));
}

TEST_CASE("Penrose identities over Q")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Index r = 1 + static_cast<Index>(rng() % 5);
        const Index c = 1 + static_cast<Index>(rng() % 5);
        const Index inner = 1 + static_cast<Index>(rng() % 3);
        const Mat<Rational> m = testing::random_small<Rational>(r, inner, rng) * testing::random_small<Rational>(inner, c, rng);
        const Mat<Rational> x = pseudoinverse(m);
        CHECK(m * x * m == m);
        CHECK(x * m * x == x);
        CHECK(Mat<Rational>(m * x).transpose() == m * x);
        CHECK(Mat<Rational>(x * m).transpose() == x * m);
    }
}

TEST_CASE("rank agrees with brute-force span size over GF(2) and GF(3)")
{
    testing::for_each_matrix<Gf2>(3, 3, [](const Mat<Gf2>& m) {
        REQUIRE(rank(m) == testing::brute_rank(m));
        const Mat<Gf2> n = nullspace_basis(m);
        REQUIRE(n.cols() == 3 - rank(m));
        REQUIRE(is_zero_matrix<Gf2>(m * n));
    });
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Mat<Gf3> m = testing::random_small<Gf3>(3, 4, rng);
        REQUIRE(rank(m) == testing::brute_rank(m));
    }
}

TEST_CASE("rank over Q matches floating-point LU on integer matrices")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Index r = 1 + static_cast<Index>(rng() % 6);
        const Index c = 1 + static_cast<Index>(rng() % 6);
        const Index inner = 1 + static_cast<Index>(rng() % 6);
        const Mat<Rational> m = testing::random_small<Rational>(r, inner, rng) * testing::random_small<Rational>(inner, c, rng);
        Mat<double> f(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j)
                f(i, j) = m(i, j).convert_to<double>();
        Eigen::FullPivLU<Mat<double>> lu(f);
        REQUIRE(rank(m) == lu.rank());
        REQUIRE(rank(f) == lu.rank());
        const Mat<Rational> n = nullspace_basis(m);
        REQUIRE(n.cols() == c - rank(m));
        REQUIRE(is_zero_matrix<Rational>(m * n));
    }
}

TEST_CASE("float tolerance treats tiny perturbations as rank deficient")
{
    Mat<double> m = mat<double>({{1, 2}, {2, 4 + 1e-15}});
    CHECK(rank(m) == 1);
    CHECK(rank(m, Tolerance{0.0}) == 2);
}

TEST_CASE("inverse and left inverse")
{
    CHECK_THROWS_AS(inverse<Rational>(mat({{1, 2}, {2, 4}})), Error);
    CHECK_THROWS_AS(inverse<Rational>(mat({{1, 2}})), Error);
    const Mat<Gf3> j = mat<Gf3>({{1}, {2}, {0}});
    const auto js = left_inverse(j);
    REQUIRE(js);
    CHECK(*js * j == identity<Gf3>(1));
    CHECK_FALSE(left_inverse<Rational>(mat({{1, 2}, {2, 4}})));
}
