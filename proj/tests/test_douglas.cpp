#include <catch_amalgamated.hpp>

#include "idemfactor/douglas.hpp"
#include "support.hpp"

using namespace idemfactor;
using testing::mat;

TEST_CASE("range_included examples")
{
    CHECK(range_included<Rational>(mat({{1, 5}, {2, 3}}), mat({{2, 1}, {1, 1}})));
    CHECK_FALSE(range_included<Rational>(mat({{1}, {0}}), zeros<Rational>(2, 2)));
    CHECK(range_included<Rational>(mat({{2, 3}, {0, 0}}), mat({{1}, {0}})));
    CHECK_THROWS_AS(range_included<Rational>(mat({{1}}), mat({{1}, {0}})), Error);
}

TEST_CASE("douglas_solve examples")
{
    const Mat<Rational> u = mat({{1, 2}, {3, 4}});
    CHECK(douglas_solve<Rational>(u, identity<Rational>(2)) == u);

    const Mat<Rational> w = douglas_solve<Rational>(mat({{2, 0}, {0, 0}}), mat({{1, 0}, {0, 0}}));
    CHECK(w == mat({{2, 0}, {0, 0}}));
    CHECK(nullity(w) == 1);

    const Mat<Rational> w2 = douglas_solve<Rational>(mat({{2, 3}, {0, 0}}), mat({{1}, {0}}));
    CHECK(w2 == mat({{2, 3}}));
    CHECK(is_zero_matrix<Rational>(w2 * mat({{3}, {-2}})));

    try {
        douglas_solve<Rational>(mat({{0}, {1}}), mat({{1}, {0}}));
        FAIL("range failure not detected");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RangeNotContained);
    }
}

TEMPLATE_TEST_CASE("minimal-kernel solutions on forced range inclusions", "", Rational, Gf2, Gf3, Gf5)
{
    using S = TestType;
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const Index rows = 1 + static_cast<Index>(rng() % 6);
        const Index vc = 1 + static_cast<Index>(rng() % 6);
        const Index uc = 1 + static_cast<Index>(rng() % 6);
        const Mat<S> v = testing::random_small<S>(rows, vc, rng);
        const Mat<S> u = v * testing::random_small<S>(vc, uc, rng);
        const auto r = douglas_report(u, v);
        REQUIRE(r.product_matches);
        REQUIRE(r.kernel_equal);
        REQUIRE(v * r.w0 == u);
    }
}

TEST_CASE("minimal-kernel solutions over floats")
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const Index rows = 1 + static_cast<Index>(rng() % 6);
        const Index vc = 1 + static_cast<Index>(rng() % 6);
        const Index uc = 1 + static_cast<Index>(rng() % 6);
        const Mat<double> v = testing::random_small<double>(rows, vc, rng);
        const Mat<double> u = v * testing::random_small<double>(vc, uc, rng);
        const auto r = douglas_report(u, v, Tolerance{1e-10});
        REQUIRE(r.product_matches);
        REQUIRE(r.kernel_equal);
    }
}

TEST_CASE("failed inclusion agrees with solve_linear")
{
    std::mt19937_64 rng(31);
    int negatives = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const Index rows = 2 + static_cast<Index>(rng() % 5);
        const Index vc = 1 + static_cast<Index>(rng() % (rows - 1));
        const Mat<Rational> v = testing::random_small<Rational>(rows, vc, rng);
        const Mat<Rational> u = testing::random_small<Rational>(rows, 2, rng);
        const bool included = range_included(u, v);
        REQUIRE(included == solve_linear(v, u).has_value());
        if (!included) {
            ++negatives;
            REQUIRE_THROWS_AS(douglas_solve(u, v), Error);
        }
    }
    CHECK(negatives > 50);
}
