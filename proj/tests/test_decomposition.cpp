#include <catch_amalgamated.hpp>

#include "idemfactor/decomposition.hpp"
#include "support.hpp"

using namespace idemfactor;
using testing::mat;

namespace {

Mat<Rational> ones_column() { return mat({{1}, {1}}); }

}  // namespace

TEST_CASE("decomposition validation")
{
    CHECK_THROWS_AS(Decomposition<Rational>(identity<Rational>(2), zeros<Rational>(2, 0)), Error);
    try {
        Decomposition<Rational>(mat({{1}, {1}}), mat({{2}, {2}}));
        FAIL("dependent bases accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DependentColumns);
    }
    try {
        Decomposition<Rational>(mat({{1}, {0}}), mat({{0}, {1}, {0}}));
        FAIL("mismatched bases accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
}

TEST_CASE("extend_to_complement examples")
{
    const auto d1 = extend_to_complement<Rational>(mat({{1}, {0}}), 2);
    CHECK(d1.l_basis() == mat({{0}, {1}}));
    const auto d2 = extend_to_complement<Rational>(ones_column(), 2);
    CHECK(d2.l_basis() == mat({{1}, {0}}));
    try {
        extend_to_complement<Rational>(identity<Rational>(2), 2);
        FAIL("full K accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BadDimension);
    }
}

TEST_CASE("projector examples")
{
    CHECK(projector(standard_decomposition<Rational>(2, 1)) == mat({{1, 0}, {0, 0}}));
    const Decomposition<Rational> d(ones_column(), mat({{1}, {0}}));
    const Mat<Rational> p = projector(d);
    CHECK(p == mat({{0, 1}, {0, 1}}));
    // Oracle: P fixes (1,1) and kills e1.
    CHECK(p * ones_column() == ones_column());
    CHECK(is_zero_matrix<Rational>(p * mat({{1}, {0}})));
    CHECK(p + complement_projector(d) == identity<Rational>(2));
}

TEST_CASE("block_rep and assemble examples")
{
    const Mat<Rational> t = mat({{1, 2}, {3, 4}});
    const auto b = block_rep(t, standard_decomposition<Rational>(2, 1));
    CHECK(b.t1 == mat({{1}}));
    CHECK(b.t2 == mat({{2}}));
    CHECK(b.t3 == mat({{3}}));
    CHECK(b.t4 == mat({{4}}));
    CHECK(assemble(b) == t);

    const Decomposition<Rational> d(ones_column(), mat({{1}, {0}}));
    const auto b2 = block_rep<Rational>(mat({{1, 1}, {1, 1}}), d);
    CHECK(b2.t1 == mat({{2}}));
    CHECK(b2.t2 == mat({{1}}));
    CHECK(b2.t3 == mat({{0}}));
    CHECK(b2.t4 == mat({{0}}));
    CHECK(assemble(make_local_rep<Rational>(d, mat({{2}}), mat({{1}}))) == mat({{1, 1}, {1, 1}}));

    const auto z = block_rep<Rational>(zeros<Rational>(3, 3), standard_decomposition<Rational>(3, 1));
    CHECK(is_zero_matrix(z.t1));
    CHECK(is_zero_matrix(z.t4));
    CHECK(is_zero_matrix(assemble(z)));
}

TEST_CASE("local_block_rep examples")
{
    const auto b = local_block_rep<Rational>(mat({{1, 1}, {1, 1}}));
    CHECK(b.local);
    CHECK(b.decomposition.k_basis() == ones_column());
    CHECK(b.t1 == mat({{2}}));
    CHECK(b.t2 == mat({{1}}));

    try {
        local_block_rep<Rational>(mat({{2, 1}, {1, 1}}));
        FAIL("invertible T accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotApplicable);
    }

    const auto a = local_block_rep<Rational>(mat({{5, 0}, {0, 0}}));
    CHECK(columns_in_span<Rational>(mat({{1}, {0}}), a.decomposition.k_basis()));
    CHECK(a.decomposition.k() == 1);
    CHECK(a.t1 == mat({{5}}));
    CHECK(a.t2 == mat({{0}}));

    CHECK_THROWS_AS(local_block_rep<Rational>(mat({{1, 0}, {0, 0}}), mat({{0}, {1}})), Error);
    const auto wide = local_block_rep<Rational>(mat({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}),
                                                Mat<Rational>(mat({{1, 0}, {0, 1}, {0, 0}})));
    CHECK(wide.decomposition.k() == 2);
    CHECK(is_zero_matrix(wide.t3));
}

TEST_CASE("mirrored local form")
{
    const Mat<Rational> t = mat({{0, 0}, {3, 6}});
    const auto b = mirror_local_block_rep(t);
    CHECK(is_zero_matrix(b.t1));
    CHECK(is_zero_matrix(b.t2));
    CHECK(assemble(b) == t);
}

TEST_CASE("round trip and projector properties over random decompositions")
{
    std::mt19937_64 rng(3);
    int built = 0;
    while (built < 200) {
        const Index n = 2 + static_cast<Index>(rng() % 5);
        const Index k = 1 + static_cast<Index>(rng() % (n - 1));
        const Mat<Rational> kb = testing::random_small<Rational>(n, k, rng);
        const Mat<Rational> lb = testing::random_small<Rational>(n, n - k, rng);
        if (rank(hstack(kb, lb)) != n)
            continue;
        ++built;
        const Decomposition<Rational> d(kb, lb);
        const Mat<Rational> t = testing::random_small<Rational>(n, n, rng);
        REQUIRE(assemble(block_rep(t, d)) == t);
        const Mat<Rational> p = projector(d);
        REQUIRE(p * p == p);
        REQUIRE(p * kb == kb);
        REQUIRE(is_zero_matrix<Rational>(p * lb));
        REQUIRE(rank(p) == k);
    }

    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 2 + static_cast<Index>(rng() % 4);
        const Index k = 1 + static_cast<Index>(rng() % (n - 1));
        const Mat<Gf3> kb = testing::random_small<Gf3>(n, k, rng);
        if (rank(kb) != k)
            continue;
        const auto d = extend_to_complement(kb, n);
        const Mat<Gf3> t = testing::random_small<Gf3>(n, n, rng);
        REQUIRE(assemble(block_rep(t, d)) == t);
    }
}

TEST_CASE("orthogonal decomposition over floats and Q")
{
    const auto d = orthogonal_decomposition<double>(mat<double>({{1}, {1}, {0}}));
    CHECK(approx_equal<double>(d.k_basis().transpose() * d.l_basis(), zeros<double>(1, 2)));
    CHECK(approx_equal<double>(d.l_basis().transpose() * d.l_basis(), identity<double>(2)));
    const Mat<double> p = projector(d);
    CHECK(approx_equal<double>(p, p.transpose()));

    const auto q = orthogonal_decomposition<Rational>(mat({{1}, {2}, {2}}));
    CHECK(is_zero_matrix<Rational>(q.k_basis().transpose() * q.l_basis()));
    const Mat<Rational> pq = projector(q);
    CHECK(pq == pq.transpose());
}
