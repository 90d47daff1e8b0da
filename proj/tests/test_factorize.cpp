#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "idemfactor/factorize.hpp"

using namespace idemfactor;
using testing::frac;
using testing::mat;

namespace {

BlockRep<Rational> standard_local(Index k, Index l, const Mat<Rational>& t1, const Mat<Rational>& t2)
{
    return make_local_rep(standard_decomposition<Rational>(k + l, k), t1, t2);
}

template <class S>
void require_verified(const Certificate<S>& cert)
{
    const auto report = verify_certificate(cert);
    INFO(to_string(cert.recipe));
    REQUIRE(report.passed);
    if constexpr (is_exact_v<S>) {
        REQUIRE(report.residuals.product == 0.0);
        for (double r : report.residuals.idempotency)
            REQUIRE(r == 0.0);
    }
}

template <class S>
bool pairwise_distinct_second_factors(const std::vector<Certificate<S>>& certs)
{
    for (std::size_t i = 0; i < certs.size(); ++i)
        for (std::size_t j = i + 1; j < certs.size(); ++j)
            if (certs[i].factors[1] == certs[j].factors[1])
                return false;
    return true;
}

}  // namespace

TEST_CASE("peel_candidate")
{
    const auto b = standard_local(1, 1, mat({{2}}), mat({{1}}));
    CHECK(peel_candidate<Rational>(b, mat({{0}}), mat({{0}}), mat({{0}})) == mat({{2, 1}, {0, 0}}));
    const Mat<Rational> s = peel_candidate<Rational>(b, mat({{1}}), mat({{1}}), mat({{1}}));
    CHECK(s == mat({{1, 0}, {1, 1}}));
    CHECK(range_k_idempotent<Rational>(b.decomposition, mat({{1}})) * s == mat({{2, 1}, {0, 0}}));
    CHECK_THROWS_AS(peel_candidate<Rational>(b, mat({{1, 1}}), mat({{1}}), mat({{1}})), Error);
}

TEMPLATE_TEST_CASE("peeling identity on random parameters", "", Rational, Gf2, Gf3)
{
    using S = TestType;
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const auto dims = testing::random_dims(rng, 6);
        const auto d = testing::random_decomposition<S>(dims.n, dims.k, rng);
        const auto b = make_local_rep<S>(d, testing::random_small<S>(dims.k, dims.k, rng),
                                         testing::random_small<S>(dims.k, dims.l, rng));
        const Mat<S> bb = testing::random_small<S>(dims.k, dims.l, rng);
        const Mat<S> s = peel_candidate<S>(b, bb, testing::random_small<S>(dims.l, dims.k, rng),
                                           testing::random_small<S>(dims.l, dims.l, rng));
        REQUIRE(range_k_idempotent(d, bb) * s == assemble(b));
    }
}

TEST_CASE("lift_factorization")
{
    const auto d = standard_decomposition<Rational>(3, 2);
    const Mat<Rational> t1 = mat({{1, 0}, {0, 0}});
    const auto b = make_local_rep<Rational>(d, t1, mat({{3}, {4}}));
    const auto cert = lift_factorization<Rational>(b, {t1});
    CHECK(cert.factors.size() == 2);
    CHECK(cert.index_upper_bound == 2);
    require_verified(cert);

    const auto bi = make_local_rep<Rational>(d, identity<Rational>(2), mat({{3}, {4}}));
    const auto single = lift_factorization<Rational>(bi, {});
    CHECK(single.factors.size() == 1);
    require_verified(single);

    try {
        lift_factorization<Rational>(b, {Mat<Rational>(mat({{2, 0}, {0, 0}}))});
        FAIL("non-idempotent factor accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FactorNotIdempotent);
    }
    try {
        lift_factorization<Rational>(b, {Mat<Rational>(mat({{0, 0}, {0, 1}}))});
        FAIL("wrong product accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ProductMismatch);
    }

    // T1 = [a] alone is not a product of idempotents, yet [[a,0],[0,0]] is a product of two.
    const Mat<Rational> t = mat({{5, 0}, {0, 0}});
    const auto via_embed = auto_factor(t);
    REQUIRE(via_embed.certificate);
    CHECK(via_embed.certificate->factors.size() == 2);
    CHECK(annihilator_report<Rational>(mat({{5}})).verdict == AnnihilatorVerdict::FailsBoth);
}

TEST_CASE("corner_pair")
{
    const auto d = standard_decomposition<Rational>(2, 1);
    const auto kl = factor_corner_pair<Rational>(mat({{2}}), mat({{3}}), d);
    CHECK(kl.target == mat({{6, 2}, {0, 0}}));
    CHECK(kl.factors[0] == mat({{1, 2}, {0, 0}}));
    CHECK(kl.factors[1] == mat({{0, 0}, {3, 1}}));
    require_verified(kl);
    const auto lk = factor_corner_pair<Rational>(mat({{2}}), mat({{3}}), d, CornerOrder::LK);
    CHECK(lk.target == mat({{0, 0}, {3, 6}}));
    require_verified(lk);

    // Three-factor scalar fixture: [[bc,0],[0,0]] = [[1,b],[0,0]]·[[0,0],[0,1]]·[[1,0],[c,0]].
    const Certificate<Rational> three{mat({{21, 0}, {0, 0}}), {},
                                      {mat({{1, 3}, {0, 0}}), mat({{0, 0}, {0, 1}}), mat({{1, 0}, {7, 0}})},
                                      Recipe::CornerPair, {}, {}, 3};
    require_verified(three);
}

TEST_CASE("range_swallow")
{
    const auto b = standard_local(2, 1, mat({{2, 3}, {0, 0}}), mat({{1}, {0}}));
    const auto cert = factor_range_swallow(b);
    CHECK(cert.parameters.at("C") == mat({{2, 3}}));
    CHECK(cert.factors[0] == mat({{1, 0, 1}, {0, 1, 0}, {0, 0, 0}}));
    CHECK(cert.factors[1] == mat({{0, 0, 0}, {0, 0, 0}, {2, 3, 1}}));
    CHECK(cert.target == mat({{2, 3, 1}, {0, 0, 0}, {0, 0, 0}}));
    require_verified(cert);

    const auto zero = factor_range_swallow(standard_local(1, 1, mat({{0}}), mat({{4}})));
    CHECK(is_zero_matrix(zero.parameters.at("C")));

    const auto same = factor_range_swallow(standard_local(1, 1, mat({{3}}), mat({{3}})));
    require_verified(same);

    try {
        factor_range_swallow(standard_local(1, 1, mat({{3}}), mat({{0}})));
        FAIL("range condition not checked");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotApplicable);
    }
}

TEST_CASE("range_swallow_mirror")
{
    const auto d = standard_decomposition<Rational>(3, 1);
    const auto b = make_block_rep<Rational>(d, zeros<Rational>(1, 1), zeros<Rational>(1, 2), mat({{2}, {1}}),
                                            mat({{4, 6}, {2, 3}}));
    const auto cert = factor_range_swallow_mirror(b);
    CHECK(cert.parameters.at("B") == mat({{2, 3}}));
    require_verified(cert);
}

TEST_CASE("embed")
{
    const auto b = standard_local(1, 1, mat({{2}}), mat({{6}}));
    const auto cert = factor_embed<Rational>(b, Mat<Rational>(mat({{1}})));
    CHECK(cert.parameters.at("B") == mat({{3}}));
    CHECK(cert.factors[0] == mat({{1, 4}, {0, 0}}));
    CHECK(cert.factors[1] == mat({{-2, -6}, {1, 3}}));
    require_verified(cert);

    const auto a2 = factor_embed(standard_local(1, 1, mat({{2}}), mat({{0}})));
    CHECK(a2.factors[0] == mat({{1, 1}, {0, 0}}));
    CHECK(a2.factors[1] == mat({{1, 0}, {1, 0}}));

    const auto flipped = factor_embed<Rational>(standard_local(1, 1, mat({{2}}), mat({{0}})), Mat<Rational>(mat({{-1}})));
    require_verified(flipped);
    CHECK(flipped.factors[1] != a2.factors[1]);

    try {
        factor_embed<Rational>(b, Mat<Rational>(mat({{0}})));
        FAIL("bad J accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BadJ);
    }
    try {
        factor_embed(standard_local(2, 1, mat({{1, 0}, {0, 1}}), mat({{1}, {1}})));
        FAIL("dim K > dim L accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotApplicable);
    }
}

TEST_CASE("Example fixture: [[a, ab], [0, 0]] with a = 2, b = 3")
{
    const Certificate<Rational> cert{mat({{2, 6}, {0, 0}}), {}, {mat({{1, 4}, {0, 0}}), mat({{-2, -6}, {1, 3}})},
                                     Recipe::Embed, {}, {}, 2};
    require_verified(cert);
    auto tampered = cert;
    tampered.factors[1](0, 0) += 1;
    CHECK_FALSE(verify_certificate(tampered).passed);
}

TEST_CASE("kernel_shift")
{
    const auto b = standard_local(2, 1, mat({{2, 3}, {0, 0}}), mat({{1}, {0}}));
    const auto cert = factor_kernel_shift<Rational>(b, Mat<Rational>(mat({{3}, {-2}})));
    CHECK(cert.factors[0] == mat({{1, 0, -2}, {0, 1, 2}, {0, 0, 0}}));
    CHECK(cert.factors[1] == mat({{6, 9, 3}, {-4, -6, -2}, {2, 3, 1}}));
    require_verified(cert);

    const auto zero = factor_kernel_shift<Rational>(b, zeros<Rational>(2, 1));
    CHECK(zero.factors == factor_range_swallow(b).factors);

    const auto twice = factor_kernel_shift<Rational>(b, Mat<Rational>(mat({{6}, {-4}})));
    CHECK(twice.factors[1] != cert.factors[1]);

    try {
        factor_kernel_shift<Rational>(b, Mat<Rational>(mat({{1}, {0}})));
        FAIL("V outside N(T1) accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BadParameter);
    }
}

TEST_CASE("kernel_shift_idempotent")
{
    const auto b = standard_local(2, 2, mat({{1, 0}, {0, 0}}), mat({{1, 0}, {0, 0}}));
    // V maps into N(T1) = span(e2); C kills R(T1) and R(V) and lands in N(T2) = span(e2).
    const Mat<Rational> v = zeros<Rational>(2, 2);
    const Mat<Rational> c = mat({{0, 0}, {0, 5}});
    CHECK_THROWS_AS(factor_kernel_shift_idempotent<Rational>(b, c, mat({{0, 0}, {1, 0}})), Error);
    const auto cert = factor_kernel_shift_idempotent<Rational>(b, c, v);
    require_verified(cert);
    const auto sampled = factor_kernel_shift_idempotent<Rational>(b, 3);
    require_verified(sampled);
    CHECK_THROWS_AS(factor_kernel_shift_idempotent<Rational>(standard_local(1, 1, mat({{2}}), mat({{1}})), 0), Error);
}

TEST_CASE("projector_tail")
{
    const auto b = standard_local(1, 2, mat({{0}}), mat({{1, 0}}));
    const Mat<Rational> dd = mat({{1, 0}, {0, 0}});
    const auto cert = factor_projector_tail<Rational>(b, dd);
    CHECK(cert.factors[0] == mat({{1, 1, 0}, {0, 0, 0}, {0, 0, 0}}));
    CHECK(cert.factors[1] == mat({{0, 0, 0}, {0, 1, 0}, {0, 0, 0}}));
    require_verified(cert);
    const auto alt = factor_projector_tail<Rational>(b, dd, TailVariant::Reduced);
    CHECK(alt.factors[0] == cert.factors[0]);
    require_verified(alt);

    try {
        factor_projector_tail<Rational>(b, Mat<Rational>(mat({{0, 0}, {0, 1}})));
        FAIL("D with N(D) outside the admissible kernel accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BadParameter);
    }

    const auto family = projector_tail_family(b, 5, 9);
    CHECK(pairwise_distinct_second_factors(family));
}

TEST_CASE("invertible_pair")
{
    const auto b = standard_local(1, 1, mat({{4}}), mat({{2}}));
    const auto cert = factor_invertible_pair<Rational>(b, mat({{1}}), mat({{frac(1, 2)}}));
    CHECK(cert.parameters.at("B") == mat({{frac(7, 2)}}));
    CHECK(cert.factors[0] == mat({{1, frac(7, 2)}, {0, 0}}));
    CHECK(cert.factors[1] == mat({{frac(1, 2), frac(1, 4)}, {1, frac(1, 2)}}));
    require_verified(cert);

    const auto moved = factor_invertible_pair<Rational>(b, mat({{3}}), mat({{frac(3, 2)}}));
    require_verified(moved);
    CHECK(moved.factors[1] != cert.factors[1]);

    try {
        factor_invertible_pair<Rational>(standard_local(1, 1, mat({{1}}), mat({{2}})), mat({{1}}), mat({{2}}));
        FAIL("T1 = I accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotApplicable);
    }
    try {
        factor_invertible_pair<Rational>(b, mat({{0}}), mat({{frac(1, 2)}}));
        FAIL("singular C accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularParameter);
    }
}

TEST_CASE("auto_factor dispatch")
{
    const auto a5 = auto_factor<Rational>(mat({{5, 0}, {0, 0}}));
    REQUIRE(a5.certificate);
    CHECK(a5.certificate->recipe == Recipe::Embed);
    require_verified(*a5.certificate);

    const auto inv = auto_factor<Rational>(mat({{2, 1}, {1, 1}}));
    CHECK_FALSE(inv.certificate);
    REQUIRE(inv.annihilators);
    CHECK(inv.annihilators->verdict == AnnihilatorVerdict::FailsBoth);

    // R(T1) = R(T2) here, so the range-swallowing recipe is reached before embedding.
    const auto ones = auto_factor<Rational>(mat({{1, 1}, {1, 1}}));
    REQUIRE(ones.certificate);
    CHECK(ones.certificate->recipe == Recipe::RangeSwallow);
    require_verified(*ones.certificate);
    const auto b = local_block_rep<Rational>(mat({{1, 1}, {1, 1}}));
    CHECK(b.t1 == mat({{2}}));
    CHECK(b.t2 == mat({{1}}));
    require_verified(factor_embed(b));

    const auto idem = auto_factor<Rational>(mat({{1, 3}, {0, 0}}));
    REQUIRE(idem.certificate);
    CHECK(idem.certificate->recipe == Recipe::Idempotent);

    CHECK_FALSE(auto_factor<Rational>(identity<Rational>(2)).certificate);
    CHECK_FALSE(auto_factor<Rational>(zeros<Rational>(2, 2)).certificate);
}

TEST_CASE("auto_factor over every singular matrix of M_2(GF(3))")
{
    testing::for_each_matrix<Gf3>(2, 2, [](const Mat<Gf3>& t) {
        if (rank(t) == 2 || is_zero_matrix(t))
            return;
        const auto r = auto_factor(t);
        REQUIRE(r.certificate);
        require_verified(*r.certificate);
    });
}

TEST_CASE("auto_factor over floats")
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 2 + static_cast<Index>(rng() % 5);
        const Index r = 1 + static_cast<Index>(rng() % (n - 1));
        const Mat<double> t = testing::random_of_rank_at_most<double>(n, n, r, rng);
        const auto res = auto_factor(t);
        if (!res.certificate)
            continue;
        const auto report = verify_certificate(*res.certificate, 1e-8);
        INFO(to_string(res.certificate->recipe));
        REQUIRE(report.passed);
    }
}

TEST_CASE("Remark fixture: Q1 Q2 idempotent when ab = 1")
{
    const auto d = standard_decomposition<Rational>(2, 1);
    const auto cert = factor_corner_pair<Rational>(mat({{2}}), mat({{frac(1, 2)}}), d);
    CHECK(is_idempotent(cert.target));
    const auto d2 = standard_decomposition<Gf2>(2, 1);
    const auto c2 = factor_corner_pair<Gf2>(mat<Gf2>({{1}}), mat<Gf2>({{1}}), d2);
    CHECK(is_idempotent(c2.target));
}

TEMPLATE_TEST_CASE("recipe certificates on forced random instances", "", Rational, Gf2, Gf3, Gf5)
{
    using S = TestType;
    std::mt19937_64 rng(101);
    const int count = std::is_same_v<S, Rational> ? 60 : 100;
    for (int trial = 0; trial < count; ++trial) {
        require_verified(factor_range_swallow(testing::range_swallow_instance<S>(rng, 6)));
        require_verified(factor_embed(testing::embed_instance<S>(rng, 6)));
        require_verified(factor_kernel_shift(testing::kernel_shift_instance<S>(rng, 6), rng()));
        require_verified(factor_kernel_shift_idempotent(testing::idempotent_corner_instance<S>(rng, 6), rng()));
        require_verified(factor_projector_tail(testing::idempotent_corner_instance<S>(rng, 6, 2, true), rng()));
        const auto inv = testing::invertible_pair_instance<S>(rng, 6);
        require_verified(factor_invertible_pair(inv.b, inv.c, inv.d));
    }
}

TEST_CASE("parameter families give distinct second factors")
{
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        CHECK(pairwise_distinct_second_factors(kernel_shift_family(testing::kernel_shift_instance<Rational>(rng, 6), 10, rng())));
        CHECK(pairwise_distinct_second_factors(
            projector_tail_family(testing::idempotent_corner_instance<Rational>(rng, 6, 2, true), 10, rng())));
        const auto inv = testing::invertible_pair_instance<Rational>(rng, 6);
        CHECK(pairwise_distinct_second_factors(invertible_pair_family(inv.b, inv.c, inv.d, 5, rng())));
    }
}

TEST_CASE("samplers are deterministic in the seed")
{
    const auto b = standard_local(2, 1, mat({{2, 3}, {0, 0}}), mat({{1}, {0}}));
    CHECK(factor_kernel_shift(b, 7).factors == factor_kernel_shift(b, 7).factors);
}
