#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "idemfactor/certificate.hpp"
#include "idemfactor/douglas.hpp"

namespace idemfactor {

inline constexpr int max_sampling_attempts = 100;

/// Small random entries: {−spread, …, spread} over Q and floats, any residue over GF(p).
template <class S>
S random_scalar(std::mt19937_64& rng, int spread = 3)
{
    if constexpr (is_gf_v<S>)
        return S(static_cast<long long>(rng() % static_cast<std::uint64_t>(S::characteristic)));
    else
        return S(static_cast<int>(rng() % static_cast<std::uint64_t>(2 * spread + 1)) - spread);
}

template <class S>
Mat<S> random_matrix(Index rows, Index cols, std::mt19937_64& rng, int spread = 3)
{
    Mat<S> m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = random_scalar<S>(rng, spread);
    return m;
}

/// Q_B = [I_K, B; 0, 0], the idempotent with range K and nullspace {−Bl + l}.
template <class S>
Mat<S> range_k_idempotent(const Decomposition<S>& d, const Mat<S>& b)
{
    return assemble(d, identity<S>(d.k()), b, zeros<S>(d.l(), d.k()), zeros<S>(d.l(), d.l()));
}

namespace detail {

template <class S>
void require_local(const BlockRep<S>& b)
{
    check_block_shapes(b.decomposition, b.t1, b.t2, b.t3, b.t4);
    if (!b.local && (!is_zero_matrix(b.t3) || !is_zero_matrix(b.t4)))
        throw Error(ErrorKind::NotApplicable, "block representation is not local (T3, T4 must vanish)");
}

template <class S>
Mat<S> local_target(const BlockRep<S>& b)
{
    const auto& d = b.decomposition;
    return assemble(d, b.t1, b.t2, zeros<S>(d.l(), d.k()), zeros<S>(d.l(), d.l()));
}

template <class S>
void require_shape(const Mat<S>& m, Index rows, Index cols, const char* name)
{
    if (m.rows() != rows || m.cols() != cols)
        throw Error(ErrorKind::DimensionMismatch, std::string(name) + " is " + shape_of(m) + ", expected " +
                                                      std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace detail

/**
 * T_{B,C,D} = [T1 − BC, T2 − BD; C, D]. Whatever the parameters, Q_B·S = T,
 * so T is a product of two idempotents exactly when some choice makes S
 * idempotent.
 */
template <class S>
Mat<S> peel_candidate(const BlockRep<S>& b, const Mat<S>& bb, const Mat<S>& c, const Mat<S>& d)
{
    detail::require_local(b);
    const Index k = b.decomposition.k();
    const Index l = b.decomposition.l();
    detail::require_shape(bb, k, l, "B");
    detail::require_shape(c, l, k, "C");
    detail::require_shape(d, l, l, "D");
    return assemble(b.decomposition, Mat<S>(b.t1 - bb * c), Mat<S>(b.t2 - bb * d), c, d);
}

/**
 * T = Q0·Q1⋯Qs with Q0 = [I, T2; 0, 0] and Qj = [Ej, 0; 0, I], given
 * idempotents E1⋯Es whose product is T1.
 */
template <class S>
Certificate<S> lift_factorization(const BlockRep<S>& b, const std::vector<Mat<S>>& factors_of_t1, double tol = 1e-9)
{
    detail::require_local(b);
    const auto& d = b.decomposition;
    const Index k = d.k();
    const Index l = d.l();
    for (std::size_t i = 0; i < factors_of_t1.size(); ++i) {
        detail::require_shape(factors_of_t1[i], k, k, "factor of T1");
        if (!is_idempotent(factors_of_t1[i], tol))
            throw Error(ErrorKind::FactorNotIdempotent, "factor " + std::to_string(i + 1) + " of T1 is not idempotent");
    }
    if (!approx_equal(ordered_product(factors_of_t1, k), b.t1, tol))
        throw Error(ErrorKind::ProductMismatch, "the factors do not multiply to T1");

    std::vector<Mat<S>> factors{range_k_idempotent(d, b.t2)};
    for (const auto& e : factors_of_t1)
        factors.push_back(assemble(d, e, zeros<S>(k, l), zeros<S>(l, k), identity<S>(l)));
    return detail::make_certificate(detail::local_target(b), std::optional<Decomposition<S>>(d), std::move(factors),
                                    Recipe::Lift, {{"B", b.t2}});
}

enum class CornerOrder { KL, LK };

/**
 * E1 = [I, B; 0, 0], E2 = [0, 0; C, I]. Order KL certifies
 * E1E2 = [BC, B; 0, 0]; order LK certifies E2E1 = [0, 0; C, CB].
 */
template <class S>
Certificate<S> factor_corner_pair(const Mat<S>& bb, const Mat<S>& c, const Decomposition<S>& d,
                                  CornerOrder order = CornerOrder::KL)
{
    const Index k = d.k();
    const Index l = d.l();
    detail::require_shape(bb, k, l, "B");
    detail::require_shape(c, l, k, "C");
    const Mat<S> e1 = range_k_idempotent(d, bb);
    const Mat<S> e2 = assemble(d, zeros<S>(k, k), zeros<S>(k, l), c, identity<S>(l));
    std::vector<Mat<S>> factors = order == CornerOrder::KL ? std::vector<Mat<S>>{e1, e2} : std::vector<Mat<S>>{e2, e1};
    Mat<S> target = factors[0] * factors[1];
    return detail::make_certificate(std::move(target), std::optional<Decomposition<S>>(d), std::move(factors),
                                    Recipe::CornerPair, {{"B", bb}, {"C", c}});
}

/// R(T1) ⊆ R(T2): T1 = T2C with C minimal-kernel, E1 = [I, T2; 0, 0], E2 = [0, 0; C, I].
template <class S>
Certificate<S> factor_range_swallow(const BlockRep<S>& b, Tolerance tol = {})
{
    detail::require_local(b);
    const auto& d = b.decomposition;
    if (!range_included(b.t1, b.t2, tol))
        throw Error(ErrorKind::NotApplicable, "R(T1) is not contained in R(T2)");
    const Mat<S> c = douglas_solve(b.t1, b.t2, tol);
    std::vector<Mat<S>> factors{range_k_idempotent(d, b.t2),
                                assemble(d, zeros<S>(d.k(), d.k()), zeros<S>(d.k(), d.l()), c, identity<S>(d.l()))};
    return detail::make_certificate(detail::local_target(b), std::optional<Decomposition<S>>(d), std::move(factors),
                                    Recipe::RangeSwallow, {{"C", c}});
}

/**
 * Mirrored form [0, 0; σ3, σ4] with R(σ4) ⊆ R(σ3): σ4 = σ3B and
 * T = [0, 0; σ3, I]·[I, B; 0, 0].
 */
template <class S>
Certificate<S> factor_range_swallow_mirror(const BlockRep<S>& b, Tolerance tol = {})
{
    check_block_shapes(b.decomposition, b.t1, b.t2, b.t3, b.t4);
    if (!is_zero_matrix(b.t1) || !is_zero_matrix(b.t2))
        throw Error(ErrorKind::NotApplicable, "mirrored form needs T1 = 0 and T2 = 0");
    const auto& d = b.decomposition;
    if (!range_included(b.t4, b.t3, tol))
        throw Error(ErrorKind::NotApplicable, "R(T4) is not contained in R(T3)");
    const Mat<S> bb = douglas_solve(b.t4, b.t3, tol);
    std::vector<Mat<S>> factors{assemble(d, zeros<S>(d.k(), d.k()), zeros<S>(d.k(), d.l()), b.t3, identity<S>(d.l())),
                                range_k_idempotent(d, bb)};
    Mat<S> target = assemble(d, zeros<S>(d.k(), d.k()), zeros<S>(d.k(), d.l()), b.t3, b.t4);
    return detail::make_certificate(std::move(target), std::optional<Decomposition<S>>(d), std::move(factors),
                                    Recipe::RangeSwallowMirror, {{"B", bb}});
}

/// The default J: i-th K-coordinate to i-th L-coordinate.
template <class S>
Mat<S> default_embedding(const Decomposition<S>& d)
{
    return standard_basis_vectors<S>(d.l(), 0, d.k());
}

/**
 * R(T2) ⊆ R(T1) and dim K ≤ dim L. With T2 = T1B and an injection J: K → L
 * with left inverse J*,
 *   U = [I, (T1 − I)J* + B; 0, 0],  V = [I − BJ, B − BJB; J, JB],
 * and T = UV.
 */
template <class S>
Certificate<S> factor_embed(const BlockRep<S>& b, const std::optional<Mat<S>>& j_in = {}, Tolerance tol = {})
{
    detail::require_local(b);
    const auto& d = b.decomposition;
    const Index k = d.k();
    const Index l = d.l();
    if (k > l)
        throw Error(ErrorKind::NotApplicable, "dim K > dim L: K does not embed in L");
    if (!range_included(b.t2, b.t1, tol))
        throw Error(ErrorKind::NotApplicable, "R(T2) is not contained in R(T1)");
    const Mat<S> j = j_in ? *j_in : default_embedding(d);
    detail::require_shape(j, l, k, "J");
    const auto j_star = left_inverse(j, tol);
    if (!j_star || !approx_equal<S>(*j_star * j, identity<S>(k)))
        throw Error(ErrorKind::BadJ, "J has no left inverse (J*J != I)");
    const Mat<S> bb = douglas_solve(b.t2, b.t1, tol);
    const Mat<S> ik = identity<S>(k);
    const Mat<S> u = range_k_idempotent(d, Mat<S>((b.t1 - ik) * *j_star + bb));
    const Mat<S> v = assemble(d, Mat<S>(ik - bb * j), Mat<S>(bb - bb * j * bb), j, Mat<S>(j * bb));
    return detail::make_certificate(detail::local_target(b), std::optional<Decomposition<S>>(d),
                                    std::vector<Mat<S>>{u, v}, Recipe::Embed, {{"B", bb}, {"J", j}});
}

/// V = N(T1)-basis × random coefficients, so R(V) ⊆ N(T1).
template <class S>
Mat<S> sample_kernel_shift(const Mat<S>& t1, Index l, std::mt19937_64& rng, Tolerance tol = {}, int spread = 3)
{
    const Mat<S> kernel = nullspace_basis(t1, tol);
    return kernel * random_matrix<S>(kernel.cols(), l, rng, spread);
}

/**
 * R(T1) ⊆ R(T2) and N(T1) ≠ {0}: with T1 = T2C (N(C) = N(T1)) and any V
 * with R(V) ⊆ N(T1), E1 = [I, T2 − V; 0, 0] and E2 = [VC, V; C, I].
 */
template <class S>
Certificate<S> factor_kernel_shift(const BlockRep<S>& b, const Mat<S>& v, Tolerance tol = {})
{
    detail::require_local(b);
    const auto& d = b.decomposition;
    if (!range_included(b.t1, b.t2, tol))
        throw Error(ErrorKind::NotApplicable, "R(T1) is not contained in R(T2)");
    if (nullity(b.t1, tol) == 0)
        throw Error(ErrorKind::NotApplicable, "N(T1) = {0}");
    detail::require_shape(v, d.k(), d.l(), "V");
    if (!is_zero_matrix<S>(b.t1 * v))
        throw Error(ErrorKind::BadParameter, "R(V) is not contained in N(T1)");
    const Mat<S> c = douglas_solve(b.t1, b.t2, tol);
    std::vector<Mat<S>> factors{range_k_idempotent(d, Mat<S>(b.t2 - v)),
                                assemble(d, Mat<S>(v * c), v, c, identity<S>(d.l()))};
    return detail::make_certificate(detail::local_target(b), std::optional<Decomposition<S>>(d), std::move(factors),
                                    Recipe::KernelShift, {{"C", c}, {"V", v}});
}

template <class S>
Certificate<S> factor_kernel_shift(const BlockRep<S>& b, std::uint64_t seed, Tolerance tol = {})
{
    detail::require_local(b);
    std::mt19937_64 rng(seed);
    return factor_kernel_shift(b, sample_kernel_shift(b.t1, b.decomposition.l(), rng, tol), tol);
}

/**
 * `count` certificates with pairwise distinct E2, from V's drawn off one
 * seeded stream. Each repeated draw widens the entry range; over GF(p) the
 * family may simply not exist, which surfaces as BadParameter.
 */
template <class S>
std::vector<Certificate<S>> kernel_shift_family(const BlockRep<S>& b, int count, std::uint64_t seed, Tolerance tol = {})
{
    detail::require_local(b);
    std::mt19937_64 rng(seed);
    std::vector<Certificate<S>> out;
    int collisions = 0;
    while (static_cast<int>(out.size()) < count) {
        const Mat<S> v = sample_kernel_shift(b.t1, b.decomposition.l(), rng, tol, 3 + collisions);
        const bool seen = std::any_of(out.begin(), out.end(),
                                      [&](const Certificate<S>& c) { return approx_equal(c.parameters.at("V"), v); });
        if (seen) {
            if (++collisions > max_sampling_attempts)
                throw Error(ErrorKind::BadParameter, "could not draw " + std::to_string(count) + " distinct V");
            continue;
        }
        out.push_back(factor_kernel_shift(b, v, tol));
    }
    return out;
}

/**
 * T1 idempotent, T1 ≠ I: E1 = [I, T2 − V; 0, 0], E2 = [T1 + VC, V; C, I]
 * provided T1V = 0, CV = 0, CT1 = 0 and T2C = 0.
 */
template <class S>
Certificate<S> factor_kernel_shift_idempotent(const BlockRep<S>& b, const Mat<S>& c, const Mat<S>& v,
                                              double tol = 1e-9)
{
    detail::require_local(b);
    const auto& d = b.decomposition;
    const Index k = d.k();
    const Index l = d.l();
    if (!is_idempotent(b.t1, tol))
        throw Error(ErrorKind::NotApplicable, "T1 is not idempotent");
    if (approx_equal<S>(b.t1, identity<S>(k), tol))
        throw Error(ErrorKind::NotApplicable, "T1 = I: T is already idempotent");
    detail::require_shape(c, l, k, "C");
    detail::require_shape(v, k, l, "V");
    if (!is_zero_matrix<S>(b.t1 * v, tol))
        throw Error(ErrorKind::BadParameter, "R(V) is not contained in N(T1)");
    if (!is_zero_matrix<S>(c * v, tol) || !is_zero_matrix<S>(c * b.t1, tol))
        throw Error(ErrorKind::BadParameter, "N(C) must contain R(V) and R(T1)");
    if (!is_zero_matrix<S>(b.t2 * c, tol))
        throw Error(ErrorKind::BadParameter, "R(C) is not contained in N(T2)");
    std::vector<Mat<S>> factors{range_k_idempotent(d, Mat<S>(b.t2 - v)),
                                assemble(d, Mat<S>(b.t1 + v * c), v, c, identity<S>(l))};
    return detail::make_certificate(detail::local_target(b), std::optional<Decomposition<S>>(d), std::move(factors),
                                    Recipe::KernelShiftIdempotent, {{"C", c}, {"V", v}});
}

/// Admissible (C, V): V from N(T1), then C = N(T2)-basis · Y · (left null vectors of [T1 | V]).
template <class S>
std::pair<Mat<S>, Mat<S>> sample_kernel_shift_idempotent(const BlockRep<S>& b, std::mt19937_64& rng, Tolerance tol = {})
{
    const Index k = b.decomposition.k();
    const Index l = b.decomposition.l();
    const Mat<S> v = sample_kernel_shift(b.t1, l, rng, tol);
    const Mat<S> w = hstack(b.t1, v);
    const Mat<S> wt = w.transpose();
    const Mat<S> left_null = nullspace_basis(wt, tol);
    const Mat<S> n2 = nullspace_basis(b.t2, tol);
    Mat<S> c = zeros<S>(l, k);
    if (left_null.cols() > 0 && n2.cols() > 0)
        c = n2 * random_matrix<S>(n2.cols(), left_null.cols(), rng) * left_null.transpose();
    return {c, v};
}

template <class S>
Certificate<S> factor_kernel_shift_idempotent(const BlockRep<S>& b, std::uint64_t seed, Tolerance tol = {})
{
    detail::require_local(b);
    std::mt19937_64 rng(seed);
    auto [c, v] = sample_kernel_shift_idempotent(b, rng, tol);
    return factor_kernel_shift_idempotent(b, c, v);
}

enum class TailVariant { Full, Reduced };

namespace detail {

template <class S>
void require_projector_tail_setting(const BlockRep<S>& b, double tol)
{
    require_local(b);
    const Index k = b.decomposition.k();
    if (!is_idempotent(b.t1, tol))
        throw Error(ErrorKind::NotApplicable, "T1 is not idempotent");
    if (approx_equal<S>(b.t1, identity<S>(k), tol))
        throw Error(ErrorKind::NotApplicable, "T1 = I: T is already idempotent");
    if (b.decomposition.l() < 2)
        throw Error(ErrorKind::NotApplicable, "dim L < 2");
}

template <class S>
Mat<S> tail_defect(const BlockRep<S>& b)
{
    return (identity<S>(b.decomposition.k()) - b.t1) * b.t2;
}

}  // namespace detail

/**
 * T1 idempotent, T1 ≠ I, dim L ≥ 2, and D idempotent with
 * {0} ≠ N(D) ≠ L and N(D) ⊆ N((I − T1)T2). Then
 *   E2 = [T1, T2(I − D); 0, D]
 * and T = E1E2 with E1 = [I, T2; 0, 0], or T = E1'E2 with E1' = [I, T2D; 0, 0].
 */
template <class S>
Certificate<S> factor_projector_tail(const BlockRep<S>& b, const Mat<S>& dd, TailVariant variant = TailVariant::Full,
                                     double tol = 1e-9, Tolerance rank_tol = {})
{
    detail::require_projector_tail_setting(b, tol);
    const auto& d = b.decomposition;
    const Index k = d.k();
    const Index l = d.l();
    detail::require_shape(dd, l, l, "D");
    if (!is_idempotent(dd, tol))
        throw Error(ErrorKind::BadParameter, "D is not idempotent");
    const Index kernel_dim = nullity(dd, rank_tol);
    if (kernel_dim == 0 || kernel_dim == l)
        throw Error(ErrorKind::BadParameter, "N(D) must be neither {0} nor L");
    const Mat<S> il = identity<S>(l);
    if (!is_zero_matrix<S>(detail::tail_defect(b) * (il - dd), tol))
        throw Error(ErrorKind::BadParameter, "N(D) is not contained in N((I - T1)T2)");

    const Mat<S> e2 = assemble(d, b.t1, Mat<S>(b.t2 * (il - dd)), zeros<S>(l, k), dd);
    const Mat<S> e1 = variant == TailVariant::Full ? range_k_idempotent(d, b.t2)
                                                   : range_k_idempotent(d, Mat<S>(b.t2 * dd));
    return detail::make_certificate(detail::local_target(b), std::optional<Decomposition<S>>(d),
                                    std::vector<Mat<S>>{e1, e2},
                                    variant == TailVariant::Full ? Recipe::ProjectorTail : Recipe::ProjectorTailAlt,
                                    {{"D", dd}});
}

/**
 * A projector with a one-dimensional kernel inside N((I − T1)T2): kernel
 * line v and range R are drawn at random, then D = [R | v]·diag(I, 0)·[R | v]⁻¹.
 */
template <class S>
Mat<S> sample_projector_tail(const BlockRep<S>& b, std::mt19937_64& rng, Tolerance tol = {}, int spread = 3)
{
    const Index l = b.decomposition.l();
    const Mat<S> admissible = nullspace_basis(detail::tail_defect(b), tol);
    if (admissible.cols() == 0)
        throw Error(ErrorKind::NotApplicable, "N((I - T1)T2) = {0}: N(T2) = {0} and R(T1) meets R(T2) trivially");
    Mat<S> diag = identity<S>(l);
    diag(l - 1, l - 1) = S(0);
    for (int attempt = 0; attempt < max_sampling_attempts; ++attempt) {
        const Mat<S> v = admissible * random_matrix<S>(admissible.cols(), 1, rng, spread);
        if (is_zero_matrix(v))
            continue;
        const Mat<S> frame = hstack(random_matrix<S>(l, l - 1, rng, spread), v);
        const auto inv = try_inverse(frame, tol);
        if (!inv)
            continue;
        return frame * diag * *inv;
    }
    throw Error(ErrorKind::BadParameter, "no admissible D found within the attempt budget");
}

template <class S>
Certificate<S> factor_projector_tail(const BlockRep<S>& b, std::uint64_t seed, TailVariant variant = TailVariant::Full,
                                     Tolerance tol = {})
{
    detail::require_projector_tail_setting(b, 1e-9);
    std::mt19937_64 rng(seed);
    return factor_projector_tail(b, sample_projector_tail(b, rng, tol), variant, 1e-9, tol);
}

/// `count` projector-tail certificates with pairwise distinct D (hence distinct E2).
template <class S>
std::vector<Certificate<S>> projector_tail_family(const BlockRep<S>& b, int count, std::uint64_t seed,
                                                  TailVariant variant = TailVariant::Full, Tolerance tol = {})
{
    detail::require_projector_tail_setting(b, 1e-9);
    std::mt19937_64 rng(seed);
    std::vector<Certificate<S>> out;
    int collisions = 0;
    while (static_cast<int>(out.size()) < count) {
        const Mat<S> dd = sample_projector_tail(b, rng, tol, 3 + collisions);
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Certificate<S>& c) {
            return approx_equal(c.parameters.at("D"), dd);
        });
        if (seen) {
            if (++collisions > max_sampling_attempts)
                throw Error(ErrorKind::BadParameter, "could not draw " + std::to_string(count) + " distinct D");
            continue;
        }
        out.push_back(factor_projector_tail(b, dd, variant, 1e-9, tol));
    }
    return out;
}

/**
 * dim K = dim L, T1 ≠ I, C and D invertible with T1C⁻¹ = T2D⁻¹. Then
 *   B = T1C⁻¹ − C⁻¹(I − D),
 *   E1 = [I, B; 0, 0],  E2 = [I − C⁻¹DC, C⁻¹(I − D)D; C, D].
 */
template <class S>
Certificate<S> factor_invertible_pair(const BlockRep<S>& b, const Mat<S>& c, const Mat<S>& dd, double tol = 1e-9,
                                      Tolerance rank_tol = {})
{
    detail::require_local(b);
    const auto& d = b.decomposition;
    const Index k = d.k();
    const Index l = d.l();
    if (k != l)
        throw Error(ErrorKind::NotApplicable, "dim K != dim L");
    if (approx_equal<S>(b.t1, identity<S>(k), tol))
        throw Error(ErrorKind::NotApplicable, "T1 = I: T is already idempotent");
    detail::require_shape(c, l, k, "C");
    detail::require_shape(dd, l, l, "D");
    const auto c_inv = try_inverse(c, rank_tol);
    const auto d_inv = try_inverse(dd, rank_tol);
    if (!c_inv || !d_inv)
        throw Error(ErrorKind::SingularParameter, c_inv ? "D is not invertible" : "C is not invertible");
    if (!approx_equal<S>(b.t1 * *c_inv, b.t2 * *d_inv, tol))
        throw Error(ErrorKind::NotApplicable, "T1 C^-1 != T2 D^-1");
    const Mat<S> il = identity<S>(l);
    const Mat<S> bb = b.t1 * *c_inv - *c_inv * (il - dd);
    const Mat<S> e2 = assemble(d, Mat<S>(identity<S>(k) - *c_inv * dd * c), Mat<S>(*c_inv * (il - dd) * dd), c, dd);
    return detail::make_certificate(detail::local_target(b), std::optional<Decomposition<S>>(d),
                                    std::vector<Mat<S>>{range_k_idempotent(d, bb), e2}, Recipe::InvertiblePair,
                                    {{"B", bb}, {"C", c}, {"D", dd}});
}

/**
 * An admissible (C, D) when R(T1) ⊆ R(T2): C = I and D⁻¹ = W0 + N(T2)·R
 * with T1 = T2W0, resampled until D⁻¹ is invertible.
 */
template <class S>
std::pair<Mat<S>, Mat<S>> sample_invertible_pair(const BlockRep<S>& b, std::mt19937_64& rng, Tolerance tol = {})
{
    const Index k = b.decomposition.k();
    if (k != b.decomposition.l())
        throw Error(ErrorKind::NotApplicable, "dim K != dim L");
    if (!range_included(b.t1, b.t2, tol))
        throw Error(ErrorKind::NotApplicable, "R(T1) is not contained in R(T2)");
    const Mat<S> w0 = douglas_solve(b.t1, b.t2, tol);
    const Mat<S> n2 = nullspace_basis(b.t2, tol);
    for (int attempt = 0; attempt < max_sampling_attempts; ++attempt) {
        const Mat<S> d_inv = w0 + n2 * random_matrix<S>(n2.cols(), k, rng);
        if (auto dd = try_inverse(d_inv, tol))
            return {identity<S>(k), *dd};
        if (n2.cols() == 0)
            break;
    }
    throw Error(ErrorKind::NotApplicable, "no invertible D with T1 = T2 D^-1 found");
}

/**
 * Further certificates from (C, D) ↦ (D'C, D'D) for random invertible D'.
 * The first member is (C, D) itself; E2's are pairwise distinct.
 */
template <class S>
std::vector<Certificate<S>> invertible_pair_family(const BlockRep<S>& b, const Mat<S>& c, const Mat<S>& dd, int count,
                                                   std::uint64_t seed, Tolerance tol = {})
{
    std::mt19937_64 rng(seed);
    std::vector<Certificate<S>> out;
    if (count <= 0)
        return out;
    out.push_back(factor_invertible_pair(b, c, dd, 1e-9, tol));
    const Index l = b.decomposition.l();
    int failures = 0;
    while (static_cast<int>(out.size()) < count) {
        const Mat<S> shift = random_matrix<S>(l, l, rng);
        auto fresh = [&]() -> std::optional<Certificate<S>> {
            if (!is_invertible(shift, tol))
                return std::nullopt;
            auto cert = factor_invertible_pair(b, Mat<S>(shift * c), Mat<S>(shift * dd), 1e-9, tol);
            for (const auto& prev : out)
                if (approx_equal(prev.factors[1], cert.factors[1]))
                    return std::nullopt;
            return cert;
        }();
        if (!fresh) {
            if (++failures > max_sampling_attempts)
                throw Error(ErrorKind::BadParameter, "could not draw " + std::to_string(count) + " distinct pairs");
            continue;
        }
        failures = 0;
        out.push_back(std::move(*fresh));
    }
    return out;
}

/// Outcome of the dispatcher: a certificate, or why every recipe declined.
template <class S>
struct AutoResult
{
    std::optional<Certificate<S>> certificate;
    std::vector<std::pair<std::string, std::string>> declined;
    std::optional<AnnihilatorReport<S>> annihilators;
};

struct AutoOptions
{
    std::uint64_t seed = 0;
    Tolerance tol{};
    bool allow_lift = true;
};

/**
 * Tries, in order: idempotent, range_swallow, embed, kernel_shift,
 * kernel_shift_idempotent, projector_tail, invertible_pair, then lift with
 * T1 factored by one nested (non-lifting) call. K is taken as R(T).
 */
template <class S>
AutoResult<S> auto_factor(const Mat<S>& t, AutoOptions opt = {})
{
    require_square(t, "operator");
    const Index n = t.rows();
    AutoResult<S> result;
    if (is_zero_matrix(t) || approx_equal<S>(t, identity<S>(n))) {
        result.declined.emplace_back("trivial", "T is 0 or I, which are excluded from products of idempotents");
        return result;
    }
    if (is_idempotent(t)) {
        result.certificate = detail::make_certificate(t, std::optional<Decomposition<S>>{}, std::vector<Mat<S>>{t},
                                                      Recipe::Idempotent);
        return result;
    }
    result.declined.emplace_back("idempotent", "T^2 != T");
    auto report = annihilator_report(t, opt.tol);
    if (report.verdict != AnnihilatorVerdict::PassesNecessary) {
        result.declined.emplace_back("annihilators", std::string(to_string(report.verdict)));
        result.annihilators = std::move(report);
        return result;
    }

    const BlockRep<S> b = local_block_rep(t, opt.tol);
    auto attempt = [&](Recipe r, auto&& make) {
        if (result.certificate)
            return;
        try {
            result.certificate = make();
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::InternalNormalizationFailure)
                throw;
            result.declined.emplace_back(std::string(to_string(r)), e.what());
        }
    };
    attempt(Recipe::RangeSwallow, [&] { return factor_range_swallow(b, opt.tol); });
    attempt(Recipe::Embed, [&] { return factor_embed(b, std::optional<Mat<S>>{}, opt.tol); });
    attempt(Recipe::KernelShift, [&] { return factor_kernel_shift(b, opt.seed, opt.tol); });
    attempt(Recipe::KernelShiftIdempotent, [&] { return factor_kernel_shift_idempotent(b, opt.seed, opt.tol); });
    attempt(Recipe::ProjectorTail, [&] { return factor_projector_tail(b, opt.seed, TailVariant::Full, opt.tol); });
    attempt(Recipe::InvertiblePair, [&] {
        std::mt19937_64 rng(opt.seed);
        auto [c, dd] = sample_invertible_pair(b, rng, opt.tol);
        return factor_invertible_pair(b, c, dd, 1e-9, opt.tol);
    });
    if (opt.allow_lift) {
        attempt(Recipe::Lift, [&] {
            std::vector<Mat<S>> inner;
            if (is_idempotent(b.t1)) {
                inner = {b.t1};
            } else {
                AutoOptions nested = opt;
                nested.allow_lift = false;
                auto sub = auto_factor(b.t1, nested);
                if (!sub.certificate)
                    throw Error(ErrorKind::NotApplicable, "T1 has no certificate one level down");
                inner = sub.certificate->factors;
            }
            return lift_factorization(b, inner);
        });
    }
    if (!result.certificate)
        result.annihilators = std::move(report);
    return result;
}

}  // namespace idemfactor
