#pragma once

#include "idemfactor/matrix.hpp"

namespace idemfactor {

/// R(U) ⊆ R(V), decided by rank([V | U]) = rank(V).
template <class S>
bool range_included(const Mat<S>& u, const Mat<S>& v, Tolerance tol = {})
{
    if (u.rows() != v.rows())
        throw Error(ErrorKind::DimensionMismatch, "U is " + shape_of(u) + ", V is " + shape_of(v));
    return columns_in_span(u, v, tol);
}

/**
 * The minimal-kernel solution W0 of U = V·W0, i.e. the one with
 * N(W0) = N(U). Over Q and floats this is V⁺U. Over GF(p) the columnwise
 * solution with free variables zero is used; its kernel contains N(U), and
 * equality is checked by rank.
 */
template <class S>
Mat<S> douglas_solve(const Mat<S>& u, const Mat<S>& v, Tolerance tol = {})
{
    if (!range_included(u, v, tol))
        throw Error(ErrorKind::RangeNotContained, "R(U) is not contained in R(V)");
    Mat<S> w0;
    if constexpr (is_gf_v<S>) {
        // The free-variables-zero solution is a fixed linear map of U's columns,
        // so any relation among U's columns is inherited by W0.
        w0 = *solve_linear(v, u, tol);
        if (nullity(w0, tol) != nullity(u, tol))
            throw Error(ErrorKind::InternalNormalizationFailure, "N(W0) differs from N(U)");
    } else {
        w0 = pseudoinverse(v, tol) * u;
    }
    return w0;
}

template <class S>
struct DouglasReport
{
    Mat<S> w0;
    Index nullity_u = 0;
    Index nullity_w0 = 0;
    bool product_matches = false;
    bool kernel_equal = false;
};

/// douglas_solve plus an independent re-check of V·W0 = U and N(W0) = N(U).
template <class S>
DouglasReport<S> douglas_report(const Mat<S>& u, const Mat<S>& v, Tolerance tol = {}, double check_tol = 1e-9)
{
    DouglasReport<S> r;
    r.w0 = douglas_solve(u, v, tol);
    r.nullity_u = nullity(u, tol);
    r.nullity_w0 = nullity(r.w0, tol);
    r.product_matches = approx_equal<S>(v * r.w0, u, check_tol);
    const Mat<S> kernel = nullspace_basis(u, tol);
    r.kernel_equal = r.nullity_u == r.nullity_w0 && is_zero_matrix<S>(r.w0 * kernel, check_tol);
    return r;
}

}  // namespace idemfactor
