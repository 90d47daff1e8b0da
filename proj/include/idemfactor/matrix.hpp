#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "idemfactor/errors.hpp"
#include "idemfactor/field.hpp"

namespace idemfactor {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/**
 * Zero threshold for floating-point rank decisions. An entry is treated as
 * zero when its magnitude is at most `relative` times the largest entry
 * magnitude of the matrix being eliminated. Exact fields ignore it.
 */
struct Tolerance
{
    double relative = 1e-12;
};

template <class S>
Mat<S> identity(Index n)
{
    Mat<S> m = Mat<S>::Constant(n, n, S(0));
    for (Index i = 0; i < n; ++i)
        m(i, i) = S(1);
    return m;
}

template <class S>
Mat<S> zeros(Index rows, Index cols)
{
    return Mat<S>::Constant(rows, cols, S(0));
}

template <class S>
std::string shape_of(const Mat<S>& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

template <class S>
void require_square(const Mat<S>& m, const char* what)
{
    if (m.rows() != m.cols())
        throw Error(ErrorKind::NonSquare, std::string(what) + " is " + shape_of(m));
}

template <class S>
void require_same_shape(const Mat<S>& a, const Mat<S>& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": " + shape_of(a) + " vs " + shape_of(b));
}

/// Largest entry magnitude, used as the scale of relative tolerances.
template <class S>
double max_magnitude(const Mat<S>& m)
{
    double best = 0.0;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            best = std::max(best, Field<S>::magnitude(m(i, j)));
    return best;
}

/**
 * Size of a residual matrix: Frobenius norm over Q and floats, number of
 * nonzero entries over GF(p). Exact fields produce 0.0 exactly when the
 * residual matrix is zero.
 */
template <class S>
double residual_norm(const Mat<S>& m)
{
    if constexpr (is_gf_v<S>) {
        double count = 0.0;
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                count += m(i, j) == S(0) ? 0.0 : 1.0;
        return count;
    } else if constexpr (std::is_same_v<S, double>) {
        return m.size() == 0 ? 0.0 : m.norm();
    } else {
        Rational sum = 0;
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                sum += m(i, j) * m(i, j);
        return std::sqrt(sum.convert_to<double>());
    }
}

template <class S>
bool is_zero_matrix(const Mat<S>& m, double tol = 1e-9)
{
    if constexpr (is_exact_v<S>) {
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                if (m(i, j) != S(0))
                    return false;
        return true;
    } else {
        return residual_norm(m) <= tol;
    }
}

/**
 * Equality under the field's residual convention: exact for Q and GF(p),
 * ‖a − b‖_F ≤ tol·max(1, ‖a‖_F, ‖b‖_F) for floats.
 */
template <class S>
bool approx_equal(const Mat<S>& a, const Mat<S>& b, double tol = 1e-9)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    if constexpr (is_exact_v<S>) {
        return a == b;
    } else {
        const double scale = std::max({1.0, residual_norm(a), residual_norm(b)});
        return residual_norm<S>(a - b) <= tol * scale;
    }
}

template <class S>
struct Echelon
{
    Mat<S> reduced;
    std::vector<Index> pivots;

    Index rank() const { return static_cast<Index>(pivots.size()); }
};

/**
 * Reduced row echelon form. Exact fields pivot on the first nonzero entry;
 * floats use partial pivoting and flush entries below the relative threshold
 * to zero.
 */
template <class S>
Echelon<S> rref(Mat<S> m, Tolerance tol = {})
{
    const Index rows = m.rows();
    const Index cols = m.cols();
    std::vector<Index> pivots;
    double threshold = 0.0;
    if constexpr (!is_exact_v<S>)
        threshold = tol.relative * max_magnitude(m);

    auto negligible = [&](const S& x) {
        if constexpr (is_exact_v<S>)
            return x == S(0);
        else
            return std::abs(x) <= threshold;
    };

    Index row = 0;
    for (Index col = 0; col < cols && row < rows; ++col) {
        Index pivot_row = -1;
        if constexpr (is_exact_v<S>) {
            for (Index r = row; r < rows; ++r)
                if (m(r, col) != S(0)) {
                    pivot_row = r;
                    break;
                }
        } else {
            double best = threshold;
            for (Index r = row; r < rows; ++r)
                if (std::abs(m(r, col)) > best) {
                    best = std::abs(m(r, col));
                    pivot_row = r;
                }
        }
        if (pivot_row < 0) {
            for (Index r = row; r < rows; ++r)
                if (negligible(m(r, col)))
                    m(r, col) = S(0);
            continue;
        }
        if (pivot_row != row)
            m.row(pivot_row).swap(m.row(row));

        const S inv = S(1) / m(row, col);
        for (Index c = col; c < cols; ++c)
            m(row, c) *= inv;
        m(row, col) = S(1);

        for (Index r = 0; r < rows; ++r) {
            if (r == row || m(r, col) == S(0))
                continue;
            const S factor = m(r, col);
            for (Index c = col; c < cols; ++c) {
                m(r, c) -= factor * m(row, c);
                if (negligible(m(r, c)))
                    m(r, c) = S(0);
            }
            m(r, col) = S(0);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

template <class S>
Index rank(const Mat<S>& m, Tolerance tol = {})
{
    return rref(m, tol).rank();
}

template <class S>
Index nullity(const Mat<S>& m, Tolerance tol = {})
{
    return m.cols() - rank(m, tol);
}

/**
 * Basis of N(M) as columns. Free variables are taken in increasing column
 * order and each basis vector sets its own free coordinate to 1.
 */
template <class S>
Mat<S> nullspace_basis(const Mat<S>& m, Tolerance tol = {})
{
    const auto echelon = rref(m, tol);
    const Index cols = m.cols();
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (Index p : echelon.pivots)
        is_pivot[static_cast<std::size_t>(p)] = true;

    Mat<S> basis = zeros<S>(cols, cols - echelon.rank());
    Index out = 0;
    for (Index free = 0; free < cols; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)])
            continue;
        basis(free, out) = S(1);
        for (Index i = 0; i < echelon.rank(); ++i)
            basis(echelon.pivots[static_cast<std::size_t>(i)], out) = -echelon.reduced(i, free);
        ++out;
    }
    return basis;
}

/// The pivot columns of M, with their original entries.
template <class S>
Mat<S> colspace_basis(const Mat<S>& m, Tolerance tol = {})
{
    const auto echelon = rref(m, tol);
    Mat<S> basis(m.rows(), echelon.rank());
    for (Index i = 0; i < echelon.rank(); ++i)
        basis.col(i) = m.col(echelon.pivots[static_cast<std::size_t>(i)]);
    return basis;
}

template <class S>
Mat<S> hstack(const Mat<S>& a, const Mat<S>& b)
{
    if (a.rows() != b.rows())
        throw Error(ErrorKind::DimensionMismatch, "hstack: " + shape_of(a) + " vs " + shape_of(b));
    Mat<S> out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

/// Does every column of `a` lie in the column space of `b`?
template <class S>
bool columns_in_span(const Mat<S>& a, const Mat<S>& b, Tolerance tol = {})
{
    if (a.rows() != b.rows())
        throw Error(ErrorKind::DimensionMismatch, "span test: " + shape_of(a) + " vs " + shape_of(b));
    if (a.cols() == 0)
        return true;
    return rank(hstack(b, a), tol) == rank(b, tol);
}

/**
 * One solution X of A·X = B with every free variable set to zero, or nullopt
 * when some column of B is outside R(A). Works over every field.
 */
template <class S>
std::optional<Mat<S>> solve_linear(const Mat<S>& a, const Mat<S>& b, Tolerance tol = {})
{
    if (a.rows() != b.rows())
        throw Error(ErrorKind::DimensionMismatch, "solve_linear: " + shape_of(a) + " vs " + shape_of(b));
    const auto echelon = rref(hstack(a, b), tol);
    const Index n = a.cols();
    Mat<S> x = zeros<S>(n, b.cols());
    for (Index i = 0; i < echelon.rank(); ++i) {
        const Index p = echelon.pivots[static_cast<std::size_t>(i)];
        if (p >= n)
            return std::nullopt;
        x.row(p) = echelon.reduced.row(i).tail(b.cols());
    }
    return x;
}

template <class S>
std::optional<Mat<S>> try_inverse(const Mat<S>& m, Tolerance tol = {})
{
    require_square(m, "inverse argument");
    const Index n = m.rows();
    const auto echelon = rref(hstack(m, identity<S>(n)), tol);
    if (echelon.rank() < n || (n > 0 && echelon.pivots.back() >= n))
        return std::nullopt;
    return Mat<S>(echelon.reduced.rightCols(n));
}

template <class S>
Mat<S> inverse(const Mat<S>& m, Tolerance tol = {})
{
    auto inv = try_inverse(m, tol);
    if (!inv)
        throw Error(ErrorKind::Singular, "matrix of shape " + shape_of(m) + " is not invertible");
    return *inv;
}

template <class S>
bool is_invertible(const Mat<S>& m, Tolerance tol = {})
{
    return m.rows() == m.cols() && rank(m, tol) == m.rows();
}

/**
 * Moore–Penrose inverse. Over Q it is built from the full-rank factorization
 * M = F·G (F = pivot columns, G = nonzero RREF rows) as
 * Gᵀ(GGᵀ)⁻¹(FᵀF)⁻¹Fᵀ, so all four Penrose identities hold exactly.
 */
template <class S>
Mat<S> pseudoinverse(const Mat<S>& m, Tolerance tol = {})
{
    if constexpr (is_gf_v<S>) {
        throw Error(ErrorKind::FieldUnsupported,
                    "pseudoinverse needs an inner product; use solve_linear over GF(p)");
    } else if constexpr (std::is_same_v<S, double>) {
        if (m.size() == 0)
            return zeros<S>(m.cols(), m.rows());
        Eigen::CompleteOrthogonalDecomposition<Mat<double>> cod;
        cod.setThreshold(tol.relative);
        cod.compute(m);
        return cod.pseudoInverse();
    } else {
        const auto echelon = rref(m, tol);
        const Index r = echelon.rank();
        if (r == 0)
            return zeros<S>(m.cols(), m.rows());
        Mat<S> f(m.rows(), r);
        for (Index i = 0; i < r; ++i)
            f.col(i) = m.col(echelon.pivots[static_cast<std::size_t>(i)]);
        const Mat<S> g = echelon.reduced.topRows(r);
        const Mat<S> gt = g.transpose();
        const Mat<S> ft = f.transpose();
        const Mat<S> ggt = g * gt;
        const Mat<S> ftf = ft * f;
        return gt * inverse(ggt) * inverse(ftf) * ft;
    }
}

/// Left inverse of an injective J: J⁺ over Q and floats, any left inverse over GF(p).
template <class S>
std::optional<Mat<S>> left_inverse(const Mat<S>& j, Tolerance tol = {})
{
    if (rank(j, tol) != j.cols())
        return std::nullopt;
    if constexpr (is_gf_v<S>) {
        auto xt = solve_linear<S>(j.transpose(), identity<S>(j.cols()), tol);
        if (!xt)
            return std::nullopt;
        return Mat<S>(xt->transpose());
    } else {
        return pseudoinverse(j, tol);
    }
}

}  // namespace idemfactor
