#pragma once

#include <optional>
#include <utility>

#include "idemfactor/matrix.hpp"

namespace idemfactor {

/**
 * A splitting X = K ⊕ L of the ambient space given by two bases. The
 * change-of-basis matrix P = [K | L] and its inverse are cached; all block
 * data elsewhere lives in these (K, L) coordinates.
 */
template <class S>
class Decomposition
{
  public:
    Decomposition(Mat<S> k_basis, Mat<S> l_basis, Tolerance tol = {})
        : k_basis_(std::move(k_basis)), l_basis_(std::move(l_basis))
    {
        if (k_basis_.rows() != l_basis_.rows())
            throw Error(ErrorKind::DimensionMismatch,
                        "K basis " + shape_of(k_basis_) + " and L basis " + shape_of(l_basis_));
        const Index n = k_basis_.rows();
        if (k_basis_.cols() < 1 || k_basis_.cols() > n - 1)
            throw Error(ErrorKind::BadDimension,
                        "K must satisfy {0} != K != X; got dim K = " + std::to_string(k_basis_.cols()) +
                            " in dimension " + std::to_string(n));
        if (k_basis_.cols() + l_basis_.cols() != n)
            throw Error(ErrorKind::BadDimension, "dim K + dim L must equal the ambient dimension");
        change_ = hstack(k_basis_, l_basis_);
        auto inv = try_inverse(change_, tol);
        if (!inv)
            throw Error(ErrorKind::DependentColumns, "columns of [K | L] do not form a basis");
        change_inverse_ = std::move(*inv);
    }

    Index ambient_dim() const { return change_.rows(); }
    Index k() const { return k_basis_.cols(); }
    Index l() const { return l_basis_.cols(); }

    const Mat<S>& k_basis() const { return k_basis_; }
    const Mat<S>& l_basis() const { return l_basis_; }
    const Mat<S>& change_of_basis() const { return change_; }
    const Mat<S>& change_of_basis_inverse() const { return change_inverse_; }

    /// p_K and p_L as maps X → K and X → L in coordinates (rows of P⁻¹).
    Mat<S> k_coordinates() const { return change_inverse_.topRows(k()); }
    Mat<S> l_coordinates() const { return change_inverse_.bottomRows(l()); }

    bool operator==(const Decomposition& other) const
    {
        return k_basis_ == other.k_basis_ && l_basis_ == other.l_basis_;
    }

  private:
    Mat<S> k_basis_;
    Mat<S> l_basis_;
    Mat<S> change_;
    Mat<S> change_inverse_;
};

template <class S>
Mat<S> standard_basis_vectors(Index n, Index first, Index count)
{
    Mat<S> out = zeros<S>(n, count);
    for (Index i = 0; i < count; ++i)
        out(first + i, i) = S(1);
    return out;
}

/// The coordinate splitting K = span(e_1..e_k), L = span(e_{k+1}..e_n).
template <class S>
Decomposition<S> standard_decomposition(Index n, Index k)
{
    return Decomposition<S>(standard_basis_vectors<S>(n, 0, k), standard_basis_vectors<S>(n, k, n - k));
}

/**
 * Completes K to a basis by greedily appending the standard basis vectors
 * e_1, e_2, ... that increase the rank.
 */
template <class S>
Decomposition<S> extend_to_complement(const Mat<S>& k_basis, Index n, Tolerance tol = {})
{
    if (k_basis.rows() != n)
        throw Error(ErrorKind::DimensionMismatch,
                    "K basis has " + std::to_string(k_basis.rows()) + " rows, ambient dimension is " +
                        std::to_string(n));
    const Index k = k_basis.cols();
    if (k < 1 || k > n - 1)
        throw Error(ErrorKind::BadDimension, "need 1 <= dim K <= n - 1, got dim K = " + std::to_string(k));
    if (rank(k_basis, tol) != k)
        throw Error(ErrorKind::DependentColumns, "K basis columns are linearly dependent");

    Mat<S> current = k_basis;
    Mat<S> l_basis(n, 0);
    for (Index i = 0; i < n && l_basis.cols() < n - k; ++i) {
        const Mat<S> e = standard_basis_vectors<S>(n, i, 1);
        Mat<S> trial = hstack(current, e);
        if (rank(trial, tol) > current.cols()) {
            current = std::move(trial);
            l_basis = hstack(l_basis, e);
        }
    }
    return Decomposition<S>(k_basis, l_basis, tol);
}

/**
 * Gram–Schmidt on the columns. Floats are normalized; rationals are only
 * orthogonalized since square roots leave Q.
 */
template <class S>
Mat<S> gram_schmidt(const Mat<S>& m)
{
    static_assert(!is_gf_v<S>, "orthogonality needs an inner product");
    Mat<S> out = m;
    for (Index j = 0; j < out.cols(); ++j) {
        for (Index i = 0; i < j; ++i) {
            const S denom = out.col(i).dot(out.col(i));
            if (denom == S(0))
                continue;
            const S coeff = out.col(i).dot(out.col(j)) / denom;
            out.col(j) -= coeff * out.col(i);
        }
        if constexpr (std::is_same_v<S, double>) {
            const double norm = out.col(j).norm();
            if (norm > 0)
                out.col(j) /= norm;
        }
    }
    return out;
}

/// K ⊕⊥ L with L = K^⊥, for fields carrying the standard inner product.
template <class S>
Decomposition<S> orthogonal_decomposition(const Mat<S>& k_basis, Tolerance tol = {})
{
    static_assert(!is_gf_v<S>, "orthogonal complements need an inner product");
    const Index n = k_basis.rows();
    const Index k = k_basis.cols();
    if (k < 1 || k > n - 1)
        throw Error(ErrorKind::BadDimension, "need 1 <= dim K <= n - 1, got dim K = " + std::to_string(k));
    if (rank(k_basis, tol) != k)
        throw Error(ErrorKind::DependentColumns, "K basis columns are linearly dependent");
    const Mat<S> kt = k_basis.transpose();
    Mat<S> l_basis = gram_schmidt<S>(nullspace_basis(kt, tol));
    Mat<S> k_orth = gram_schmidt<S>(k_basis);
    return Decomposition<S>(std::move(k_orth), std::move(l_basis), tol);
}

/// p_K: the idempotent with range K and nullspace L.
template <class S>
Mat<S> projector(const Decomposition<S>& d)
{
    return d.k_basis() * d.k_coordinates();
}

/// p_L = I − p_K: range L, nullspace K.
template <class S>
Mat<S> complement_projector(const Decomposition<S>& d)
{
    return d.l_basis() * d.l_coordinates();
}

/**
 * The 2×2 block form of an operator relative to a decomposition. Blocks are
 * in (K, L) coordinates: T1 is k×k, T2 is k×l, T3 is l×k, T4 is l×l.
 */
template <class S>
struct BlockRep
{
    Decomposition<S> decomposition;
    Mat<S> t1;
    Mat<S> t2;
    Mat<S> t3;
    Mat<S> t4;
    bool local = false;

    /// The whole operator in (K, L) coordinates.
    Mat<S> coordinate_matrix() const
    {
        Mat<S> out(decomposition.ambient_dim(), decomposition.ambient_dim());
        out << t1, t2, t3, t4;
        return out;
    }
};

template <class S>
void check_block_shapes(const Decomposition<S>& d, const Mat<S>& t1, const Mat<S>& t2, const Mat<S>& t3,
                        const Mat<S>& t4)
{
    const Index k = d.k();
    const Index l = d.l();
    auto expect = [](const Mat<S>& m, Index r, Index c, const char* name) {
        if (m.rows() != r || m.cols() != c)
            throw Error(ErrorKind::DimensionMismatch, std::string(name) + " is " + shape_of(m) + ", expected " +
                                                          std::to_string(r) + "x" + std::to_string(c));
    };
    expect(t1, k, k, "T1");
    expect(t2, k, l, "T2");
    expect(t3, l, k, "T3");
    expect(t4, l, l, "T4");
}

/// Build a BlockRep from blocks given in (K, L) coordinates.
template <class S>
BlockRep<S> make_block_rep(const Decomposition<S>& d, Mat<S> t1, Mat<S> t2, Mat<S> t3, Mat<S> t4)
{
    check_block_shapes(d, t1, t2, t3, t4);
    const bool local = is_exact_v<S> && is_zero_matrix(t3) && is_zero_matrix(t4);
    return BlockRep<S>{d, std::move(t1), std::move(t2), std::move(t3), std::move(t4), local};
}

/// A local-form BlockRep [T1, T2; 0, 0].
template <class S>
BlockRep<S> make_local_rep(const Decomposition<S>& d, Mat<S> t1, Mat<S> t2)
{
    auto b = make_block_rep(d, std::move(t1), std::move(t2), zeros<S>(d.l(), d.k()), zeros<S>(d.l(), d.l()));
    b.local = true;
    return b;
}

template <class S>
BlockRep<S> block_rep(const Mat<S>& t, const Decomposition<S>& d)
{
    if (t.rows() != d.ambient_dim() || t.cols() != d.ambient_dim())
        throw Error(ErrorKind::DimensionMismatch,
                    "operator " + shape_of(t) + " on a space of dimension " + std::to_string(d.ambient_dim()));
    const Mat<S> c = d.change_of_basis_inverse() * t * d.change_of_basis();
    const Index k = d.k();
    const Index l = d.l();
    BlockRep<S> b{d, c.topLeftCorner(k, k), c.topRightCorner(k, l), c.bottomLeftCorner(l, k),
                  c.bottomRightCorner(l, l), false};
    return b;
}

/// The unique operator whose block representation is `b`.
template <class S>
Mat<S> assemble(const BlockRep<S>& b)
{
    check_block_shapes(b.decomposition, b.t1, b.t2, b.t3, b.t4);
    return b.decomposition.change_of_basis() * b.coordinate_matrix() * b.decomposition.change_of_basis_inverse();
}

/// Assemble an operator from coordinate blocks without building a BlockRep.
template <class S>
Mat<S> assemble(const Decomposition<S>& d, const Mat<S>& t1, const Mat<S>& t2, const Mat<S>& t3, const Mat<S>& t4)
{
    return assemble(make_block_rep(d, t1, t2, t3, t4));
}

namespace detail {

template <class S>
BlockRep<S> force_local(BlockRep<S> b, double tol)
{
    if (!is_zero_matrix(b.t3, tol) || !is_zero_matrix(b.t4, tol))
        throw Error(ErrorKind::NotApplicable, "R(T) is not contained in K; no local block representation");
    b.t3 = zeros<S>(b.decomposition.l(), b.decomposition.k());
    b.t4 = zeros<S>(b.decomposition.l(), b.decomposition.l());
    b.local = true;
    return b;
}

}  // namespace detail

/**
 * Local block representation [T1, T2; 0, 0] with K = R(T) exactly and L the
 * greedy standard-basis complement. Requires 0 ≠ T and R(T) ≠ X.
 */
template <class S>
BlockRep<S> local_block_rep(const Mat<S>& t, Tolerance tol = {})
{
    require_square(t, "operator");
    const Index n = t.rows();
    const Mat<S> k_basis = colspace_basis(t, tol);
    if (k_basis.cols() == 0)
        throw Error(ErrorKind::NotApplicable, "T = 0 has no local block representation");
    if (k_basis.cols() == n)
        throw Error(ErrorKind::NotApplicable, "R(T) = X: T has no non-zero left annihilator");
    return detail::force_local(block_rep(t, extend_to_complement(k_basis, n, tol)), 1e-9);
}

/**
 * Local block representation over a caller-chosen K ⊇ R(T) and, optionally,
 * a caller-chosen complement L.
 */
template <class S>
BlockRep<S> local_block_rep(const Mat<S>& t, const Mat<S>& k_basis, const std::optional<Mat<S>>& l_basis = {},
                            Tolerance tol = {})
{
    require_square(t, "operator");
    if (!columns_in_span(t, k_basis, tol))
        throw Error(ErrorKind::NotApplicable, "supplied K does not contain R(T)");
    Decomposition<S> d = l_basis ? Decomposition<S>(k_basis, *l_basis, tol)
                                 : extend_to_complement(k_basis, t.rows(), tol);
    return detail::force_local(block_rep(t, d), 1e-9);
}

/**
 * The mirrored form [0, 0; σ3, σ4]: L = R(T) and K its greedy complement, so
 * the top blocks vanish.
 */
template <class S>
BlockRep<S> mirror_local_block_rep(const Mat<S>& t, Tolerance tol = {})
{
    require_square(t, "operator");
    const Index n = t.rows();
    const Mat<S> range = colspace_basis(t, tol);
    if (range.cols() == 0 || range.cols() == n)
        throw Error(ErrorKind::NotApplicable, "mirrored local form needs {0} != R(T) != X");
    const auto flipped = extend_to_complement(range, n, tol);
    Decomposition<S> d(flipped.l_basis(), range, tol);
    auto b = block_rep(t, d);
    if (!is_zero_matrix(b.t1, 1e-9) || !is_zero_matrix(b.t2, 1e-9))
        throw Error(ErrorKind::NotApplicable, "R(T) is not contained in L");
    b.t1 = zeros<S>(d.k(), d.k());
    b.t2 = zeros<S>(d.k(), d.l());
    return b;
}

}  // namespace idemfactor
