#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idemfactor/matrix.hpp"

namespace idemfactor {

using MatrixKey = std::uint32_t;

/**
 * Dense integer keys for n×n matrices over GF(p): entry (i, j) is the base-p
 * digit at position i·n + j. Key order is the iteration order everywhere.
 */
class KeySpace
{
  public:
    KeySpace(int n, int p);

    int n() const { return n_; }
    int p() const { return p_; }
    std::uint64_t size() const { return size_; }

    std::vector<int> decode(MatrixKey key) const;
    MatrixKey encode(const std::vector<int>& entries) const;
    MatrixKey multiply(MatrixKey a, MatrixKey b) const;
    MatrixKey identity() const;
    MatrixKey zero() const { return 0; }

    template <class S>
    Mat<S> to_matrix(MatrixKey key) const
    {
        const auto e = decode(key);
        Mat<S> m(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                m(i, j) = S(e[static_cast<std::size_t>(i * n_ + j)]);
        return m;
    }

    template <int P>
    MatrixKey key_of(const Mat<Gf<P>>& m) const
    {
        if (P != p_ || m.rows() != n_ || m.cols() != n_)
            throw Error(ErrorKind::DimensionMismatch, "matrix does not belong to this key space");
        std::vector<int> e(static_cast<std::size_t>(n_ * n_));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                e[static_cast<std::size_t>(i * n_ + j)] = m(i, j).value();
        return encode(e);
    }

  private:
    int n_;
    int p_;
    std::uint64_t size_;
};

/// Throws TooLarge unless p ∈ {2, 3, 5}, 1 ≤ n ≤ 3 and p^(n²) ≤ 2·10⁶.
void require_searchable(int n, int p);

/// All M with M² = M, in key order.
std::vector<MatrixKey> enumerate_idempotents(int n, int p);

/**
 * Exhaustive idempotent-index table. Layer t (1-based) holds the matrices of
 * index exactly t; layer 1 is every idempotent, 0 and I included. A matrix
 * missing from every layer has index ∞ when closed(), and index > t_max()
 * otherwise.
 */
class IndexAtlas
{
  public:
    const KeySpace& space() const { return space_; }
    int n() const { return space_.n(); }
    int p() const { return space_.p(); }
    int t_max() const { return t_max_; }
    bool closed() const { return closed_; }

    const std::vector<MatrixKey>& idempotents() const { return layers_.front(); }
    const std::vector<std::vector<MatrixKey>>& layers() const { return layers_; }
    const std::vector<MatrixKey>& layer(int t) const;
    std::size_t reachable_size() const;

    std::optional<int> index_of(MatrixKey key) const;
    /// One minimal factorization, or empty if the key was not reached.
    std::vector<MatrixKey> witness(MatrixKey key) const;
    /// E^t: every product of at most t idempotents, in key order.
    std::vector<MatrixKey> cumulative(int t) const;

  private:
    friend IndexAtlas build_atlas(int n, int p, int t_max, unsigned threads);

    explicit IndexAtlas(KeySpace space) : space_(space) {}

    KeySpace space_;
    int t_max_ = 0;
    bool closed_ = false;
    std::vector<std::vector<MatrixKey>> layers_;
    std::vector<std::uint8_t> index_;
    std::vector<MatrixKey> parent_;
    std::vector<MatrixKey> last_factor_;
};

/**
 * Breadth-first product closure: layer t is (layer t−1)·E minus everything
 * seen. Stops at closure or after layer t_max. Each frontier slice is
 * expanded by its own worker; ties are broken toward the smallest
 * (last factor key, prefix key), so the result does not depend on `threads`.
 */
IndexAtlas build_atlas(int n, int p, int t_max, unsigned threads = 1);

struct StructureViolation
{
    MatrixKey key = 0;
    std::string rule;
    std::string detail;
};

struct StructureReport
{
    std::size_t checked = 0;
    std::vector<StructureViolation> violations;

    bool ok() const { return violations.empty(); }
};

/**
 * Re-checks every stored witness: the product and length, idempotent factors,
 * mutual non-containment of consecutive factor ranges, the tail Q2⋯Qt having
 * index t − 1 and rank at least rank(T), and Q1 = [I, B; 0, 0] relative to
 * R(Q1) ⊕ complement. Also checks layer disjointness and, when closed, that
 * the reachable set is closed under right multiplication by E.
 */
StructureReport verify_minimal_structure(const IndexAtlas& atlas);

/// Every element of layer s + t is a product of one from layer s and one from layer t, for s + t ≤ max_sum.
StructureReport check_layer_splits(const IndexAtlas& atlas, int max_sum);

}  // namespace idemfactor
