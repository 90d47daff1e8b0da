#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <type_traits>
#include <vector>

#include "idemfactor/matrix.hpp"

namespace testing {

using idemfactor::Index;
using idemfactor::Mat;
using idemfactor::Rational;

template <class S = Rational>
Mat<S> mat(std::initializer_list<std::initializer_list<std::type_identity_t<S>>> rows)
{
    const Index r = static_cast<Index>(rows.size());
    const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
    Mat<S> m(r, c);
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (const auto& x : row)
            m(i, j++) = x;
        ++i;
    }
    return m;
}

inline Rational frac(long num, long den) { return Rational(num, den); }

template <class S>
Mat<S> random_small(Index rows, Index cols, std::mt19937_64& rng, int spread = 3)
{
    Mat<S> m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            if constexpr (idemfactor::is_gf_v<S>)
                m(i, j) = S(static_cast<long long>(rng() % S::characteristic));
            else
                m(i, j) = S(static_cast<long>(rng() % (2 * spread + 1)) - spread);
        }
    return m;
}

/// Every matrix in M_{rows×cols}(GF(p)), in base-p digit order.
template <class S>
void for_each_matrix(Index rows, Index cols, const std::function<void(const Mat<S>&)>& f)
{
    const int p = S::characteristic;
    const Index cells = rows * cols;
    std::uint64_t total = 1;
    for (Index i = 0; i < cells; ++i)
        total *= static_cast<std::uint64_t>(p);
    Mat<S> m(rows, cols);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (Index i = 0; i < cells; ++i) {
            m(i / cols, i % cols) = S(static_cast<long long>(c % p));
            c /= p;
        }
        f(m);
    }
}

/// |column space| over GF(p) by enumerating all combinations; rank = log_p of it.
template <class S>
Index brute_rank(const Mat<S>& m)
{
    const int p = S::characteristic;
    std::vector<Mat<S>> seen;
    std::function<void(Index, Mat<S>)> walk = [&](Index col, Mat<S> acc) {
        if (col == m.cols()) {
            for (const auto& s : seen)
                if (s == acc)
                    return;
            seen.push_back(acc);
            return;
        }
        for (int a = 0; a < p; ++a)
            walk(col + 1, Mat<S>(acc + S(a) * m.col(col)));
    };
    walk(0, idemfactor::zeros<S>(m.rows(), 1));
    Index r = 0;
    std::size_t size = 1;
    while (size < seen.size()) {
        size *= static_cast<std::size_t>(p);
        ++r;
    }
    return r;
}

}  // namespace testing
