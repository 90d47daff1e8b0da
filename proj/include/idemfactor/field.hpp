#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

#include "idemfactor/errors.hpp"

namespace idemfactor {

/// Exact rationals; GMP keeps them in lowest terms with a positive denominator.
using Rational = boost::multiprecision::mpq_rational;

/**
 * A residue of the prime field GF(P). Only the tiny fields used by exhaustive
 * search are supported, so the inverse is a lookup by Fermat's little theorem.
 */
template <int P>
class Gf
{
    static_assert(P == 2 || P == 3 || P == 5, "GF(p) is supported for p in {2, 3, 5}");

  public:
    static constexpr int characteristic = P;

    constexpr Gf() = default;
    constexpr Gf(long long x) : value_(static_cast<std::uint8_t>(((x % P) + P) % P)) {}

    constexpr int value() const { return value_; }

    constexpr Gf operator-() const { return Gf(P - value_); }
    constexpr Gf& operator+=(Gf y) { value_ = static_cast<std::uint8_t>((value_ + y.value_) % P); return *this; }
    constexpr Gf& operator-=(Gf y) { value_ = static_cast<std::uint8_t>((value_ + P - y.value_) % P); return *this; }
    constexpr Gf& operator*=(Gf y) { value_ = static_cast<std::uint8_t>((value_ * y.value_) % P); return *this; }
    Gf& operator/=(Gf y) { return *this *= y.inverse(); }

    Gf inverse() const
    {
        if (value_ == 0)
            throw Error(ErrorKind::Singular, "division by zero in GF(" + std::to_string(P) + ")");
        Gf r(1);
        for (int i = 0; i < P - 2; ++i)
            r *= *this;
        return r;
    }

    friend constexpr Gf operator+(Gf a, Gf b) { return a += b; }
    friend constexpr Gf operator-(Gf a, Gf b) { return a -= b; }
    friend constexpr Gf operator*(Gf a, Gf b) { return a *= b; }
    friend Gf operator/(Gf a, Gf b) { return a /= b; }
    friend constexpr bool operator==(Gf a, Gf b) { return a.value_ == b.value_; }
    friend constexpr bool operator!=(Gf a, Gf b) { return a.value_ != b.value_; }

    friend std::ostream& operator<<(std::ostream& os, Gf x) { return os << x.value(); }

  private:
    std::uint8_t value_ = 0;
};

using Gf2 = Gf<2>;
using Gf3 = Gf<3>;
using Gf5 = Gf<5>;

template <class S>
struct is_gf : std::false_type {};
template <int P>
struct is_gf<Gf<P>> : std::true_type {};
template <class S>
inline constexpr bool is_gf_v = is_gf<S>::value;

/**
 * Per-scalar facts the algorithms branch on: whether arithmetic is exact, the
 * JSON field tag, and a magnitude used for tolerance decisions and residuals.
 */
template <class S>
struct Field;

template <>
struct Field<Rational>
{
    static constexpr bool exact = true;
    static constexpr std::string_view tag = "Q";
    static double magnitude(const Rational& x) { return std::abs(x.convert_to<double>()); }
};

template <>
struct Field<double>
{
    static constexpr bool exact = false;
    static constexpr std::string_view tag = "F64";
    static double magnitude(double x) { return std::abs(x); }
};

template <int P>
struct Field<Gf<P>>
{
    static constexpr bool exact = true;
    static constexpr std::string_view tag = P == 2 ? "GF2" : (P == 3 ? "GF3" : "GF5");
    static double magnitude(Gf<P> x) { return x.value() == 0 ? 0.0 : 1.0; }
};

template <class S>
concept Scalar = requires { Field<S>::exact; };

template <class S>
concept ExactScalar = Scalar<S> && Field<S>::exact;

template <class S>
inline constexpr bool is_exact_v = Field<S>::exact;

/// "p/q" or "n" for rationals; plain decimal for residues.
std::string format_rational(const Rational& x);
Rational parse_rational(std::string_view text);

}  // namespace idemfactor

namespace Eigen {

template <int P>
struct NumTraits<idemfactor::Gf<P>> : GenericNumTraits<idemfactor::Gf<P>>
{
    using Real = idemfactor::Gf<P>;
    using NonInteger = idemfactor::Gf<P>;
    using Nested = idemfactor::Gf<P>;
    using Literal = idemfactor::Gf<P>;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 0,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 2,
    };
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
