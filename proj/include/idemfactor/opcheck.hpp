#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "idemfactor/idempotent.hpp"

namespace idemfactor {

/// Weight beyond the exceptional indices: scale / j^power (power 0 is a constant, scale 1 power 1 is harmonic).
struct WeightTail
{
    Rational scale{1};
    int power = 0;

    static WeightTail constant(Rational c) { return {std::move(c), 0}; }
    static WeightTail harmonic() { return {Rational(1), 1}; }
};

/// Finitely described bounded weight sequence w_1, w_2, ... (1-based).
struct WeightRule
{
    std::map<long, Rational> exceptional;
    WeightTail tail;

    Rational at(long j) const;
    bool has_zero() const;
    /// inf{|w_j| : w_j ≠ 0} > 0.
    bool bounded_below() const;
    /// Indices j with w_j = 0, as finite part plus an optional "all j ≥ from" tail.
    struct Zeros
    {
        std::vector<long> finite;
        std::optional<long> from;
    };
    Zeros zeros() const;
};

enum class OperatorKind { RightShift, LeftShift, Diagonal };

constexpr std::string_view to_string(OperatorKind k)
{
    switch (k) {
    case OperatorKind::RightShift: return "right-shift";
    case OperatorKind::LeftShift: return "left-shift";
    case OperatorKind::Diagonal: return "diagonal";
    }
    return "unknown";
}

/**
 * Weighted shift or diagonal operator on ℓ²:
 *   right shift  (Tx)_{j+1} = w_j x_j,  (Tx)_1 = 0
 *   left shift   (Tx)_j = w_j x_{j+1}
 *   diagonal     (Tx)_j = w_j x_j
 */
struct StructuredOperator
{
    OperatorKind kind = OperatorKind::Diagonal;
    WeightRule weights;
};

StructuredOperator right_shift();
StructuredOperator left_shift();
StructuredOperator harmonic_diagonal();

/// Throws BadParameter for a tail with negative power (unbounded weights).
void validate(const StructuredOperator& op);

/// Coordinates {e_j : j ∈ finite} ∪ {e_j : j ≥ from}; the witness idempotent is the coordinate projection onto them.
struct CoordinateSet
{
    std::vector<long> finite;
    std::optional<long> from;

    bool empty() const { return finite.empty() && !from; }
};

bool kernel_trivial(const StructuredOperator& op);

struct RangeClass
{
    bool dense = false;
    bool closed = false;
    bool equals_x = false;
};

RangeClass range_classification(const StructuredOperator& op);

/// Coordinates missing from the closure of the range.
CoordinateSet range_gap(const StructuredOperator& op);
/// Coordinates spanning the kernel.
CoordinateSet kernel_coordinates(const StructuredOperator& op);

struct MembershipReport
{
    bool left_annihilator = false;
    bool right_annihilator = false;
    /// Both annihilators exist; necessary for being a finite product of idempotents, not sufficient.
    bool in_f_possible = false;
    /// Decided for diagonals only (regular ⟺ closed range).
    std::optional<bool> regular;
    CoordinateSet left_witness;
    CoordinateSet right_witness;
};

MembershipReport membership_report(const StructuredOperator& op);

/// Pointwise product of two diagonal operators; throws WrongClass otherwise.
StructuredOperator diagonal_product(const StructuredOperator& a, const StructuredOperator& b);

/// Top-left n×n block of the operator's matrix.
Mat<Rational> truncate(const StructuredOperator& op, Index n);

}  // namespace idemfactor
