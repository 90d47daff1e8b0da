#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "idemfactor/decomposition.hpp"

namespace idemfactor {

/// T² = T exactly over exact fields, ‖T² − T‖_F ≤ tol·max(1, ‖T‖_F) over floats.
template <class S>
bool is_idempotent(const Mat<S>& t, double tol = 1e-9)
{
    require_square(t, "operator");
    const Mat<S> sq = t * t;
    if constexpr (is_exact_v<S>)
        return sq == t;
    else
        return residual_norm<S>(sq - t) <= tol * std::max(1.0, residual_norm(t));
}

enum class IdempotentTag {
    NotIdempotent,
    Zero,
    Identity,
    RangeEqualsK,
    RangeEqualsL,
    RangeInsideK,
    RangeInsideL,
    ContainsK,
    ContainsL,
    General,
};

constexpr std::string_view to_string(IdempotentTag tag)
{
    switch (tag) {
    case IdempotentTag::NotIdempotent: return "NotIdempotent";
    case IdempotentTag::Zero: return "Zero";
    case IdempotentTag::Identity: return "Identity";
    case IdempotentTag::RangeEqualsK: return "RangeEqualsK";
    case IdempotentTag::RangeEqualsL: return "RangeEqualsL";
    case IdempotentTag::RangeInsideK: return "RangeInsideK";
    case IdempotentTag::RangeInsideL: return "RangeInsideL";
    case IdempotentTag::ContainsK: return "ContainsK";
    case IdempotentTag::ContainsL: return "ContainsL";
    case IdempotentTag::General: return "General";
    }
    return "Unknown";
}

/**
 * Classification of a block representation. `tag` is the finest class; `tags`
 * lists every class that holds, since RangeEqualsK ⊂ ContainsK ∩ RangeInsideK
 * and so on. `witness` is B of [I, B; 0, 0] for RangeEqualsK and C of
 * [0, 0; C, I] for RangeEqualsL.
 */
template <class S>
struct IdempotentClass
{
    IdempotentTag tag = IdempotentTag::NotIdempotent;
    std::vector<IdempotentTag> tags;
    std::optional<Mat<S>> witness;

    bool has(IdempotentTag t) const { return std::find(tags.begin(), tags.end(), t) != tags.end(); }
    bool idempotent() const { return tag != IdempotentTag::NotIdempotent; }
};

/// The four block equations equivalent to T² = T.
template <class S>
bool block_equations_hold(const BlockRep<S>& b, double tol = 1e-9)
{
    return approx_equal<S>(b.t1 * b.t1 + b.t2 * b.t3, b.t1, tol) &&
           approx_equal<S>(b.t1 * b.t2 + b.t2 * b.t4, b.t2, tol) &&
           approx_equal<S>(b.t3 * b.t1 + b.t4 * b.t3, b.t3, tol) &&
           approx_equal<S>(b.t3 * b.t2 + b.t4 * b.t4, b.t4, tol);
}

template <class S>
IdempotentClass<S> classify_idempotent(const BlockRep<S>& b, double tol = 1e-9)
{
    check_block_shapes(b.decomposition, b.t1, b.t2, b.t3, b.t4);
    IdempotentClass<S> out;
    if (!block_equations_hold(b, tol))
        return out;

    const Index k = b.decomposition.k();
    const Index l = b.decomposition.l();
    auto zero = [&](const Mat<S>& m) { return is_zero_matrix(m, tol); };
    auto eq = [&](const Mat<S>& x, const Mat<S>& y) { return approx_equal(x, y, tol); };
    const Mat<S> ik = identity<S>(k);
    const Mat<S> il = identity<S>(l);

    const bool top_zero = zero(b.t1) && zero(b.t2);
    const bool bottom_zero = zero(b.t3) && zero(b.t4);

    // Idempotent T: K ⊆ R(T) iff T fixes K pointwise, i.e. T1 = I and T3 = 0.
    const bool contains_k = eq(b.t1, ik) && zero(b.t3);
    const bool contains_l = eq(b.t4, il) && zero(b.t2);
    const bool inside_k = bottom_zero;
    const bool inside_l = top_zero;

    if (top_zero && bottom_zero)
        out.tags.push_back(IdempotentTag::Zero);
    if (contains_k && contains_l)
        out.tags.push_back(IdempotentTag::Identity);
    if (inside_k && contains_k)
        out.tags.push_back(IdempotentTag::RangeEqualsK);
    if (inside_l && contains_l)
        out.tags.push_back(IdempotentTag::RangeEqualsL);
    if (inside_k)
        out.tags.push_back(IdempotentTag::RangeInsideK);
    if (inside_l)
        out.tags.push_back(IdempotentTag::RangeInsideL);
    if (contains_k)
        out.tags.push_back(IdempotentTag::ContainsK);
    if (contains_l)
        out.tags.push_back(IdempotentTag::ContainsL);
    if (out.tags.empty())
        out.tags.push_back(IdempotentTag::General);
    out.tag = out.tags.front();

    if (out.tag == IdempotentTag::RangeEqualsK)
        out.witness = b.t2;
    else if (out.tag == IdempotentTag::RangeEqualsL)
        out.witness = b.t3;
    return out;
}

/// Block-wise product of two representations over the same decomposition.
template <class S>
BlockRep<S> block_multiply(const BlockRep<S>& a, const BlockRep<S>& b)
{
    if (!(a.decomposition == b.decomposition))
        throw Error(ErrorKind::DimensionMismatch, "block products need a common decomposition");
    return make_block_rep<S>(a.decomposition, a.t1 * b.t1 + a.t2 * b.t3, a.t1 * b.t2 + a.t2 * b.t4,
                             a.t3 * b.t1 + a.t4 * b.t3, a.t3 * b.t2 + a.t4 * b.t4);
}

/**
 * Product inside the semigroup of idempotents with range exactly K (or,
 * mirrored, exactly L). In both semigroups Q·Q' = Q'.
 */
template <class S>
BlockRep<S> ek_product(const BlockRep<S>& q, const BlockRep<S>& q2, double tol = 1e-9)
{
    const auto c1 = classify_idempotent(q, tol);
    const auto c2 = classify_idempotent(q2, tol);
    const bool both_k = c1.has(IdempotentTag::RangeEqualsK) && c2.has(IdempotentTag::RangeEqualsK);
    const bool both_l = c1.has(IdempotentTag::RangeEqualsL) && c2.has(IdempotentTag::RangeEqualsL);
    if (!both_k && !both_l)
        throw Error(ErrorKind::WrongClass, "both factors must have range exactly K, or both exactly L");
    auto product = block_multiply(q, q2);
    const auto cp = classify_idempotent(product, tol);
    if (both_k ? !cp.has(IdempotentTag::RangeEqualsK) : !cp.has(IdempotentTag::RangeEqualsL))
        throw Error(ErrorKind::InternalNormalizationFailure, "semigroup product left its class");
    return product;
}

enum class Side { Left, Right };

/**
 * Action of E (range exactly K) on Q (range inside K). Left action: E·Q = Q.
 * Right action: [T1, T1T2; 0, 0]·[I, T2'; 0, 0] = [T1, T1T2'; 0, 0].
 */
template <class S>
BlockRep<S> ek_module_action(const BlockRep<S>& q, const BlockRep<S>& e, Side side, double tol = 1e-9)
{
    if (!classify_idempotent(q, tol).has(IdempotentTag::RangeInsideK))
        throw Error(ErrorKind::WrongClass, "module element must be an idempotent with range inside K");
    if (!classify_idempotent(e, tol).has(IdempotentTag::RangeEqualsK))
        throw Error(ErrorKind::WrongClass, "acting element must be an idempotent with range K");
    auto result = side == Side::Left ? block_multiply(e, q) : block_multiply(q, e);
    if (!classify_idempotent(result, tol).has(IdempotentTag::RangeInsideK))
        throw Error(ErrorKind::InternalNormalizationFailure, "module action left the module");
    return result;
}

enum class AnnihilatorVerdict { PassesNecessary, FailsLeft, FailsRight, FailsBoth, TrivialOperator };

constexpr std::string_view to_string(AnnihilatorVerdict v)
{
    switch (v) {
    case AnnihilatorVerdict::PassesNecessary: return "PassesNecessary";
    case AnnihilatorVerdict::FailsLeft: return "FailsLeft";
    case AnnihilatorVerdict::FailsRight: return "FailsRight";
    case AnnihilatorVerdict::FailsBoth: return "FailsBoth";
    case AnnihilatorVerdict::TrivialOperator: return "TrivialOperator";
    }
    return "Unknown";
}

/**
 * Idempotent annihilators of T. A non-zero idempotent A with A·T = 0 exists
 * iff R(T) ≠ X; a non-zero idempotent B with T·B = 0 exists iff N(T) ≠ {0}.
 * Both existing is necessary for T to be a product of idempotents.
 */
template <class S>
struct AnnihilatorReport
{
    AnnihilatorVerdict verdict = AnnihilatorVerdict::FailsBoth;
    std::optional<Mat<S>> left_witness;
    std::optional<Mat<S>> right_witness;
};

template <class S>
AnnihilatorReport<S> annihilator_report(const Mat<S>& t, Tolerance tol = {})
{
    require_square(t, "operator");
    const Index n = t.rows();
    AnnihilatorReport<S> report;
    const Mat<S> range = colspace_basis(t, tol);
    if (range.cols() == 0) {
        report.verdict = AnnihilatorVerdict::TrivialOperator;
        report.left_witness = identity<S>(n);
        report.right_witness = identity<S>(n);
        return report;
    }
    if (range.cols() < n) {
        const auto d = extend_to_complement(range, n, tol);
        report.left_witness = complement_projector(d);
        const Mat<S> kernel = nullspace_basis(t, tol);
        report.right_witness = projector(extend_to_complement(kernel, n, tol));
    }
    // Square matrices: a left witness exists exactly when a right one does.
    report.verdict = report.left_witness && report.right_witness ? AnnihilatorVerdict::PassesNecessary
                     : report.left_witness                       ? AnnihilatorVerdict::FailsRight
                     : report.right_witness                      ? AnnihilatorVerdict::FailsLeft
                                                                 : AnnihilatorVerdict::FailsBoth;
    return report;
}

}  // namespace idemfactor
