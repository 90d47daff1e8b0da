#pragma once

#include <initializer_list>
#include <map>
#include <optional>
#include <string>

#include "idemfactor/factorize.hpp"

namespace idemfactor {

struct EquationResult
{
    bool holds = false;
    double residual = 0.0;
};

/**
 * Every equation and named system for a candidate (B, C, D) against
 * T = [T1, T2; 0, 0], with U = T1 − BC, V = T2 − BD and S = [U, V; C, D].
 *
 * Equations: square_11..square_22 are the blocks of S² = S, fix_1 and fix_2
 * the blocks of TS = T, and reduced_* the same six rewritten in U and V.
 */
template <class S>
struct ConsistencyReport
{
    std::map<std::string, EquationResult> equations;
    std::map<std::string, bool> systems;
    std::map<std::string, bool> conditions;
    /// (Q_B, S) whenever S is idempotent and TS = T.
    std::optional<Certificate<S>> certificate;
};

template <class S>
ConsistencyReport<S> check_consistency(const Mat<S>& t1, const Mat<S>& t2, const Mat<S>& bb, const Mat<S>& c,
                                       const Mat<S>& d, double tol = 1e-9, Tolerance rank_tol = {})
{
    const Index k = t1.rows();
    const Index l = t2.cols();
    detail::require_shape(t1, k, k, "T1");
    detail::require_shape(t2, k, l, "T2");
    detail::require_shape(bb, k, l, "B");
    detail::require_shape(c, l, k, "C");
    detail::require_shape(d, l, l, "D");

    const Mat<S> ik = identity<S>(k);
    const Mat<S> il = identity<S>(l);
    const Mat<S> u = t1 - bb * c;
    const Mat<S> v = t2 - bb * d;

    ConsistencyReport<S> r;
    auto record = [&](const char* name, const Mat<S>& lhs, const Mat<S>& rhs) {
        r.equations[name] = {approx_equal(lhs, rhs, tol), residual_norm<S>(lhs - rhs)};
    };
    record("square_11", u * u + v * c, u);
    record("square_12", u * v + v * d, v);
    record("square_21", c * u + d * c, c);
    record("square_22", c * v + d * d, d);
    record("fix_1", t1 * u + t2 * c, t1);
    record("fix_2", t1 * v + t2 * d, t2);
    record("reduced_square_11", v * c, u * (ik - u));
    record("reduced_square_12", u * v, v * (il - d));
    record("reduced_square_21", c * u, (il - d) * c);
    record("reduced_square_22", c * v, d * (il - d));
    record("reduced_fix_1", t2 * c, t1 * (ik - u));
    record("reduced_fix_2", t1 * v, t2 * (il - d));

    auto all = [&](std::initializer_list<const char*> names) {
        bool ok = true;
        for (const char* n : names)
            ok = ok && r.equations.at(n).holds;
        return ok;
    };

    Mat<S> s(k + l, k + l);
    s << u, v, c, d;
    Mat<S> t = zeros<S>(k + l, k + l);
    t.topLeftCorner(k, k) = t1;
    t.topRightCorner(k, l) = t2;
    const bool s_idem = approx_equal<S>(s * s, s, tol);
    r.systems["s_idempotent"] = s_idem;
    r.systems["s_idempotent_fixes_t"] = s_idem && approx_equal<S>(t * s, t, tol);
    r.systems["block_equations"] = all({"square_11", "square_12", "square_21", "square_22"});
    r.systems["block_equations_with_fix"] =
        all({"square_11", "square_12", "square_21", "square_22", "fix_1", "fix_2"});
    r.systems["reduced_equations"] =
        all({"reduced_square_11", "reduced_square_12", "reduced_square_21", "reduced_square_22"});
    r.systems["reduced_equations_with_fix"] = all({"reduced_square_11", "reduced_square_12", "reduced_square_21",
                                                   "reduced_square_22", "reduced_fix_1", "reduced_fix_2"});
    r.systems["mixed_a"] = all({"square_21", "square_22", "fix_1", "fix_2"});
    r.systems["mixed_b"] = all({"square_21", "square_22", "square_11", "fix_2"});
    r.systems["mixed_c"] = all({"square_21", "square_22", "square_12", "fix_1"});
    r.systems["reduced_mixed_a"] = all({"reduced_square_21", "reduced_square_22", "reduced_fix_1", "reduced_fix_2"});
    r.systems["reduced_mixed_b"] = all({"reduced_square_21", "reduced_square_22", "reduced_square_11", "reduced_fix_2"});
    r.systems["reduced_mixed_c"] = all({"reduced_square_21", "reduced_square_22", "reduced_square_12", "reduced_fix_1"});

    const Mat<S> defect = t1 - t2 * c;
    r.conditions["defect_annihilated"] = is_zero_matrix<S>(c * defect, tol);
    r.conditions["defect_fixed"] = is_zero_matrix<S>((ik - t1) * defect, tol);
    r.conditions["projector_shift"] = approx_equal<S>(t1 * t2 - t2, (t1 * bb - t2) * d, tol);
    r.conditions["projector_shift_special"] = is_zero_matrix<S>((ik - t1) * t2 * (il - d), tol);
    bool balance = false;
    if (k == l) {
        const auto c_inv = try_inverse(c, rank_tol);
        const auto d_inv = try_inverse(d, rank_tol);
        balance = c_inv && d_inv && approx_equal<S>(t1 * *c_inv, t2 * *d_inv, tol);
    }
    r.conditions["inverse_balance"] = balance;

    if (r.systems["s_idempotent_fixes_t"]) {
        const auto dec = standard_decomposition<S>(k + l, k);
        r.certificate = detail::make_certificate(t, std::optional<Decomposition<S>>(dec),
                                                 std::vector<Mat<S>>{range_k_idempotent(dec, bb), s},
                                                 Recipe::Peel, {{"B", bb}, {"C", c}, {"D", d}});
    }
    return r;
}

}  // namespace idemfactor
