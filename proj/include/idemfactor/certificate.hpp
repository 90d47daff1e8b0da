#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idemfactor/decomposition.hpp"
#include "idemfactor/idempotent.hpp"

namespace idemfactor {

enum class Recipe {
    Idempotent,
    CornerPair,
    RangeSwallow,
    RangeSwallowMirror,
    Embed,
    KernelShift,
    KernelShiftIdempotent,
    ProjectorTail,
    ProjectorTailAlt,
    InvertiblePair,
    Lift,
    Peel,
};

inline constexpr Recipe all_recipes[] = {
    Recipe::Idempotent,    Recipe::CornerPair,       Recipe::RangeSwallow,   Recipe::RangeSwallowMirror,
    Recipe::Embed,         Recipe::KernelShift,      Recipe::KernelShiftIdempotent, Recipe::ProjectorTail,
    Recipe::ProjectorTailAlt, Recipe::InvertiblePair, Recipe::Lift,
    Recipe::Peel,
};

constexpr std::string_view to_string(Recipe r)
{
    switch (r) {
    case Recipe::Idempotent: return "idempotent";
    case Recipe::CornerPair: return "corner_pair";
    case Recipe::RangeSwallow: return "range_swallow";
    case Recipe::RangeSwallowMirror: return "range_swallow_mirror";
    case Recipe::Embed: return "embed";
    case Recipe::KernelShift: return "kernel_shift";
    case Recipe::KernelShiftIdempotent: return "kernel_shift_idempotent";
    case Recipe::ProjectorTail: return "projector_tail";
    case Recipe::ProjectorTailAlt: return "projector_tail_alt";
    case Recipe::InvertiblePair: return "invertible_pair";
    case Recipe::Lift: return "lift";
    case Recipe::Peel: return "peel";
    }
    return "unknown";
}

inline std::optional<Recipe> recipe_from_string(std::string_view name)
{
    for (Recipe r : all_recipes)
        if (to_string(r) == name)
            return r;
    return std::nullopt;
}

struct Residuals
{
    std::vector<double> idempotency;
    double product = 0.0;
};

/**
 * An ordered list of idempotent factors claimed to multiply to `target`.
 * Factors and target are ambient matrices; `parameters` holds the recipe's
 * free blocks in (K, L) coordinates of `decomposition`.
 */
template <class S>
struct Certificate
{
    Mat<S> target;
    std::optional<Decomposition<S>> decomposition;
    std::vector<Mat<S>> factors;
    Recipe recipe = Recipe::Idempotent;
    std::map<std::string, Mat<S>> parameters;
    Residuals residuals;
    Index index_upper_bound = 0;
};

template <class S>
Mat<S> ordered_product(const std::vector<Mat<S>>& factors, Index n)
{
    Mat<S> p = identity<S>(n);
    for (const auto& f : factors)
        p = p * f;
    return p;
}

template <class S>
Residuals compute_residuals(const Mat<S>& target, const std::vector<Mat<S>>& factors)
{
    Residuals r;
    for (const auto& f : factors)
        r.idempotency.push_back(f.rows() == f.cols() ? residual_norm<S>(f * f - f)
                                                     : std::numeric_limits<double>::infinity());
    bool shapes_ok = target.rows() == target.cols();
    for (const auto& f : factors)
        shapes_ok = shapes_ok && f.rows() == target.rows() && f.cols() == target.cols();
    r.product = shapes_ok ? residual_norm<S>(ordered_product(factors, target.rows()) - target)
                          : std::numeric_limits<double>::infinity();
    return r;
}

struct VerificationReport
{
    bool passed = false;
    Residuals residuals;
    std::vector<std::string> failures;
};

/**
 * Recomputes every residual from scratch. Exact fields demand exact zeros;
 * floats accept ‖E² − E‖ ≤ tol·max(1, ‖E‖) and ‖E1⋯Et − T‖ ≤ tol·max(1, ‖T‖).
 */
template <class S>
VerificationReport verify_certificate(const Certificate<S>& cert, double tol = 1e-9)
{
    VerificationReport report;
    report.residuals = compute_residuals(cert.target, cert.factors);
    if (cert.factors.empty())
        report.failures.push_back("certificate has no factors");
    for (std::size_t i = 0; i < cert.factors.size(); ++i) {
        const double bound = is_exact_v<S> ? 0.0 : tol * std::max(1.0, residual_norm(cert.factors[i]));
        if (!(report.residuals.idempotency[i] <= bound))
            report.failures.push_back("factor " + std::to_string(i + 1) + " is not idempotent");
    }
    const double bound = is_exact_v<S> ? 0.0 : tol * std::max(1.0, residual_norm(cert.target));
    if (!(report.residuals.product <= bound))
        report.failures.push_back("ordered product differs from target");
    report.passed = report.failures.empty();
    return report;
}

namespace detail {

template <class S>
Certificate<S> make_certificate(Mat<S> target, std::optional<Decomposition<S>> d, std::vector<Mat<S>> factors,
                                Recipe recipe, std::map<std::string, Mat<S>> parameters = {})
{
    Certificate<S> cert{std::move(target), std::move(d), std::move(factors), recipe, std::move(parameters), {}, 0};
    cert.residuals = compute_residuals(cert.target, cert.factors);
    cert.index_upper_bound = static_cast<Index>(cert.factors.size());
    if constexpr (is_exact_v<S>) {
        if (!verify_certificate(cert).passed)
            throw Error(ErrorKind::InternalNormalizationFailure,
                        std::string(to_string(recipe)) + " produced a certificate that does not verify");
    }
    return cert;
}

}  // namespace detail

}  // namespace idemfactor
