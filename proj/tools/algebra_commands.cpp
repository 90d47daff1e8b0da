// Commands that take matrices; each is instantiated once per scalar type.

#include "commands.hpp"

#include "idemfactor/factorize.hpp"

namespace idemfactor::cli {

namespace {

template <class F>
Json with_matrix(const Json& doc, F&& f)
{
    return std::visit([&](const auto& m) { return f(m); }, any_matrix_from_json(doc));
}

template <class S>
Mat<S> load(const std::string& arg)
{
    return matrix_from_json<S>(load_json(arg));
}

template <class S>
std::optional<Mat<S>> load(const std::optional<std::string>& arg)
{
    if (!arg)
        return std::nullopt;
    return load<S>(*arg);
}

template <class S>
BlockRep<S> local_rep(const Mat<S>& t, const std::optional<std::string>& k, const std::optional<std::string>& l)
{
    if (l && !k)
        throw Error(ErrorKind::InvalidInput, "--L needs --K");
    if (k)
        return local_block_rep(t, load<S>(*k), load<S>(l));
    return local_block_rep(t);
}

template <class S>
Json certificates(const std::vector<Certificate<S>>& certs)
{
    if (certs.size() == 1)
        return to_json(certs.front());
    Json arr = Json::array();
    for (const auto& c : certs)
        arr.push_back(to_json(c));
    return Json{{"certificates", std::move(arr)}};
}

template <class S>
Json factor_auto(const Mat<S>& t, const FactorArgs& a)
{
    AutoOptions opt;
    opt.seed = a.seed;
    const auto r = auto_factor(t, opt);
    if (r.certificate)
        return to_json(*r.certificate);
    Json declined = Json::array();
    for (const auto& [recipe, reason] : r.declined)
        declined.push_back(Json{{"recipe", recipe}, {"reason", reason}});
    Json report{{"error", "NoRecipeApplies"},
                {"declined", std::move(declined)},
                {"annihilators", r.annihilators ? to_json(*r.annihilators) : Json(nullptr)}};
    throw Negative{std::move(report), "no recipe applies"};
}

/// Q_B and T_{B,C,D} carried from (K, L) coordinates back to the ambient space.
template <class S>
Certificate<S> factor_peel(const Mat<S>& t, const BlockRep<S>& b, const Mat<S>& bb, const Mat<S>& c, const Mat<S>& d)
{
    const auto r = check_consistency(b.t1, b.t2, bb, c, d);
    if (!r.certificate)
        throw Negative{to_json(r), "T_{B,C,D} is not an idempotent with T * T_{B,C,D} = T"};
    const auto& p = b.decomposition.change_of_basis();
    const auto& p_inv = b.decomposition.change_of_basis_inverse();
    std::vector<Mat<S>> factors;
    for (const auto& f : r.certificate->factors)
        factors.push_back(p * f * p_inv);
    return detail::make_certificate(t, std::optional<Decomposition<S>>(b.decomposition), std::move(factors),
                                    Recipe::Peel, {{"B", bb}, {"C", c}, {"D", d}});
}

template <class S>
Json factor_with(const Mat<S>& t, const FactorArgs& a)
{
    require_square(t, "operator");
    if (a.samples < 1)
        throw Error(ErrorKind::BadParameter, "--samples must be at least 1");
    const bool family = a.method == "kernel_shift" || a.method == "projector_tail" ||
                        a.method == "projector_tail_alt" || a.method == "invertible_pair";
    if (a.samples > 1 && !family)
        throw Error(ErrorKind::BadParameter, "--samples applies to kernel_shift, projector_tail(_alt) and invertible_pair");

    if (a.method == "auto")
        return factor_auto(t, a);
    if (a.method == "idempotent") {
        if (!is_idempotent(t))
            throw Negative{Json{{"error", "NotIdempotent"}}, "T^2 != T"};
        return to_json(detail::make_certificate(t, std::optional<Decomposition<S>>{}, std::vector<Mat<S>>{t},
                                                Recipe::Idempotent));
    }
    if (a.method == "range_swallow_mirror") {
        if (a.k && !a.l)
            throw Error(ErrorKind::InvalidInput, "range_swallow_mirror with --K also needs --L");
        const BlockRep<S> b = a.k ? block_rep(t, Decomposition<S>(load<S>(*a.k), load<S>(*a.l)))
                                  : mirror_local_block_rep(t);
        return to_json(factor_range_swallow_mirror(b));
    }

    const BlockRep<S> b = local_rep(t, a.k, a.l);
    const auto variant = a.method == "projector_tail_alt" ? TailVariant::Reduced : TailVariant::Full;
    if (a.method == "range_swallow")
        return to_json(factor_range_swallow(b));
    if (a.method == "embed")
        return to_json(factor_embed(b, load<S>(a.j)));
    if (a.method == "kernel_shift") {
        if (a.v)
            return to_json(factor_kernel_shift(b, load<S>(*a.v)));
        return certificates(kernel_shift_family(b, a.samples, a.seed));
    }
    if (a.method == "kernel_shift_idempotent") {
        if (a.c || a.v) {
            if (!a.c || !a.v)
                throw Error(ErrorKind::InvalidInput, "kernel_shift_idempotent needs both --C and --V");
            return to_json(factor_kernel_shift_idempotent(b, load<S>(*a.c), load<S>(*a.v)));
        }
        return to_json(factor_kernel_shift_idempotent(b, a.seed));
    }
    if (a.method == "projector_tail" || a.method == "projector_tail_alt") {
        if (a.d)
            return to_json(factor_projector_tail(b, load<S>(*a.d), variant));
        return certificates(projector_tail_family(b, a.samples, a.seed, variant));
    }
    if (a.method == "invertible_pair") {
        Mat<S> c, d;
        if (a.c || a.d) {
            if (!a.c || !a.d)
                throw Error(ErrorKind::InvalidInput, "invertible_pair needs both --C and --D");
            c = load<S>(*a.c);
            d = load<S>(*a.d);
        } else {
            std::mt19937_64 rng(a.seed);
            std::tie(c, d) = sample_invertible_pair(b, rng);
        }
        return certificates(invertible_pair_family(b, c, d, a.samples, a.seed));
    }
    if (a.method == "lift") {
        std::vector<Mat<S>> inner{b.t1};
        if (!is_idempotent(b.t1)) {
            AutoOptions nested;
            nested.seed = a.seed;
            nested.allow_lift = false;
            const auto sub = auto_factor(b.t1, nested);
            if (!sub.certificate)
                throw Error(ErrorKind::NotApplicable, "T1 has no certificate one level down");
            inner = sub.certificate->factors;
        }
        return to_json(lift_factorization(b, inner));
    }
    if (a.method == "peel") {
        if (!a.b || !a.c || !a.d)
            throw Error(ErrorKind::InvalidInput, "peel needs --B, --C and --D");
        return to_json(factor_peel(t, b, load<S>(*a.b), load<S>(*a.c), load<S>(*a.d)));
    }
    throw Error(ErrorKind::InvalidInput, "unknown method \"" + a.method + "\"");
}

}  // namespace

Json blockrep(const BlockrepArgs& a)
{
    return with_matrix(load_json(a.input), [&]<class S>(const Mat<S>& t) {
        BlockRep<S> b = [&] {
            if (a.mirror)
                return mirror_local_block_rep(t);
            if (a.k && a.l)
                return block_rep(t, Decomposition<S>(load<S>(*a.k), load<S>(*a.l)));
            return local_rep(t, a.k, a.l);
        }();
        return Json{{"block_rep", to_json(b)}, {"classification", to_json(classify_idempotent(b))}};
    });
}

Json factor(const FactorArgs& a)
{
    return with_matrix(load_json(a.input), [&]<class S>(const Mat<S>& t) { return factor_with(t, a); });
}

Json consistency(const ConsistencyArgs& a)
{
    return with_matrix(load_json(a.t1), [&]<class S>(const Mat<S>& t1) {
        const auto r = check_consistency(t1, load<S>(a.t2), load<S>(a.b), load<S>(a.c), load<S>(a.d));
        Json report = to_json(r);
        if (!r.certificate)
            throw Negative{std::move(report), "S is not an idempotent fixing T"};
        return report;
    });
}

Json douglas(const DouglasArgs& a)
{
    return with_matrix(load_json(a.u), [&]<class S>(const Mat<S>& u) {
        const Mat<S> v = load<S>(a.v);
        if (!range_included(u, v))
            throw Negative{Json{{"error", "RangeNotContained"}, {"range_included", false}},
                           "R(U) is not contained in R(V)"};
        return to_json(douglas_report(u, v));
    });
}

}  // namespace idemfactor::cli
