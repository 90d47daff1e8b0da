#pragma once

#include <cmath>
#include <string>
#include <variant>

#include <json.hpp>

#include "idemfactor/certificate.hpp"
#include "idemfactor/consistency.hpp"
#include "idemfactor/douglas.hpp"
#include "idemfactor/index_atlas.hpp"
#include "idemfactor/opcheck.hpp"

namespace idemfactor {

/// Insertion-ordered so emitted documents are stable byte for byte.
using Json = nlohmann::ordered_json;

using AnyMatrix = std::variant<Mat<Rational>, Mat<double>, Mat<Gf2>, Mat<Gf3>, Mat<Gf5>>;

namespace detail {

[[noreturn]] inline void bad_json(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

template <class S>
Json entry_to_json(const S& x)
{
    if constexpr (std::is_same_v<S, Rational>)
        return format_rational(x);
    else if constexpr (std::is_same_v<S, double>) {
        if (!std::isfinite(x))
            throw Error(ErrorKind::InvalidInput, "cannot serialize a non-finite entry");
        return x;
    } else
        return x.value();
}

template <class S>
S entry_from_json(const Json& j)
{
    if constexpr (std::is_same_v<S, Rational>) {
        if (j.is_string())
            return parse_rational(j.get<std::string>());
        if (j.is_number_integer())
            return Rational(j.get<long long>());
        bad_json("rational entries must be strings \"p/q\" or integers");
    } else if constexpr (std::is_same_v<S, double>) {
        if (!j.is_number())
            bad_json("F64 entries must be JSON numbers");
        return j.get<double>();
    } else {
        if (!j.is_number_integer())
            bad_json("GF entries must be integers");
        const long long v = j.get<long long>();
        if (v < 0 || v >= S::characteristic)
            bad_json("GF(" + std::to_string(S::characteristic) + ") entry " + std::to_string(v) + " out of range");
        return S(v);
    }
}

inline Json residual_to_json(double r)
{
    return std::isfinite(r) ? Json(r) : Json("inf");
}

}  // namespace detail

template <class S>
Json to_json(const Mat<S>& m)
{
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back(detail::entry_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    Json out{{"field", std::string(Field<S>::tag)}, {"rows", std::move(rows)}};
    if (m.rows() == 0)
        out["cols"] = m.cols();
    return out;
}

template <class S>
Json to_json(const std::optional<Mat<S>>& m)
{
    return m ? to_json(*m) : Json(nullptr);
}

inline std::string field_of(const Json& j)
{
    if (!j.is_object() || !j.contains("field") || !j["field"].is_string())
        detail::bad_json("matrix must be an object with a string \"field\"");
    return j["field"].get<std::string>();
}

/// Reads a matrix of a known scalar type; the "field" tag must match.
template <class S>
Mat<S> matrix_from_json(const Json& j)
{
    const std::string field = field_of(j);
    if (field != Field<S>::tag)
        detail::bad_json("expected a " + std::string(Field<S>::tag) + " matrix, got " + field);
    if (!j.contains("rows") || !j["rows"].is_array())
        detail::bad_json("matrix needs a \"rows\" array");
    const Json& rows = j["rows"];
    const Index r = static_cast<Index>(rows.size());
    Index c = 0;
    if (j.contains("cols")) {
        if (!j["cols"].is_number_integer() || j["cols"].get<long long>() < 0)
            detail::bad_json("\"cols\" must be a non-negative integer");
        c = j["cols"].get<Index>();
    } else if (r > 0) {
        if (!rows[0].is_array())
            detail::bad_json("each row must be an array");
        c = static_cast<Index>(rows[0].size());
    }
    Mat<S> m(r, c);
    for (Index i = 0; i < r; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != c)
            detail::bad_json("row " + std::to_string(i) + " does not have " + std::to_string(c) + " entries");
        for (Index k = 0; k < c; ++k)
            m(i, k) = detail::entry_from_json<S>(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

inline AnyMatrix any_matrix_from_json(const Json& j)
{
    const std::string f = field_of(j);
    if (f == "Q")
        return matrix_from_json<Rational>(j);
    if (f == "F64")
        return matrix_from_json<double>(j);
    if (f == "GF2")
        return matrix_from_json<Gf2>(j);
    if (f == "GF3")
        return matrix_from_json<Gf3>(j);
    if (f == "GF5")
        return matrix_from_json<Gf5>(j);
    throw Error(ErrorKind::FieldUnsupported, "unknown field \"" + f + "\"");
}

template <class S>
Json to_json(const Decomposition<S>& d)
{
    return Json{{"K_basis", to_json(d.k_basis())}, {"L_basis", to_json(d.l_basis())}};
}

template <class S>
Decomposition<S> decomposition_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("K_basis") || !j.contains("L_basis"))
        detail::bad_json("decomposition needs \"K_basis\" and \"L_basis\"");
    return Decomposition<S>(matrix_from_json<S>(j["K_basis"]), matrix_from_json<S>(j["L_basis"]));
}

template <class S>
Json to_json(const BlockRep<S>& b)
{
    return Json{{"decomposition", to_json(b.decomposition)},
                {"T1", to_json(b.t1)},
                {"T2", to_json(b.t2)},
                {"T3", to_json(b.t3)},
                {"T4", to_json(b.t4)},
                {"local", b.local}};
}

template <class S>
Json to_json(const IdempotentClass<S>& c)
{
    Json tags = Json::array();
    for (auto t : c.tags)
        tags.push_back(std::string(to_string(t)));
    return Json{{"class", std::string(to_string(c.tag))}, {"tags", std::move(tags)}, {"witness", to_json(c.witness)}};
}

template <class S>
Json to_json(const AnnihilatorReport<S>& r)
{
    return Json{{"verdict", std::string(to_string(r.verdict))},
                {"left_witness", to_json(r.left_witness)},
                {"right_witness", to_json(r.right_witness)}};
}

inline Json to_json(const Residuals& r)
{
    Json idem = Json::array();
    for (double x : r.idempotency)
        idem.push_back(detail::residual_to_json(x));
    return Json{{"idempotency", std::move(idem)}, {"product", detail::residual_to_json(r.product)}};
}

template <class S>
Json to_json(const Certificate<S>& c)
{
    Json factors = Json::array();
    for (const auto& f : c.factors)
        factors.push_back(to_json(f));
    Json params = Json::object();
    for (const auto& [name, m] : c.parameters)
        params[name] = to_json(m);
    return Json{{"target", to_json(c.target)},
                {"decomposition", c.decomposition ? to_json(*c.decomposition) : Json(nullptr)},
                {"factors", std::move(factors)},
                {"recipe", std::string(to_string(c.recipe))},
                {"parameters", std::move(params)},
                {"residuals", to_json(c.residuals)},
                {"index_upper_bound", c.index_upper_bound}};
}

/// Residuals and index bound are recomputed rather than trusted.
template <class S>
Certificate<S> certificate_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("target") || !j.contains("factors") || !j["factors"].is_array())
        detail::bad_json("certificate needs \"target\" and a \"factors\" array");
    Certificate<S> c;
    c.target = matrix_from_json<S>(j["target"]);
    for (const auto& f : j["factors"])
        c.factors.push_back(matrix_from_json<S>(f));
    if (j.contains("decomposition") && !j["decomposition"].is_null())
        c.decomposition = decomposition_from_json<S>(j["decomposition"]);
    if (j.contains("recipe")) {
        if (!j["recipe"].is_string())
            detail::bad_json("\"recipe\" must be a string");
        const auto r = recipe_from_string(j["recipe"].get<std::string>());
        if (!r)
            detail::bad_json("unknown recipe \"" + j["recipe"].get<std::string>() + "\"");
        c.recipe = *r;
    }
    if (j.contains("parameters")) {
        if (!j["parameters"].is_object())
            detail::bad_json("\"parameters\" must be an object");
        for (const auto& [name, m] : j["parameters"].items())
            c.parameters.emplace(name, matrix_from_json<S>(m));
    }
    c.residuals = compute_residuals(c.target, c.factors);
    c.index_upper_bound = static_cast<Index>(c.factors.size());
    return c;
}

inline Json to_json(const VerificationReport& r)
{
    return Json{{"passed", r.passed}, {"residuals", to_json(r.residuals)}, {"failures", r.failures}};
}

template <class S>
Json to_json(const DouglasReport<S>& r)
{
    return Json{{"W0", to_json(r.w0)},
                {"nullity_U", r.nullity_u},
                {"nullity_W0", r.nullity_w0},
                {"product_matches", r.product_matches},
                {"kernel_equal", r.kernel_equal}};
}

template <class S>
Json to_json(const ConsistencyReport<S>& r)
{
    Json eqs = Json::object();
    for (const auto& [name, e] : r.equations)
        eqs[name] = Json{{"holds", e.holds}, {"residual", detail::residual_to_json(e.residual)}};
    Json systems = Json::object();
    for (const auto& [name, v] : r.systems)
        systems[name] = v;
    Json conditions = Json::object();
    for (const auto& [name, v] : r.conditions)
        conditions[name] = v;
    return Json{{"equations", std::move(eqs)},
                {"systems", std::move(systems)},
                {"conditions", std::move(conditions)},
                {"certificate", r.certificate ? to_json(*r.certificate) : Json(nullptr)}};
}

Json to_json(const CoordinateSet& s);
Json to_json(const StructuredOperator& op);
Json to_json(const MembershipReport& m);
Json to_json(const RangeClass& r);
Json to_json(const StructureReport& r);

/// {"kind": "right-shift"|"left-shift"|"diagonal", "exceptional": {"3": "0"}, "tail": {"constant": "1"} | "harmonic" | {"scale": "1/2", "power": 2}}
StructuredOperator operator_from_json(const Json& j);

}  // namespace idemfactor
