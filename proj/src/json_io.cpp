#include "idemfactor/json_io.hpp"

namespace idemfactor {

namespace {

Rational rational_field(const Json& j, const char* what)
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<long long>());
    detail::bad_json(std::string(what) + " must be a rational string or an integer");
}

}  // namespace

Json to_json(const CoordinateSet& s)
{
    return Json{{"indices", s.finite}, {"from", s.from ? Json(*s.from) : Json(nullptr)}};
}

Json to_json(const StructuredOperator& op)
{
    Json exc = Json::object();
    for (const auto& [j, w] : op.weights.exceptional)
        exc[std::to_string(j)] = format_rational(w);
    Json tail;
    if (op.weights.tail.power == 0)
        tail = Json{{"constant", format_rational(op.weights.tail.scale)}};
    else if (op.weights.tail.power == 1 && op.weights.tail.scale == 1)
        tail = "harmonic";
    else
        tail = Json{{"scale", format_rational(op.weights.tail.scale)}, {"power", op.weights.tail.power}};
    return Json{{"kind", std::string(to_string(op.kind))}, {"exceptional", std::move(exc)}, {"tail", std::move(tail)}};
}

Json to_json(const RangeClass& r)
{
    return Json{{"dense", r.dense}, {"closed", r.closed}, {"equals_X", r.equals_x}};
}

Json to_json(const MembershipReport& m)
{
    return Json{{"left_annihilator", m.left_annihilator},
                {"right_annihilator", m.right_annihilator},
                {"in_F_possible", m.in_f_possible},
                {"regular", m.regular ? Json(*m.regular) : Json("unknown")},
                {"left_witness", m.left_annihilator ? to_json(m.left_witness) : Json(nullptr)},
                {"right_witness", m.right_annihilator ? to_json(m.right_witness) : Json(nullptr)}};
}

Json to_json(const StructureReport& r)
{
    Json v = Json::array();
    for (const auto& x : r.violations)
        v.push_back(Json{{"key", x.key}, {"rule", x.rule}, {"detail", x.detail}});
    return Json{{"checked", r.checked}, {"ok", r.ok()}, {"violations", std::move(v)}};
}

StructuredOperator operator_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        detail::bad_json("operator needs a string \"kind\"");
    StructuredOperator op;
    const auto kind = j["kind"].get<std::string>();
    if (kind == "right-shift")
        op.kind = OperatorKind::RightShift;
    else if (kind == "left-shift")
        op.kind = OperatorKind::LeftShift;
    else if (kind == "diagonal")
        op.kind = OperatorKind::Diagonal;
    else
        detail::bad_json("unknown operator kind \"" + kind + "\"");

    if (j.contains("exceptional")) {
        if (!j["exceptional"].is_object())
            detail::bad_json("\"exceptional\" must map indices to weights");
        for (const auto& [key, w] : j["exceptional"].items()) {
            long idx = 0;
            try {
                std::size_t used = 0;
                idx = std::stol(key, &used);
                if (used != key.size())
                    throw std::invalid_argument(key);
            } catch (const std::exception&) {
                detail::bad_json("exceptional index \"" + key + "\" is not an integer");
            }
            op.weights.exceptional[idx] = rational_field(w, "exceptional weight");
        }
    }

    op.weights.tail = WeightTail::constant(1);
    if (j.contains("tail")) {
        const Json& t = j["tail"];
        if (t.is_string() && t.get<std::string>() == "harmonic")
            op.weights.tail = WeightTail::harmonic();
        else if (t.is_object() && t.contains("constant"))
            op.weights.tail = WeightTail::constant(rational_field(t["constant"], "constant tail"));
        else if (t.is_object() && t.contains("scale") && t.contains("power") && t["power"].is_number_integer())
            op.weights.tail = {rational_field(t["scale"], "tail scale"), t["power"].get<int>()};
        else
            detail::bad_json("\"tail\" must be \"harmonic\", {\"constant\": c} or {\"scale\": s, \"power\": k}");
    }
    validate(op);
    return op;
}

}  // namespace idemfactor
