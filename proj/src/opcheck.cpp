#include "idemfactor/opcheck.hpp"

#include <algorithm>

namespace idemfactor {

namespace {

long first_tail_index(const WeightRule& w)
{
    return w.exceptional.empty() ? 1 : std::max(1L, w.exceptional.rbegin()->first + 1);
}

CoordinateSet shifted(const WeightRule::Zeros& z, long by)
{
    CoordinateSet s;
    for (long j : z.finite)
        s.finite.push_back(j + by);
    if (z.from)
        s.from = *z.from + by;
    return s;
}

CoordinateSet with_first(CoordinateSet s)
{
    if (!(s.from && *s.from <= 1) && std::find(s.finite.begin(), s.finite.end(), 1L) == s.finite.end())
        s.finite.insert(s.finite.begin(), 1);
    return s;
}

}  // namespace

Rational WeightRule::at(long j) const
{
    if (j < 1)
        throw Error(ErrorKind::BadParameter, "weights are indexed from 1");
    if (auto it = exceptional.find(j); it != exceptional.end())
        return it->second;
    Rational den(1);
    for (int i = 0; i < tail.power; ++i)
        den *= j;
    return tail.scale / den;
}

bool WeightRule::has_zero() const
{
    const auto z = zeros();
    return !z.finite.empty() || z.from.has_value();
}

bool WeightRule::bounded_below() const
{
    // A decaying tail with nonzero scale gets arbitrarily small; anything else
    // has finitely many distinct nonzero values.
    return tail.power == 0 || tail.scale == 0;
}

WeightRule::Zeros WeightRule::zeros() const
{
    Zeros z;
    const long from = first_tail_index(*this);
    for (long j = 1; j < from; ++j) {
        auto it = exceptional.find(j);
        if (it != exceptional.end() ? it->second == 0 : tail.scale == 0)
            z.finite.push_back(j);
    }
    if (tail.scale == 0)
        z.from = from;
    return z;
}

StructuredOperator right_shift() { return {OperatorKind::RightShift, {{}, WeightTail::constant(1)}}; }
StructuredOperator left_shift() { return {OperatorKind::LeftShift, {{}, WeightTail::constant(1)}}; }
StructuredOperator harmonic_diagonal() { return {OperatorKind::Diagonal, {{}, WeightTail::harmonic()}}; }

void validate(const StructuredOperator& op)
{
    if (op.weights.tail.power < 0)
        throw Error(ErrorKind::BadParameter, "weight tail grows without bound");
    for (const auto& [j, w] : op.weights.exceptional)
        if (j < 1)
            throw Error(ErrorKind::BadParameter, "exceptional index " + std::to_string(j) + " is below 1");
}

CoordinateSet range_gap(const StructuredOperator& op)
{
    const auto z = op.weights.zeros();
    switch (op.kind) {
    case OperatorKind::RightShift: return with_first(shifted(z, 1));
    case OperatorKind::LeftShift:
    case OperatorKind::Diagonal: return shifted(z, 0);
    }
    return {};
}

CoordinateSet kernel_coordinates(const StructuredOperator& op)
{
    const auto z = op.weights.zeros();
    switch (op.kind) {
    case OperatorKind::LeftShift: return with_first(shifted(z, 1));
    case OperatorKind::RightShift:
    case OperatorKind::Diagonal: return shifted(z, 0);
    }
    return {};
}

bool kernel_trivial(const StructuredOperator& op)
{
    validate(op);
    return kernel_coordinates(op).empty();
}

RangeClass range_classification(const StructuredOperator& op)
{
    validate(op);
    RangeClass r;
    r.dense = range_gap(op).empty();
    r.closed = op.weights.bounded_below();
    r.equals_x = r.dense && r.closed;
    return r;
}

MembershipReport membership_report(const StructuredOperator& op)
{
    validate(op);
    MembershipReport m;
    m.left_witness = range_gap(op);
    m.right_witness = kernel_coordinates(op);
    m.left_annihilator = !m.left_witness.empty();
    m.right_annihilator = !m.right_witness.empty();
    m.in_f_possible = m.left_annihilator && m.right_annihilator;
    if (op.kind == OperatorKind::Diagonal)
        m.regular = op.weights.bounded_below();
    return m;
}

StructuredOperator diagonal_product(const StructuredOperator& a, const StructuredOperator& b)
{
    if (a.kind != OperatorKind::Diagonal || b.kind != OperatorKind::Diagonal)
        throw Error(ErrorKind::WrongClass, "pointwise products are defined for diagonal operators only");
    StructuredOperator c;
    c.weights.tail = {a.weights.tail.scale * b.weights.tail.scale, a.weights.tail.power + b.weights.tail.power};
    for (const auto* src : {&a.weights.exceptional, &b.weights.exceptional})
        for (const auto& [j, w] : *src)
            c.weights.exceptional[j] = a.weights.at(j) * b.weights.at(j);
    return c;
}

Mat<Rational> truncate(const StructuredOperator& op, Index n)
{
    validate(op);
    Mat<Rational> t = zeros<Rational>(n, n);
    for (Index i = 0; i < n; ++i) {
        const Rational w = op.weights.at(static_cast<long>(i) + 1);
        switch (op.kind) {
        case OperatorKind::RightShift:
            if (i + 1 < n)
                t(i + 1, i) = w;
            break;
        case OperatorKind::LeftShift:
            if (i + 1 < n)
                t(i, i + 1) = w;
            break;
        case OperatorKind::Diagonal: t(i, i) = w; break;
        }
    }
    return t;
}

}  // namespace idemfactor
