#include "hbill/mink.hpp"

#include <algorithm>
#include <string>

#include "hbill/error.hpp"

namespace hbill {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonPositiveNorm: return "NonPositiveNorm";
    case ErrorCode::UnsupportedParameters: return "UnsupportedParameters";
    case ErrorCode::PoleParameter: return "PoleParameter";
    case ErrorCode::AtInfinity: return "AtInfinity";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::DegenerateTangency: return "DegenerateTangency";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::DegenerateReflection: return "DegenerateReflection";
    case ErrorCode::DegenerateChord: return "DegenerateChord";
    case ErrorCode::UnsupportedTable: return "UnsupportedTable";
    case ErrorCode::ZeroConstantTerm: return "ZeroConstantTerm";
    case ErrorCode::NoTangentDirection: return "NoTangentDirection";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::string_view to_string(CausalClass c)
{
    switch (c) {
    case CausalClass::SpaceLike: return "space-like";
    case CausalClass::LightLike: return "light-like";
    case CausalClass::TimeLike: return "time-like";
    case CausalClass::Zero: return "zero";
    }
    return "zero";
}

CausalClass causal_class_from_string(std::string_view s)
{
    if (s == "space-like") return CausalClass::SpaceLike;
    if (s == "light-like") return CausalClass::LightLike;
    if (s == "time-like") return CausalClass::TimeLike;
    if (s == "zero") return CausalClass::Zero;
    throw Error(ErrorCode::ParseError, "unknown causal class '" + std::string(s) + "'");
}

double inner(const MVec& x, const MVec& y)
{
    return -x.x0 * y.x0 + x.x1 * y.x1 + x.x2 * y.x2;
}

CausalClass causal_class(const MVec& v, double eps)
{
    if (v.x0 == 0.0 && v.x1 == 0.0 && v.x2 == 0.0)
        return CausalClass::Zero;
    const double q = inner(v, v);
    const double e2 = euclid_dot(v, v);
    if (std::abs(q) <= eps * e2)
        return CausalClass::LightLike;
    return q > 0.0 ? CausalClass::SpaceLike : CausalClass::TimeLike;
}

Bivector wedge(const MVec& x, const MVec& y)
{
    return {x.x0 * y.x1 - x.x1 * y.x0, x.x0 * y.x2 - x.x2 * y.x0, x.x1 * y.x2 - x.x2 * y.x1};
}

double wedge_norm2(const MVec& x, const MVec& y)
{
    const double xy = inner(x, y);
    return xy * xy - inner(x, x) * inner(y, y);
}

double wedge_norm2(const Bivector& w)
{
    return -w.w12 * w.w12 + w.w02 * w.w02 + w.w01 * w.w01;
}

bool on_hyperboloid(const MVec& x, double tol)
{
    return std::abs(inner(x, x) - 1.0) <= tol;
}

MVec renormalize_to_h(const MVec& x, double eps)
{
    const double q = inner(x, x);
    if (!(q > eps))
        throw Error(ErrorCode::NonPositiveNorm, "<x,x> = " + std::to_string(q) + " is not positive");
    return x / std::sqrt(q);
}

double euclid_dot(const MVec& a, const MVec& b)
{
    return a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2;
}

double euclid_norm(const MVec& v)
{
    return std::sqrt(euclid_dot(v, v));
}

MVec minkowski_cross(const MVec& a, const MVec& b)
{
    return {-(a.x1 * b.x2 - a.x2 * b.x1), a.x2 * b.x0 - a.x0 * b.x2, a.x0 * b.x1 - a.x1 * b.x0};
}

} // namespace hbill
