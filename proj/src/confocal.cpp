#include "hbill/confocal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hbill/error.hpp"

namespace hbill {

namespace {

constexpr double kSepRel = 1e-9;
constexpr double kPoleRel = 1e-12;
constexpr double kDoubleRootRel = 1e-10;

// Signature J = diag(-1, 1, 1).
constexpr double sig(int i) { return i == 0 ? -1.0 : 1.0; }

void check_pole(const TableParams& t, double lambda)
{
    const double tol = kPoleRel * std::max(1.0, t.scale());
    for (int i = 0; i < 3; ++i) {
        if (std::abs(lambda - t.a(i)) <= tol) {
            std::ostringstream os;
            os << "lambda = " << lambda << " coincides with a" << i;
            throw Error(ErrorCode::PoleParameter, os.str());
        }
    }
}

} // namespace

std::string_view to_string(TableKind k)
{
    return k == TableKind::Collared ? "collared" : "transverse";
}

double TableParams::scale() const
{
    return std::max({std::abs(a0), std::abs(a1), std::abs(a2)});
}

TableParams classify_table(double a0, double a1, double a2)
{
    std::ostringstream os;
    os << "(" << a0 << ", " << a1 << ", " << a2 << ")";
    if (!std::isfinite(a0) || !std::isfinite(a1) || !std::isfinite(a2))
        throw Error(ErrorCode::UnsupportedParameters, os.str() + " is not finite");

    const double sep = kSepRel * std::max({std::abs(a0), std::abs(a1), std::abs(a2)});
    auto below = [sep](double lo, double hi) { return hi - lo > sep; };

    if (below(0.0, a0) && below(a0, a1) && below(a1, a2))
        return {a0, a1, a2, TableKind::Collared};
    if (below(a1, 0.0) && below(0.0, a0) && below(a0, a2))
        return {a0, a1, a2, TableKind::Transverse};
    throw Error(ErrorCode::UnsupportedParameters,
                os.str() + " matches neither 0 < a0 < a1 < a2 nor a1 < 0 < a0 < a2");
}

double cone_eval(const TableParams& t, double lambda, const MVec& x)
{
    check_pole(t, lambda);
    return -x.x0 * x.x0 / (t.a0 - lambda) + x.x1 * x.x1 / (t.a1 - lambda)
        + x.x2 * x.x2 / (t.a2 - lambda);
}

double boundary_eval(const TableParams& t, const MVec& x)
{
    return -x.x0 * x.x0 / t.a0 + x.x1 * x.x1 / t.a1 + x.x2 * x.x2 / t.a2;
}

MVec apply_inverse(const TableParams& t, const MVec& x)
{
    return {x.x0 / t.a0, x.x1 / t.a1, x.x2 / t.a2};
}

std::string_view to_string(JacobiCase c)
{
    switch (c) {
    case JacobiCase::CollaredGeneric: return "i";
    case JacobiCase::TransverseA: return "2a";
    case JacobiCase::TransverseB: return "2b";
    case JacobiCase::TransverseC: return "2c";
    case JacobiCase::TransverseD: return "2d";
    case JacobiCase::TransverseDouble: return "ii-double";
    case JacobiCase::TransverseNone: return "ii-none";
    case JacobiCase::X0Zero: return "iii";
    case JacobiCase::X1Zero: return "iv";
    case JacobiCase::X2Zero: return "v";
    }
    return "?";
}

JacobiCoords jacobi_coordinates(const TableParams& t, const MVec& x)
{
    const double s0 = x.x0 * x.x0;
    const double s1 = x.x1 * x.x1;
    const double s2 = x.x2 * x.x2;
    // Numerator of the confocal equation, monic in lambda: l^2 - tau l + c.
    const double tau = -(t.a1 + t.a2) * s0 + (t.a0 + t.a2) * s1 + (t.a0 + t.a1) * s2;
    const double c = -t.a1 * t.a2 * s0 + t.a0 * t.a2 * s1 + t.a0 * t.a1 * s2;
    const double disc = tau * tau - 4.0 * c;

    JacobiCoords out;
    out.discriminant = disc;

    const double zero_tol = 1e-12 * euclid_norm(x);
    bool plane = true;
    if (std::abs(x.x0) <= zero_tol)
        out.tag = JacobiCase::X0Zero;
    else if (std::abs(x.x1) <= zero_tol)
        out.tag = JacobiCase::X1Zero;
    else if (std::abs(x.x2) <= zero_tol)
        out.tag = JacobiCase::X2Zero;
    else
        plane = false;

    double d = disc;
    if (t.kind == TableKind::Collared) {
        // Nonnegative as a sum of squares; clamp rounding.
        d = std::max(d, 0.0);
        if (!plane)
            out.tag = JacobiCase::CollaredGeneric;
    }
    else if (!plane) {
        if (std::abs(d) <= kDoubleRootRel * (tau * tau + 4.0 * std::abs(c))) {
            out.kind = JacobiCoords::Kind::DoubleRoot;
            out.lo = out.hi = 0.5 * tau;
            out.tag = JacobiCase::TransverseDouble;
            return out;
        }
        if (d < 0.0) {
            out.kind = JacobiCoords::Kind::NoRealRoots;
            out.tag = JacobiCase::TransverseNone;
            return out;
        }
    }
    d = std::max(d, 0.0);

    const double sq = std::sqrt(d);
    const double big = 0.5 * (tau + std::copysign(sq, tau));
    double r1 = big;
    double r2 = big != 0.0 ? c / big : 0.0;
    if (r1 > r2)
        std::swap(r1, r2);
    out.kind = JacobiCoords::Kind::TwoRoots;
    out.lo = r1;
    out.hi = r2;

    if (t.kind == TableKind::Transverse && !plane) {
        const double mid = 0.5 * (r1 + r2);
        if (mid < t.a1)
            out.tag = JacobiCase::TransverseA;
        else if (mid < t.a0)
            out.tag = JacobiCase::TransverseB;
        else if (mid < t.a2)
            out.tag = JacobiCase::TransverseC;
        else
            out.tag = JacobiCase::TransverseD;
    }
    return out;
}

std::string_view to_string(CurveType c)
{
    switch (c) {
    case CurveType::EllipticType: return "elliptic";
    case CurveType::HyperbolicType: return "hyperbolic";
    case CurveType::Degenerate: return "degenerate";
    case CurveType::Empty: return "empty";
    }
    return "?";
}

CurveType curve_type(const TableParams& t, double lambda)
{
    const double tol = kPoleRel * std::max(1.0, t.scale());
    for (int i = 0; i < 3; ++i)
        if (std::abs(lambda - t.a(i)) <= tol)
            return CurveType::Degenerate;

    if (t.kind == TableKind::Collared) {
        if (lambda < t.a0)
            return CurveType::EllipticType;
        if (lambda > t.a1 && lambda < t.a2)
            return CurveType::HyperbolicType;
        return CurveType::Empty;
    }
    if (lambda > t.a1 && lambda < t.a2)
        return CurveType::EllipticType;
    return CurveType::HyperbolicType;
}

std::optional<std::array<MVec, 4>> foci(const TableParams& t, int axis)
{
    if (axis < 0 || axis > 2)
        throw Error(ErrorCode::InvalidArgument, "axis must be 0, 1 or 2");
    const int j = axis == 0 ? 1 : 0;
    const int k = axis == 2 ? 1 : 2;
    const double ai = t.a(axis);
    const double aj = t.a(j);
    const double ak = t.a(k);
    // x_axis = 0, <x,x> = 1 and the degenerate cone sum_{m != axis} J_m x_m^2 / (a_m - a_axis) = 0.
    const double xj2 = (aj - ai) / (sig(j) * (aj - ak));
    const double xk2 = (ak - ai) / (sig(k) * (ak - aj));
    if (!(xj2 >= 0.0) || !(xk2 >= 0.0))
        return std::nullopt;
    const double xj = std::sqrt(xj2);
    const double xk = std::sqrt(xk2);

    std::array<MVec, 4> out;
    const double signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (int m = 0; m < 4; ++m) {
        MVec p;
        p[axis] = 0.0;
        p[j] = signs[m][0] * xj;
        p[k] = signs[m][1] * xk;
        out[m] = p;
    }
    return out;
}

std::string_view to_string(Region r)
{
    switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::D: return "D";
    case Region::E: return "E";
    case Region::OnLine: return "on-line";
    }
    return "?";
}

Region region_classify(const TableParams& t, const MVec& x)
{
    if (t.kind != TableKind::Transverse)
        throw Error(ErrorCode::UnsupportedTable, "region classification applies to transverse tables");
    const double u = std::abs(x.x0) * std::sqrt(t.a2 - t.a0);
    const double w = std::abs(x.x1) * std::sqrt(t.a2 - t.a1);
    const double s = std::sqrt(t.a0 - t.a1);
    const double tol = 1e-10 * std::max(1.0, s);

    if (std::abs(u + w - s) <= tol || std::abs(std::abs(u - w) - s) <= tol)
        return Region::OnLine;
    if (u + w < s)
        return Region::B;
    if (std::abs(u - w) < s)
        return Region::E;
    if (u - w > s)
        return Region::A;
    // Beyond the line w - u = s, which touches -x0^2 + x1^2 = 1 at the F^2 focus.
    const double focus_x0 = std::sqrt((t.a2 - t.a0) / (t.a0 - t.a1));
    return std::abs(x.x0) < focus_x0 ? Region::C : Region::D;
}

KleinPoint klein_project(const MVec& x, double eps)
{
    if (std::abs(x.x0) <= eps * euclid_norm(x))
        throw Error(ErrorCode::AtInfinity, "x0 = 0 projects to the line at infinity");
    return {x.x1 / x.x0, x.x2 / x.x0};
}

std::array<double, 2> klein_boundary_coeffs(const TableParams& t)
{
    return {t.a1 / t.a0, t.a2 / t.a0};
}

std::array<double, 2> projected_caustic_coeffs(const TableParams& t, double nu)
{
    if (std::isinf(nu))
        return {1.0, 1.0};
    if (std::abs(nu - t.a0) <= kPoleRel * std::max(1.0, t.scale()))
        throw Error(ErrorCode::PoleParameter, "nu = a0 has no Klein image");
    return {(t.a1 - nu) / (t.a0 - nu), (t.a2 - nu) / (t.a0 - nu)};
}

MVec boundary_point(const TableParams& t, double angle, int component)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    if (t.kind == TableKind::Collared) {
        const double k = c * c / t.a1 + s * s / t.a2;
        const double r = 1.0 / std::sqrt(1.0 - t.a0 * k);
        const double x0 = std::sqrt(t.a0 * k) * r;
        return {component < 0 ? -x0 : x0, r * c, r * s};
    }
    const double k = c * c / t.a0 - s * s / t.a1;
    const double r = 1.0 / std::sqrt(-c * c + s * s + t.a2 * k);
    return {r * c, r * s, std::sqrt(t.a2 * k) * r};
}

} // namespace hbill
