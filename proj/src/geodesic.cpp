#include "hbill/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hbill/error.hpp"

namespace hbill {

namespace {

constexpr double kTangentTol = 1e-8;
constexpr double kOnBoundaryTol = 1e-9;
constexpr double kMinParam = 1e-12;

void check_tangent(const MVec& x, const MVec& v)
{
    const double xv = inner(x, v);
    if (std::abs(xv) > kTangentTol * std::max(1.0, euclid_norm(v) * euclid_norm(x)))
        throw Error(ErrorCode::NotTangent, "<x,v> = " + std::to_string(xv));
}

double smallest_positive(const std::vector<double>& ts)
{
    double best = -1.0;
    for (double t : ts)
        if (t > kMinParam && (best < 0.0 || t < best))
            best = t;
    return best;
}

// Real roots of a t^2 + b t + c = 0, tolerant of a ~ 0.
std::vector<double> quadratic_roots(double a, double b, double c)
{
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale == 0.0)
        return {};
    if (std::abs(a) <= 1e-14 * scale) {
        if (b == 0.0)
            return {};
        return {-c / b};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0)
        return {};
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> out{q / a};
    if (q != 0.0)
        out.push_back(c / q);
    return out;
}

} // namespace

std::string_view to_string(Connectivity c)
{
    switch (c) {
    case Connectivity::UniqueTimeLike: return "unique-time-like";
    case Connectivity::UniqueLightLike: return "unique-light-like";
    case Connectivity::UniqueSpaceLike: return "unique-space-like";
    case Connectivity::NotConnectable: return "not-connectable";
    case Connectivity::Antipodal: return "antipodal";
    }
    return "?";
}

Connectivity connectivity(const MVec& p, const MVec& q, double eps)
{
    if (euclid_norm(p + q) <= eps * euclid_norm(p))
        return Connectivity::Antipodal;
    const double g = inner(p, q);
    if (std::abs(g - 1.0) <= eps)
        return Connectivity::UniqueLightLike;
    if (g > 1.0)
        return Connectivity::UniqueTimeLike;
    if (g > -1.0)
        return Connectivity::UniqueSpaceLike;
    return Connectivity::NotConnectable;
}

MVec flow(const MVec& x, const MVec& v, double t)
{
    check_tangent(x, v);
    switch (causal_class(v)) {
    case CausalClass::SpaceLike: return std::cos(t) * x + std::sin(t) * v;
    case CausalClass::TimeLike: return std::cosh(t) * x + std::sinh(t) * v;
    case CausalClass::LightLike: return x + t * v;
    case CausalClass::Zero: break;
    }
    return x;
}

MVec flow_velocity(const MVec& x, const MVec& v, double t)
{
    switch (causal_class(v)) {
    case CausalClass::SpaceLike: return -std::sin(t) * x + std::cos(t) * v;
    case CausalClass::TimeLike: return std::sinh(t) * x + std::cosh(t) * v;
    case CausalClass::LightLike: return v;
    case CausalClass::Zero: break;
    }
    return v;
}

std::string_view to_string(Side s)
{
    return s == Side::Interior ? "interior" : "exterior";
}

Side side_from_string(std::string_view s)
{
    if (s == "interior")
        return Side::Interior;
    if (s == "exterior")
        return Side::Exterior;
    throw Error(ErrorCode::ParseError, "side must be 'interior' or 'exterior', got '" + std::string(s) + "'");
}

std::optional<ChordHit> next_boundary_hit(const TableParams& t, const MVec& x, const MVec& v, Side side)
{
    check_tangent(x, v);
    const CausalClass cls = causal_class(v);
    if (cls == CausalClass::Zero)
        throw Error(ErrorCode::InvalidArgument, "zero direction");

    const MVec ax = apply_inverse(t, x);
    const MVec av = apply_inverse(t, v);
    const double qxx = inner(ax, x);
    const double qxv = inner(ax, v);
    const double qvv = inner(av, v);
    const double sgn = side == Side::Interior ? 1.0 : -1.0;
    const double eps = 1e-12 * std::max(euclid_norm(ax), euclid_norm(av)) * euclid_norm(v);

    double t_hit = -1.0;
    if (std::abs(qxx) <= kOnBoundaryTol) {
        if (std::abs(qxv) <= eps && std::abs(qvv) <= eps)
            throw Error(ErrorCode::DegenerateTangency, "direction is tangent to the boundary to second order");
        if (std::abs(qxv) <= eps)
            return std::nullopt; // grazing
        if (sgn * qxv < 0.0)
            throw Error(ErrorCode::InvalidArgument,
                        std::string("direction does not enter the ") + std::string(to_string(side)));
        // The tangency at t = 0 factors out of the cone equation along the flow.
        const double r = -2.0 * qxv / qvv;
        switch (cls) {
        case CausalClass::SpaceLike:
            t_hit = std::atan2(2.0 * std::abs(qxv), -std::copysign(1.0, qxv) * qvv);
            break;
        case CausalClass::TimeLike:
            if (qvv != 0.0 && r > 0.0 && r < 1.0)
                t_hit = std::atanh(r);
            break;
        case CausalClass::LightLike:
            if (qvv != 0.0 && r > 0.0)
                t_hit = r;
            break;
        case CausalClass::Zero: break;
        }
    }
    else {
        if (sgn * qxx < 0.0)
            throw Error(ErrorCode::InvalidArgument,
                        std::string("start point is not in the ") + std::string(to_string(side)));
        switch (cls) {
        case CausalClass::SpaceLike: {
            // Q(t) = alpha + beta cos 2t + gamma sin 2t
            const double alpha = 0.5 * (qxx + qvv);
            const double beta = 0.5 * (qxx - qvv);
            const double gamma = qxv;
            const double radius = std::hypot(beta, gamma);
            if (radius <= std::abs(alpha))
                break;
            const double phi = std::atan2(gamma, beta);
            const double psi = std::acos(std::clamp(-alpha / radius, -1.0, 1.0));
            std::vector<double> cands;
            for (double base : {0.5 * (phi + psi), 0.5 * (phi - psi)}) {
                double c = std::fmod(base, std::numbers::pi);
                if (c <= kMinParam)
                    c += std::numbers::pi;
                cands.push_back(c);
            }
            t_hit = smallest_positive(cands);
            break;
        }
        case CausalClass::TimeLike: {
            // z = e^{2t}: (qxx+qvv+2qxv) z^2 + 2(qxx-qvv) z + (qxx+qvv-2qxv) = 0, z > 1
            std::vector<double> ts;
            for (double z : quadratic_roots(qxx + qvv + 2.0 * qxv, 2.0 * (qxx - qvv), qxx + qvv - 2.0 * qxv))
                if (z > 1.0)
                    ts.push_back(0.5 * std::log(z));
            t_hit = smallest_positive(ts);
            break;
        }
        case CausalClass::LightLike:
            t_hit = smallest_positive(quadratic_roots(qvv, 2.0 * qxv, qxx));
            break;
        case CausalClass::Zero: break;
        }
    }
    if (!(t_hit > 0.0) || !std::isfinite(t_hit))
        return std::nullopt;

    ChordHit hit;
    hit.t_hit = t_hit;
    hit.point = flow(x, v, t_hit);
    hit.velocity = flow_velocity(x, v, t_hit);
    hit.geodesic_class = cls;
    if (t.kind == TableKind::Transverse && hit.point.x2 <= 0.0)
        return std::nullopt;
    return hit;
}

TangentBasis tangent_basis(const TableParams& t, const MVec& p)
{
    const MVec ap = apply_inverse(t, p);
    const MVec n = ap - (inner(ap, p) / inner(p, p)) * p;
    const double nn = inner(n, n);
    if (std::abs(nn) <= 1e-10 * euclid_dot(n, n))
        throw Error(ErrorCode::SingularPoint, "boundary normal is light-like");
    const MVec u = minkowski_cross(p, n);
    return {u / std::sqrt(std::abs(inner(u, u))), n / std::sqrt(std::abs(nn))};
}

MVec normalize_direction(const MVec& v)
{
    switch (causal_class(v)) {
    case CausalClass::SpaceLike:
    case CausalClass::TimeLike: return v / std::sqrt(std::abs(inner(v, v)));
    case CausalClass::LightLike: {
        const double m = std::max({std::abs(v.x0), std::abs(v.x1), std::abs(v.x2)});
        return v / m;
    }
    case CausalClass::Zero: break;
    }
    throw Error(ErrorCode::InvalidArgument, "cannot normalize the zero vector");
}

MVec direction_toward(const MVec& p, const MVec& q)
{
    const Connectivity c = connectivity(p, q);
    const double g = inner(p, q);
    switch (c) {
    case Connectivity::UniqueSpaceLike: {
        const double s = std::sqrt(std::max(0.0, 1.0 - g * g));
        return (q - g * p) / s;
    }
    case Connectivity::UniqueTimeLike: {
        const double s = std::sqrt(std::max(0.0, g * g - 1.0));
        return (q - g * p) / s;
    }
    case Connectivity::UniqueLightLike: return normalize_direction(q - p - (g - 1.0) * p);
    case Connectivity::NotConnectable:
    case Connectivity::Antipodal: break;
    }
    throw Error(ErrorCode::InvalidArgument,
                std::string("points are not joined by a unique geodesic (") + std::string(to_string(c)) + ")");
}

} // namespace hbill
