#include "hbill/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "hbill/error.hpp"

namespace hbill {

namespace {

constexpr double sig(int i) { return i == 0 ? -1.0 : 1.0; }

// Snap a nearly light-like tangent vector back onto the light cone of T_p H.
MVec snap_light_like(const TableParams& t, const MVec& p, const MVec& v)
{
    const BoundaryFrame f = boundary_frame(t, p);
    const double a = inner(v, f.space);
    const double b = -inner(v, f.time);
    const double m = 0.5 * (std::abs(a) + std::abs(b));
    return normalize_direction(std::copysign(m, a) * f.space + std::copysign(m, b) * f.time);
}

// Newton steps along the normal keep bounce points from drifting off the boundary.
MVec snap_to_boundary(const TableParams& t, const MVec& x)
{
    MVec p = renormalize_to_h(x);
    for (int it = 0; it < 2; ++it) {
        const MVec ap = apply_inverse(t, p);
        const double q = inner(ap, p);
        const MVec n = ap - q * p;
        const double nn = inner(n, n);
        if (std::abs(nn) <= 1e-6 * euclid_dot(n, n))
            break;
        p = renormalize_to_h(p - (0.5 * q / nn) * n);
    }
    return p;
}

double euclid_angle(const MVec& a, const MVec& b)
{
    const MVec c{a.x1 * b.x2 - a.x2 * b.x1, a.x2 * b.x0 - a.x0 * b.x2, a.x0 * b.x1 - a.x1 * b.x0};
    return std::atan2(euclid_norm(c), euclid_dot(a, b));
}

} // namespace

std::string_view to_string(StopStatus s)
{
    switch (s) {
    case StopStatus::Completed: return "completed";
    case StopStatus::NoHit: return "no-hit";
    case StopStatus::DegenerateReflection: return "degenerate-reflection";
    case StopStatus::DegenerateTangency: return "degenerate-tangency";
    }
    return "?";
}

StopStatus stop_status_from_string(std::string_view s)
{
    for (StopStatus v : {StopStatus::Completed, StopStatus::NoHit, StopStatus::DegenerateReflection,
                         StopStatus::DegenerateTangency})
        if (to_string(v) == s)
            return v;
    throw Error(ErrorCode::ParseError, "unknown status '" + std::string(s) + "'");
}

MVec reflect(const TableParams& t, const MVec& p, const MVec& v_in)
{
    const MVec ap = apply_inverse(t, p);
    const MVec n = ap - (inner(ap, p) / inner(p, p)) * p;
    const double nn = inner(n, n);
    if (std::abs(nn) <= 1e-10 * euclid_dot(n, n))
        throw Error(ErrorCode::DegenerateReflection, "boundary normal is light-like at the hit point");
    return v_in - (2.0 * inner(v_in, n) / nn) * n;
}

Trajectory simulate(const TableParams& t, const BilliardState& s0, int n_bounces, Side side)
{
    if (n_bounces < 1)
        throw Error(ErrorCode::InvalidArgument, "n_bounces must be at least 1");

    Trajectory traj;
    traj.table = t;
    traj.side = side;

    const CausalClass cls = causal_class(s0.dir);
    MVec x = s0.point;
    MVec v = normalize_direction(s0.dir);
    traj.states.push_back({x, v});

    for (int k = 0; k < n_bounces; ++k) {
        std::optional<ChordHit> hit;
        try {
            hit = next_boundary_hit(t, x, v, side);
        }
        catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateTangency)
                throw;
            traj.status = StopStatus::DegenerateTangency;
            break;
        }
        if (!hit) {
            traj.status = StopStatus::NoHit;
            break;
        }
        const MVec p = snap_to_boundary(t, hit->point);
        const MVec v_in = hit->velocity - inner(hit->velocity, p) * p;
        MVec v_out;
        try {
            v_out = reflect(t, p, v_in);
        }
        catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateReflection)
                throw;
            traj.states.push_back({p, normalize_direction(v_in)});
            traj.status = StopStatus::DegenerateReflection;
            break;
        }
        v_out = cls == CausalClass::LightLike ? snap_light_like(t, p, v_out) : normalize_direction(v_out);
        traj.states.push_back({p, v_out});
        x = p;
        v = v_out;
    }
    annotate(traj);
    return traj;
}

Integrals integrals(const TableParams& t, const MVec& x, const MVec& y)
{
    Integrals out;
    for (int j = 0; j < 3; ++j) {
        double f = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (i == j)
                continue;
            const double w = x[i] * y[j] - x[j] * y[i];
            f += sig(i) * sig(j) * w * w / (t.a(j) - t.a(i));
        }
        out.F[j] = f;
    }
    return out;
}

std::array<double, 3> projective_ratios(const Integrals& f)
{
    const double n = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
    if (n == 0.0)
        return {0.0, 0.0, 0.0};
    int big = 0;
    for (int j = 1; j < 3; ++j)
        if (std::abs(f[j]) > std::abs(f[big]))
            big = j;
    const double s = std::copysign(1.0 / n, f[big]);
    return {s * f[0], s * f[1], s * f[2]};
}

PhiForms phi_mu_forms(const TableParams& t, const MVec& x, const MVec& y, double mu)
{
    const double tol = 1e-12 * std::max(1.0, t.scale());
    for (int i = 0; i < 3; ++i)
        if (std::abs(mu - t.a(i)) <= tol)
            throw Error(ErrorCode::PoleParameter, "mu coincides with a" + std::to_string(i));

    auto resolvent = [&](const MVec& u, const MVec& w) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            s += sig(i) * u[i] * w[i] / (t.a(i) - mu);
        return s;
    };
    const double rxy = resolvent(x, y);
    PhiForms out;
    out.resolvent = rxy * rxy - resolvent(x, x) * resolvent(y, y);

    const Integrals f = integrals(t, x, y);
    for (int i = 0; i < 3; ++i)
        out.partial_fractions += f[i] / (t.a(i) - mu);
    return out;
}

double phi_mu(const TableParams& t, const MVec& x, const MVec& y, double mu)
{
    return phi_mu_forms(t, x, y, mu).resolvent;
}

double caustic_nu(const TableParams& t, const MVec& x, const MVec& y)
{
    const Bivector w = wedge(x, y);
    const double s01 = w.w01 * w.w01;
    const double s02 = w.w02 * w.w02;
    const double s12 = w.w12 * w.w12;
    const double scale = s01 + s02 + s12;
    if (scale == 0.0)
        throw Error(ErrorCode::InvalidArgument, "caustic of a degenerate chord (x and y are parallel)");
    const double den = -s12 + s02 + s01;
    if (std::abs(den) <= kCausalEps * scale)
        return std::numeric_limits<double>::infinity();
    return (-t.a0 * s12 + t.a1 * s02 + t.a2 * s01) / den;
}

BoundaryFrame boundary_frame(const TableParams& t, const MVec& p)
{
    const TangentBasis b = tangent_basis(t, p);
    if (inner(b.u, b.u) > 0.0)
        return {b.u, b.n};
    return {b.n, b.u};
}

MVec make_direction(const TableParams& t, const MVec& p, CausalClass cls, double rapidity, Side side, int branch)
{
    const BoundaryFrame f = boundary_frame(t, p);
    const double ch = std::cosh(rapidity);
    const double sh = std::sinh(rapidity);
    MVec v;
    switch (cls) {
    case CausalClass::SpaceLike: v = ch * f.space + sh * f.time; break;
    case CausalClass::TimeLike: v = sh * f.space + ch * f.time; break;
    case CausalClass::LightLike: v = f.space + (branch < 0 ? -1.0 : 1.0) * f.time; break;
    case CausalClass::Zero: throw Error(ErrorCode::InvalidArgument, "zero direction requested");
    }
    const double q = inner(apply_inverse(t, p), v);
    if (std::abs(q) <= 1e-12 * euclid_norm(v))
        throw Error(ErrorCode::InvalidArgument, "requested direction is tangent to the boundary");
    const double want = side == Side::Interior ? 1.0 : -1.0;
    if (q * want < 0.0)
        v = -v;
    return normalize_direction(v);
}

std::vector<MVec> direction_for_caustic(const TableParams& t, const MVec& x, double nu, Side side)
{
    const TangentBasis b = tangent_basis(t, x);
    const Bivector wu = wedge(x, b.u);
    const Bivector wn = wedge(x, b.n);

    // G(w) = -(a0-nu) w12^2 + (a1-nu) w02^2 + (a2-nu) w01^2 vanishes exactly when
    // the chord direction has caustic parameter nu. At nu = inf keep the leading term.
    std::array<double, 3> k;
    if (std::isinf(nu))
        k = {1.0, 1.0, 1.0};
    else
        k = {t.a0 - nu, t.a1 - nu, t.a2 - nu};
    auto form = [&](const Bivector& p, const Bivector& q) {
        return -k[0] * p.w12 * q.w12 + k[1] * p.w02 * q.w02 + k[2] * p.w01 * q.w01;
    };
    const double caa = form(wu, wu);
    const double cab = form(wu, wn);
    const double cbb = form(wn, wn);
    const double scale = std::max({std::abs(caa), std::abs(cab), std::abs(cbb)});
    if (scale == 0.0)
        return {};

    double disc = cab * cab - caa * cbb;
    if (disc < -1e-14 * scale * scale)
        return {};
    disc = std::max(disc, 0.0);
    const double sq = std::sqrt(disc);

    std::vector<std::array<double, 2>> coeffs;
    if (std::abs(cbb) >= std::abs(caa)) {
        // alpha = 1: cbb beta^2 + 2 cab beta + caa = 0
        coeffs.push_back({1.0, (-cab + sq) / cbb});
        if (sq > 0.0)
            coeffs.push_back({1.0, (-cab - sq) / cbb});
    }
    else {
        coeffs.push_back({(-cab + sq) / caa, 1.0});
        if (sq > 0.0)
            coeffs.push_back({(-cab - sq) / caa, 1.0});
    }

    const MVec ax = apply_inverse(t, x);
    const double want = side == Side::Interior ? 1.0 : -1.0;
    std::vector<MVec> out;
    for (const auto& c : coeffs) {
        MVec v = c[0] * b.u + c[1] * b.n;
        const double q = inner(ax, v);
        if (std::abs(q) <= 1e-12 * euclid_norm(ax) * euclid_norm(v))
            continue; // along the boundary
        if (q * want < 0.0)
            v = -v;
        if (causal_class(v) == CausalClass::Zero)
            continue;
        out.push_back(normalize_direction(v));
    }
    return out;
}

LaxMatrix lax_matrix(const TableParams& t, double lambda, const MVec& x, const MVec& y)
{
    LaxMatrix m = LaxMatrix::Zero();
    for (int i = 0; i < 3; ++i) {
        m(i, i) = t.a(i);
        for (int j = 0; j < 3; ++j)
            m(i, j) += lambda * (x[i] * sig(j) * y[j] - y[i] * sig(j) * x[j]);
    }
    return m;
}

std::array<double, 3> char_poly_coeffs(const LaxMatrix& m)
{
    const double tr = m.trace();
    const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)
        + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    return {tr, minors, m.determinant()};
}

double lax_isospectral_check(const TableParams& t, const Trajectory& traj, std::span<const double> lambdas)
{
    const std::size_t n = traj.states.size();
    if (n < 3)
        return 0.0;

    // x_{k-1} ^ x_k is a positive multiple of x_{k-1} ^ v_{k-1}, and the latter
    // stays well conditioned for the very short chords near singular points.
    // Each chord is stored as a pair (x, y) with x ^ y of the common norm.
    std::vector<std::pair<MVec, MVec>> chords;
    chords.reserve(n - 1);
    double target = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const MVec& x = traj.states[k].point;
        const MVec& v = traj.states[k].dir;
        const double w = wedge_norm2(x, v);
        if (std::abs(w) <= kCausalEps * euclid_dot(x, x) * euclid_dot(v, v))
            throw Error(ErrorCode::DegenerateChord, "light-like chord has |x ^ y|^2 = 0");
        if (k == 0)
            target = w;
        const double ratio = target / w;
        if (ratio <= 0.0)
            throw Error(ErrorCode::DegenerateChord, "chords of different causal class");
        chords.emplace_back(x, std::sqrt(ratio) * v);
    }

    double drift = 0.0;
    for (double lambda : lambdas) {
        const auto ref = char_poly_coeffs(lax_matrix(t, lambda, chords[0].first, chords[0].second));
        const double scale = std::max({std::abs(ref[0]), std::abs(ref[1]), std::abs(ref[2])});
        for (std::size_t k = 1; k < chords.size(); ++k) {
            const auto c = char_poly_coeffs(lax_matrix(t, lambda, chords[k].first, chords[k].second));
            for (int j = 0; j < 3; ++j)
                drift = std::max(drift, std::abs(c[j] - ref[j]) / scale);
        }
    }
    return drift;
}

double state_residual(const BilliardState& a, const BilliardState& b)
{
    return std::max(euclid_norm(a.point - b.point), euclid_angle(a.dir, b.dir));
}

Closure detect_closure(const Trajectory& traj, double tol)
{
    Closure c;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const double r = state_residual(traj.states[k], traj.states[0]);
        if (r <= tol) {
            c.period = static_cast<int>(k);
            c.residual = r;
            c.best_k = static_cast<int>(k);
            return c;
        }
        if (r < c.residual) {
            c.residual = r;
            c.best_k = static_cast<int>(k);
        }
    }
    return c;
}

void annotate(Trajectory& traj)
{
    traj.segment_class.clear();
    traj.segment_nu.clear();
    traj.segment_f_ratios.clear();
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
        const MVec& x = traj.states[k].point;
        const MVec& v = traj.states[k].dir;
        traj.segment_class.push_back(causal_class(traj.states[k].dir));
        traj.segment_nu.push_back(caustic_nu(traj.table, x, v));
        traj.segment_f_ratios.push_back(projective_ratios(integrals(traj.table, x, v)));
    }
    if (!traj.segment_nu.empty()) {
        traj.nu = traj.segment_nu.front();
        traj.f_ratios = traj.segment_f_ratios.front();
    }
    traj.closure = detect_closure(traj);
}

Trajectory aa_map(const Trajectory& traj)
{
    if (traj.table.kind != TableKind::Collared)
        throw Error(ErrorCode::UnsupportedTable, "the alternating antipodal map is defined for collared tables");

    Trajectory out;
    out.table = traj.table;
    out.side = traj.side == Side::Interior ? Side::Exterior : Side::Interior;
    out.status = traj.status;
    out.states.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        // y_k -> (-1)^(k+1) y_k. The geodesic from s_p p to s_q q leaves s_p p with velocity s_q v.
        const double s_here = k % 2 == 0 ? -1.0 : 1.0;
        const double s_next = -s_here;
        out.states.push_back({s_here * traj.states[k].point, s_next * traj.states[k].dir});
    }
    annotate(out);
    return out;
}

} // namespace hbill
