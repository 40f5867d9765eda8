// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hbill/billiard.hpp"
#include "hbill/cayley.hpp"
#include "hbill/confocal.hpp"
#include "hbill/error.hpp"
#include "hbill/geodesic.hpp"
#include "hbill/io.hpp"
#include "hbill/mink.hpp"

using namespace hbill;

namespace {

const double r2 = std::sqrt(2.0);
const double r3 = std::sqrt(3.0);
const double r13 = std::sqrt(13.0);

TableParams collared() { return classify_table(3, 6, 9); }
TableParams transverse() { return classify_table(3, -3, 6); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Accumulates the worst value seen against a bound.
struct Worst {
    double value = 0.0;
    void see(double v) { value = std::max(value, std::isnan(v) ? INFINITY : v); }
};

std::string fmt(const char* f, double a, double b = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

MVec random_h_point(std::mt19937_64& rng, double x0_max = 3.0)
{
    std::uniform_real_distribution<double> u0(-x0_max, x0_max);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    const double x0 = u0(rng);
    const double r = std::sqrt(1.0 + x0 * x0);
    const double th = ang(rng);
    return {x0, r * std::cos(th), r * std::sin(th)};
}

MVec random_tangent(std::mt19937_64& rng, const MVec& p)
{
    std::uniform_real_distribution<double> u(-2, 2);
    const MVec v{u(rng), u(rng), u(rng)};
    return v - (inner(v, p) / inner(p, p)) * p;
}

MVec random_boundary_point(std::mt19937_64& rng, const TableParams& t)
{
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    std::bernoulli_distribution coin;
    for (;;) {
        const MVec p = boundary_point(t, ang(rng), coin(rng) ? 1 : -1);
        if (t.kind == TableKind::Collared || p.x2 > 0)
            return p;
    }
}

BilliardState random_start(std::mt19937_64& rng, const TableParams& t, CausalClass cls)
{
    std::uniform_real_distribution<double> rap(0.2, 1.5);
    std::bernoulli_distribution coin;
    for (;;) {
        const MVec p = random_boundary_point(rng, t);
        try {
            return {p, make_direction(t, p, cls, rap(rng), Side::Interior, coin(rng) ? 1 : -1)};
        }
        catch (const Error&) {
        }
    }
}

// Every expected value has a numeric root within tol, and nothing else was found.
Outcome match_roots(const char* label, const CayleySolution& s, std::vector<double> want, double tol)
{
    Outcome o;
    std::sort(want.begin(), want.end());
    double worst = 0.0;
    for (double w : want) {
        double best = INFINITY;
        for (const CayleyRoot& r : s.roots)
            best = std::min(best, std::abs(r.nu - w));
        worst = std::max(worst, best);
    }
    if (worst > tol || s.roots.size() != want.size())
        o.pass = false;
    o.detail = std::string(label) + fmt(" max err %.2e, %g roots", worst, double(s.roots.size()));
    return o;
}

Outcome merge(Outcome a, const Outcome& b)
{
    a.pass = a.pass && b.pass;
    a.detail += "; " + b.detail;
    return a;
}

Outcome klein()
{
    const auto c = klein_boundary_coeffs(collared());
    const auto t = klein_boundary_coeffs(transverse());
    Outcome o;
    o.pass = c[0] == 2.0 && c[1] == 3.0 && t[0] == -1.0 && t[1] == 2.0;
    o.detail = fmt("(3,6,9) -> (%g, %g)", c[0], c[1]) + fmt(", (3,-3,6) -> (%g, %g)", t[0], t[1]);
    return o;
}

Trajectory period4()
{
    const MVec p{-1, 0, r2};
    const MVec q{0, 1 / r3, std::sqrt(2.0 / 3.0)};
    return simulate(transverse(), {p, direction_toward(p, q)}, 4);
}

Outcome period4_orbit()
{
    const Trajectory tr = period4();
    const MVec want[] = {{-1, 0, r2}, {0, 1 / r3, std::sqrt(2.0 / 3.0)}, {1, 0, r2}, {0, -1 / r3, std::sqrt(2.0 / 3.0)}};
    double err = INFINITY;
    if (tr.states.size() == 5) {
        err = 0.0;
        for (int k = 0; k < 4; ++k)
            err = std::max(err, euclid_norm(tr.states[k].point - want[k]));
    }
    Outcome o;
    o.pass = tr.closure.period == 4 && tr.closure.residual <= 1e-6 && err <= 1e-9;
    o.detail = fmt("period %g, residual %.2e", tr.closure.period, tr.closure.residual) + fmt(", point err %.2e", err);
    return o;
}

Outcome period4_caustic()
{
    const double a = 3, b = -3, c = 6;
    const double closed = a * b * c / (-a * b + b * c + a * c);
    const Trajectory tr = period4();
    Outcome o;
    o.pass = std::abs(tr.nu + 6) <= 1e-12 * 6 && std::abs(tr.nu - closed) <= 1e-12 * 6;
    o.detail = fmt("nu = %.17g, closed form %.17g", tr.nu, closed);
    return o;
}

Outcome cayley4()
{
    return merge(match_roots("(3,6,9)", find_periodic_caustics(collared(), 4), {18.0 / 7, -18, 18.0 / 5}, 1e-9),
                 match_roots("(3,-3,6)", find_periodic_caustics(transverse(), 4), {-6, -2, 6.0 / 5}, 1e-9));
}

Outcome cayley5()
{
    return merge(match_roots("(3,6,9)", find_periodic_caustics(collared(), 5), {-4.39698, 2.06224, 2.99982, 9.39196}, 1e-4),
                 match_roots("(3,-3,6)", find_periodic_caustics(transverse(), 5),
                             {-2.99945, -1.26894, 0.741316, 2.87981}, 1e-4));
}

Outcome cayley6()
{
    auto with_degenerate = [](const char* label, const TableParams& t, std::vector<double> want) {
        const CayleySolution s = find_periodic_caustics(t, 6);
        Outcome o = match_roots(label, s, std::move(want), 1e-9);
        const bool six = std::any_of(s.degenerate.begin(), s.degenerate.end(),
                                     [](double d) { return std::abs(d - 6) <= 1e-9; });
        o.pass = o.pass && six;
        o.detail += six ? ", 6 degenerate" : ", 6 missing from degenerate list";
        return o;
    };
    return merge(with_degenerate("(3,6,9)", collared(),
                                 {18.0 / 11, (18 + 72 * r3) / 47, (18 - 72 * r3) / 47, (198 + 36 * r13) / 23,
                                  (198 - 36 * r13) / 23}),
                 with_degenerate("(3,-3,6)", transverse(),
                                 {-6.0 / 7, (-30 + 24 * r3) / 23, (-30 - 24 * r3) / 23, (-6 + 12 * r13) / 17,
                                  (-6 - 12 * r13) / 17}));
}

Outcome caustic_invariance()
{
    std::mt19937_64 rng(7001);
    Worst drift;
    int runs = 0, short_runs = 0;
    const CausalClass classes[] = {CausalClass::SpaceLike, CausalClass::TimeLike, CausalClass::LightLike};
    for (int i = 0; i < 100; ++i) {
        const TableParams t = i % 2 ? transverse() : collared();
        const CausalClass cls = classes[(i / 2) % 3];
        const Trajectory tr = simulate(t, random_start(rng, t, cls), 100);
        ++runs;
        if (tr.status != StopStatus::Completed)
            ++short_runs;
        for (double nu : tr.segment_nu) {
            if (std::isinf(tr.nu) || std::isinf(nu))
                drift.see(std::isinf(tr.nu) == std::isinf(nu) ? 0.0 : INFINITY);
            else
                drift.see(std::abs(nu - tr.nu) / (1 + std::abs(tr.nu)));
        }
    }
    Outcome o;
    o.pass = drift.value <= 1e-6;
    o.detail = fmt("%g trajectories, worst drift %.2e", runs, drift.value) + fmt(", %g stopped early", short_runs);
    return o;
}

Outcome integral_identities()
{
    std::mt19937_64 rng(7002);
    std::uniform_real_distribution<double> mu(-20, 20);
    Worst fsum, phi;
    for (int i = 0; i < 10000; ++i) {
        const TableParams t = i % 2 ? transverse() : collared();
        const MVec x = random_h_point(rng), y = random_h_point(rng);
        const Integrals f = integrals(t, x, y);
        const double scale = std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
        fsum.see(scale == 0.0 ? 0.0 : std::abs(f.sum()) / scale);
        const PhiForms p = phi_mu_forms(t, x, y, mu(rng));
        phi.see(std::abs(p.resolvent - p.partial_fractions) /
                std::max({1.0, std::abs(p.resolvent), std::abs(p.partial_fractions)}));
    }
    Outcome o;
    o.pass = fsum.value <= 1e-12 && phi.value <= 1e-10;
    o.detail = fmt("F sum %.2e, phi forms %.2e", fsum.value, phi.value);
    return o;
}

Outcome lax()
{
    const double lambdas[] = {0.1, 1.0, 10.0};
    std::mt19937_64 rng(7003);
    Worst drift;
    for (int i = 0; i < 20; ++i) {
        const TableParams t = i % 2 ? transverse() : collared();
        const CausalClass cls = (i / 2) % 2 ? CausalClass::TimeLike : CausalClass::SpaceLike;
        const Trajectory tr = simulate(t, random_start(rng, t, cls), 50);
        drift.see(lax_isospectral_check(t, tr, lambdas));
    }
    std::uniform_real_distribution<double> u(-10, 10);
    Worst det;
    for (int i = 0; i < 10000; ++i) {
        const TableParams t = i % 2 ? transverse() : collared();
        const MVec x = random_h_point(rng), y = random_h_point(rng);
        const double lam = u(rng), mu = u(rng);
        const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
        const Eigen::Matrix3d a = Eigen::Vector3d(t.a0, t.a1, t.a2).asDiagonal();
        const double lhs = (lax_matrix(t, lam, x, y) - mu * id).determinant();
        const double rhs = (a - mu * id).determinant() * (1 - lam * lam * phi_mu(t, x, y, mu));
        det.see(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    Outcome o;
    o.pass = drift.value <= 1e-7 && det.value <= 1e-9;
    o.detail = fmt("spectral drift %.2e, det identity %.2e", drift.value, det.value);
    return o;
}

// |f(l)|, or the relative Newton step |f/f'| / max(1, |l|) for roots so close to a
// pole that the double nearest the root cannot make f small.
double root_residual(const TableParams& t, double l, const MVec& x)
{
    const double f = cone_eval(t, l, x);
    if (std::abs(f) <= 1e-9)
        return std::abs(f);
    const double d0 = t.a0 - l, d1 = t.a1 - l, d2 = t.a2 - l;
    const double df = -x.x0 * x.x0 / (d0 * d0) + x.x1 * x.x1 / (d1 * d1) + x.x2 * x.x2 / (d2 * d2);
    return std::abs(f / df) / std::max(1.0, std::abs(l));
}

Outcome jacobi()
{
    std::mt19937_64 rng(7004);
    Worst residual;
    int chain_bad = 0, e_bad = 0;
    for (const TableParams& t : {collared(), transverse()}) {
        for (int i = 0; i < 10000; ++i) {
            const MVec x = random_h_point(rng);
            const JacobiCoords jc = jacobi_coordinates(t, x);
            if (jc.kind != JacobiCoords::Kind::NoRealRoots) {
                residual.see(root_residual(t, jc.lo, x));
                residual.see(root_residual(t, jc.hi, x));
            }
            if (t.kind == TableKind::Collared) {
                if (!(jc.kind == JacobiCoords::Kind::TwoRoots && jc.lo < t.a0 && t.a1 < jc.hi && jc.hi < t.a2))
                    ++chain_bad;
                continue;
            }
            const Region r = region_classify(t, x);
            if ((r == Region::E) != (jc.kind == JacobiCoords::Kind::NoRealRoots))
                ++e_bad;
            bool ok = true;
            switch (jc.tag) {
            case JacobiCase::TransverseA: ok = jc.hi < t.a1 && r == Region::A; break;
            case JacobiCase::TransverseB: ok = t.a1 < jc.lo && jc.hi < t.a0 && r == Region::B; break;
            case JacobiCase::TransverseC: ok = t.a0 < jc.lo && jc.hi < t.a2 && r == Region::C; break;
            case JacobiCase::TransverseD: ok = t.a2 < jc.lo && r == Region::D; break;
            case JacobiCase::TransverseNone: ok = r == Region::E; break;
            default: break;
            }
            if (!ok)
                ++chain_bad;
        }
    }
    Outcome o;
    o.pass = residual.value <= 1e-9 && chain_bad == 0 && e_bad == 0;
    o.detail = fmt("cone residual %.2e, chain mismatches %g", residual.value, chain_bad) +
               fmt(", E mismatches %g", e_bad);
    return o;
}

Outcome reflection()
{
    std::mt19937_64 rng(7005);
    Worst invol, norm;
    int degenerate = 0;
    for (int i = 0; i < 10000; ++i) {
        const TableParams t = i % 2 ? transverse() : collared();
        const MVec p = random_boundary_point(rng, t);
        const MVec v = random_tangent(rng, p);
        try {
            const MVec r = reflect(t, p, v);
            norm.see(std::abs(inner(r, r) - inner(v, v)) / euclid_dot(v, v));
            invol.see(euclid_norm(reflect(t, p, r) - v) / euclid_norm(v));
        }
        catch (const Error&) {
            ++degenerate;
        }
    }

    // Collared interior closures among the verified n = 4, 6 orbits.
    const double angles[] = {0.3, 0.9, 1.4, 2.1, 2.6, 3.5, 4.4, 5.3};
    int closures = 0, odd = 0;
    for (int n : {4, 6}) {
        for (const CayleyRoot& root : find_periodic_caustics(collared(), n).roots) {
            for (double ang : angles) {
                for (int comp : {1, -1}) {
                    VerifyReport rep;
                    try {
                        rep = verify_periodic(collared(), root.nu, n, boundary_point(collared(), ang, comp));
                    }
                    catch (const Error&) {
                        continue;
                    }
                    if (rep.side != Side::Interior || rep.period == 0)
                        continue;
                    ++closures;
                    if (rep.period % 2)
                        ++odd;
                }
            }
        }
    }
    Outcome o;
    o.pass = invol.value <= 1e-10 && norm.value <= 1e-10 && closures > 0 && odd == 0;
    o.detail = fmt("involution %.2e, norm %.2e", invol.value, norm.value) +
               fmt(", %g degenerate; %g interior closures", degenerate, closures) + fmt(", %g odd", odd);
    return o;
}

Outcome aa()
{
    const TableParams t = collared();
    double nu = NAN;
    for (const CayleyRoot& r : find_periodic_caustics(t, 5).roots)
        if (std::abs(r.nu + 4.39698) < 1e-4)
            nu = r.nu;
    Outcome o;
    if (std::isnan(nu)) {
        o.pass = false;
        o.detail = "root near -4.39698 not found";
        return o;
    }
    const MVec x = boundary_point(t, 0.3, 1);
    const auto dirs = direction_for_caustic(t, x, nu);
    if (dirs.empty()) {
        o.pass = false;
        o.detail = "no tangent start";
        return o;
    }
    const Trajectory tr = simulate(t, {x, dirs.front()}, 10);
    const Trajectory once = aa_map(tr);
    const Trajectory twice = aa_map(once);
    const bool stable = trajectory_to_json(tr).dump() == trajectory_to_json(twice).dump();
    o.pass = stable && tr.closure.period == 10 && once.side == Side::Exterior && once.closure.period == 5 &&
             once.closure.residual <= 1e-6;
    o.detail = std::string(stable ? "round trip byte-stable" : "round trip differs") +
               fmt("; interior period %g, image period %g", tr.closure.period, once.closure.period) +
               fmt(", image residual %.2e", once.closure.residual);
    return o;
}

Outcome light_like()
{
    const TableParams t = classify_table(3, 6, light_period6_a2_second(3, 6));
    const double det = hankel_det_light_normalized(t, 3);
    const MVec x = boundary_point(t, 0.8, 1);
    const Trajectory tr = simulate(t, {x, make_direction(t, x, CausalClass::LightLike, 0, Side::Interior, 1)}, 6);
    const double res = tr.states.size() == 7 ? state_residual(tr.states[0], tr.states[6]) : INFINITY;
    Outcome o;
    o.pass = std::abs(det) <= 1e-9 && res <= 1e-5;
    o.detail = fmt("a2 = %.12g, normalized det %.2e", t.a2, det) + fmt(", residual at 6 bounces %.2e", res);
    return o;
}

} // namespace

int main()
{
    const std::vector<std::function<Outcome()>> criteria = {
        klein,  period4_orbit, period4_caustic, cayley4,    cayley5, cayley6, caustic_invariance,
        integral_identities, lax, jacobi,          reflection, aa,      light_like,
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        }
        catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%-4s criterion %2zu: %s [%.0f ms]\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str(), ms);
        if (!o.pass)
            ++failed;
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
