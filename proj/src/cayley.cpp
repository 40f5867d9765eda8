#include "hbill/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "hbill/error.hpp"

namespace hbill {

namespace {

Poly poly_mul(const Poly& p, const Poly& q)
{
    Poly out(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            out[i + j] += p[i] * q[j];
    return out;
}

Poly monic_roots(std::initializer_list<double> roots)
{
    Poly p{1.0};
    for (double r : roots)
        p = poly_mul(p, Poly{-r, 1.0});
    return p;
}

double coeff(const Poly& p, std::size_t k)
{
    return k < p.size() ? p[k] : 0.0;
}

double smallest_nonzero_abs(std::initializer_list<double> xs)
{
    double best = std::numeric_limits<double>::infinity();
    for (double x : xs)
        if (x != 0.0)
            best = std::min(best, std::abs(x));
    return std::isfinite(best) ? best : 1.0;
}

// det [c_{first+i+j}] for i, j < size, with c_k scaled by rho^k.
double hankel_det(const std::vector<double>& c, int first, int size, double rho)
{
    if (size <= 0)
        return 1.0;
    Eigen::MatrixXd m(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
            const int k = first + i + j;
            m(i, j) = c[k] * std::pow(rho, k);
        }
    if (size == 1)
        return m(0, 0);
    return m.partialPivLu().determinant();
}

void check_nu(const TableParams& t, double nu)
{
    const double tol = 1e-12 * std::max(1.0, t.scale());
    if (std::abs(nu) <= tol)
        throw Error(ErrorCode::PoleParameter, "nu = 0");
    for (int i = 0; i < 3; ++i)
        if (std::abs(nu - t.a(i)) <= tol)
            throw Error(ErrorCode::PoleParameter, "nu coincides with a" + std::to_string(i));
}

double even_det(const TableParams& t, double nu, int m, double rho)
{
    return hankel_det(series_b(t, nu, 2 * m - 1).coeffs, 3, m - 1, rho);
}

double odd_det(const TableParams& t, double nu, int m, double rho)
{
    return hankel_det(series_d(t, nu, 2 * m).coeffs, 2, m, rho);
}

} // namespace

std::string_view to_string(SeriesKind k)
{
    switch (k) {
    case SeriesKind::B: return "B";
    case SeriesKind::D: return "D";
    case SeriesKind::E: return "E";
    }
    return "?";
}

std::string_view to_string(SolveMethod m)
{
    return m == SolveMethod::ClosedForm ? "closed-form" : "numeric-scan";
}

SeriesCoeffs sqrt_series(const Poly& num, const Poly& den, int order, SeriesKind kind)
{
    if (order < 0)
        throw Error(ErrorCode::InvalidArgument, "negative series order");
    if (num.empty() || den.empty() || num[0] == 0.0 || den[0] == 0.0)
        throw Error(ErrorCode::ZeroConstantTerm, "radicand vanishes at X = 0");

    const auto n = static_cast<std::size_t>(order) + 1;
    // f = num / den, then g = f / f(0) so that g(0) = 1.
    std::vector<double> f(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double s = coeff(num, k);
        for (std::size_t i = 1; i <= k; ++i)
            s -= coeff(den, i) * f[k - i];
        f[k] = s / den[0];
    }
    const double f0 = f[0];
    for (double& v : f)
        v /= f0;

    // y^2 = g term by term.
    SeriesCoeffs out;
    out.kind = kind;
    out.order = order;
    out.coeffs.assign(n, 0.0);
    out.coeffs[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        double s = f[k];
        for (std::size_t i = 1; i < k; ++i)
            s -= out.coeffs[i] * out.coeffs[k - i];
        out.coeffs[k] = 0.5 * s;
    }
    return out;
}

SeriesCoeffs series_b(const TableParams& t, double nu, int order)
{
    return sqrt_series(monic_roots({t.a0, t.a1, t.a2, nu}), Poly{1.0}, order, SeriesKind::B);
}

SeriesCoeffs series_d(const TableParams& t, double nu, int order)
{
    return sqrt_series(monic_roots({t.a0, t.a1, t.a2}), Poly{-nu, 1.0}, order, SeriesKind::D);
}

SeriesCoeffs series_e(const TableParams& t, int order)
{
    return sqrt_series(monic_roots({t.a0, t.a1, t.a2}), Poly{1.0}, order, SeriesKind::E);
}

double hankel_det_even(const TableParams& t, double nu, int m)
{
    if (m < 2)
        throw Error(ErrorCode::InvalidArgument, "even Cayley condition needs m >= 2");
    check_nu(t, nu);
    return even_det(t, nu, m, 1.0);
}

double hankel_det_odd(const TableParams& t, double nu, int m)
{
    if (m < 1)
        throw Error(ErrorCode::InvalidArgument, "odd Cayley condition needs m >= 1");
    check_nu(t, nu);
    return odd_det(t, nu, m, 1.0);
}

double hankel_det_light(const TableParams& t, int m)
{
    if (m < 2)
        throw Error(ErrorCode::InvalidArgument, "light-like Cayley condition needs m >= 2");
    return hankel_det(series_e(t, 2 * m - 1).coeffs, 3, m - 1, 1.0);
}

double hankel_det_light_normalized(const TableParams& t, int m)
{
    if (m < 2)
        throw Error(ErrorCode::InvalidArgument, "light-like Cayley condition needs m >= 2");
    const double rho = smallest_nonzero_abs({t.a0, t.a1, t.a2});
    return hankel_det(series_e(t, 2 * m - 1).coeffs, 3, m - 1, rho);
}

double cayley_det_normalized(const TableParams& t, double nu, int n)
{
    if (n < 3)
        throw Error(ErrorCode::InvalidArgument, "period must be at least 3");
    const double rho = smallest_nonzero_abs({t.a0, t.a1, t.a2, nu});
    return n % 2 == 0 ? even_det(t, nu, n / 2, rho) : odd_det(t, nu, (n - 1) / 2, rho);
}

std::vector<double> closed_form_caustics(const TableParams& t, int n)
{
    const double a = t.a0;
    const double b = t.a1;
    const double c = t.a2;
    const double abc = a * b * c;
    std::vector<double> out;
    auto push = [&](double v) {
        if (std::isfinite(v))
            out.push_back(v);
    };
    // abc / (base +- 2 sqrt(rad))
    auto pair = [&](double base, double rad) {
        if (rad < 0.0)
            return;
        const double s = 2.0 * std::sqrt(rad);
        push(abc / (base + s));
        if (s > 0.0)
            push(abc / (base - s));
    };
    auto period3 = [&] {
        const double q = a * b + a * c + b * c;
        const double r = a + b + c;
        const double rad = q * q - 3.0 * abc * r;
        const double den = 4.0 * abc * r - q * q;
        if (rad < 0.0 || den == 0.0)
            return;
        const double s = 2.0 * std::sqrt(rad);
        push(abc * (q + s) / den);
        if (s > 0.0)
            push(abc * (q - s) / den);
    };

    switch (n) {
    case 3: period3(); break;
    case 4:
        push(abc / (-a * b + b * c + a * c));
        push(abc / (a * b - b * c + a * c));
        push(abc / (a * b + b * c - a * c));
        break;
    case 6:
        pair(-a * b + a * c + b * c, a * b * (c - a) * (c - b));
        period3();
        pair(a * b + a * c - b * c, b * c * (a - b) * (a - c));
        pair(a * b - a * c + b * c, a * c * (a - b) * (c - b));
        break;
    default: break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

CayleySolution find_periodic_caustics(const TableParams& t, int n)
{
    if (n < 3)
        throw Error(ErrorCode::InvalidArgument, "period must be at least 3");

    CayleySolution sol;
    sol.period = n;
    sol.method = SolveMethod::NumericScan;
    sol.closed_form = closed_form_caustics(t, n);

    const double lo_a = std::min({0.0, t.a0, t.a1, t.a2});
    const double hi_a = std::max({0.0, t.a0, t.a1, t.a2});
    const double span = hi_a - lo_a;
    const double lo = lo_a - 3.0 * span;
    const double hi = hi_a + 3.0 * span;
    const double step = span * 1e-3;
    const double zero_gap = 1e-9 * span;

    auto f = [&](double nu) { return cayley_det_normalized(t, nu, n); };

    std::vector<double> found;
    auto bisect = [&](double x0, double f0, double x1) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (x0 + x1);
            if (std::abs(x1 - x0) <= 1e-12 * std::max(1.0, std::abs(mid)))
                break;
            const double fm = f(mid);
            if (fm == 0.0)
                return mid;
            if ((fm < 0.0) == (f0 < 0.0)) {
                x0 = mid;
                f0 = fm;
            }
            else {
                x1 = mid;
            }
        }
        return 0.5 * (x0 + x1);
    };

    // The determinant has a pole at nu = 0, so the two half-lines are scanned apart.
    for (auto [a, b] : {std::pair{lo, -zero_gap}, std::pair{zero_gap, hi}}) {
        const int steps = static_cast<int>(std::ceil((b - a) / step));
        double x_prev = a;
        double f_prev = f(a);
        if (f_prev == 0.0)
            found.push_back(a);
        for (int i = 1; i <= steps; ++i) {
            const double x = i == steps ? b : a + i * step;
            const double fx = f(x);
            if (fx == 0.0)
                found.push_back(x);
            else if (f_prev != 0.0 && (fx < 0.0) != (f_prev < 0.0))
                found.push_back(bisect(x_prev, f_prev, x));
            x_prev = x;
            f_prev = fx;
        }
    }

    std::sort(found.begin(), found.end());
    for (double nu : found) {
        const double res = std::abs(f(nu));
        if (!(res <= 1e-8))
            continue; // sign change across a pole
        if (std::abs(nu) <= 1e-6 * span)
            continue;
        const double tol = 1e-9 * std::max(1.0, std::abs(nu));
        if (!sol.roots.empty() && std::abs(sol.roots.back().nu - nu) <= tol)
            continue;
        if (!sol.degenerate.empty() && std::abs(sol.degenerate.back() - nu) <= 1e-7 * std::max(1.0, std::abs(nu)))
            continue;
        bool degenerate = false;
        for (int i = 0; i < 3; ++i)
            if (std::abs(nu - t.a(i)) <= 1e-7 * std::max(1.0, std::abs(t.a(i)))) {
                sol.degenerate.push_back(t.a(i));
                degenerate = true;
            }
        if (!degenerate)
            sol.roots.push_back({nu, res});
    }
    return sol;
}

VerifyReport verify_periodic(const TableParams& t, double nu, int n, const MVec& x0)
{
    std::vector<std::pair<Side, MVec>> starts;
    for (Side side : {Side::Interior, Side::Exterior}) {
        if (side == Side::Exterior && t.kind != TableKind::Collared)
            continue;
        for (const MVec& d : direction_for_caustic(t, x0, nu, side)) {
            if (side == Side::Exterior && causal_class(d) != CausalClass::SpaceLike)
                continue;
            starts.emplace_back(side, d);
        }
    }
    if (starts.empty())
        throw Error(ErrorCode::NoTangentDirection, "no direction at the start point is tangent to the caustic");

    std::optional<VerifyReport> best;
    auto better = [](const VerifyReport& a, const VerifyReport& b) {
        if ((a.period > 0) != (b.period > 0))
            return a.period > 0;
        if (a.period > 0 && a.period != b.period)
            return a.period < b.period;
        return a.residual < b.residual;
    };
    for (const auto& [side, dir] : starts) {
        Trajectory traj;
        try {
            traj = simulate(t, {x0, dir}, 2 * n, side);
        }
        catch (const Error&) {
            continue;
        }
        VerifyReport r;
        r.side = side;
        r.dir = dir;
        r.period = traj.closure.period;
        r.best_k = traj.closure.best_k;
        r.residual = traj.closure.residual;
        for (double v : traj.segment_nu) {
            const double d = std::isinf(nu) ? (std::isinf(v) ? 0.0 : std::numeric_limits<double>::infinity())
                                            : std::abs(v - nu) / (1.0 + std::abs(nu));
            r.nu_drift = std::max(r.nu_drift, d);
        }
        r.trajectory = std::move(traj);
        if (!best || better(r, *best))
            best = std::move(r);
    }
    if (!best)
        throw Error(ErrorCode::NoTangentDirection, "every launch direction failed");
    return *best;
}

double light_period4_a2(double a, double b)
{
    return a * b / (b - a);
}

double light_period6_a2_first(double a, double b)
{
    return a * b * (2.0 * std::sqrt(b) + std::sqrt(b - a)) / ((a + 3.0 * b) * std::sqrt(b - a));
}

double light_period6_a2_second(double a, double b)
{
    return a * b * (2.0 * std::sqrt(a * b) + a + b) / ((b - a) * (b - a));
}

} // namespace hbill
