#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hbill/billiard.hpp"
#include "hbill/confocal.hpp"
#include "hbill/mink.hpp"

namespace hbill {

/// Polynomial coefficients in ascending powers of X.
using Poly = std::vector<double>;

enum class SeriesKind { B, D, E };

std::string_view to_string(SeriesKind k);

/// Taylor coefficients of sqrt(num/den) around X = 0 divided by their value at 0,
/// so coeffs[0] == 1 and everything stays real whatever the sign of num(0)/den(0).
struct SeriesCoeffs {
    SeriesKind kind = SeriesKind::B;
    std::vector<double> coeffs;
    int order = 0; // highest index present
};

SeriesCoeffs sqrt_series(const Poly& num, const Poly& den, int order, SeriesKind kind = SeriesKind::B);

/// sqrt((X-a0)(X-a1)(X-a2)(X-nu)).
SeriesCoeffs series_b(const TableParams& t, double nu, int order);
/// sqrt((X-a0)(X-a1)(X-a2)/(X-nu)).
SeriesCoeffs series_d(const TableParams& t, double nu, int order);
/// sqrt((X-a0)(X-a1)(X-a2)).
SeriesCoeffs series_e(const TableParams& t, int order);

/// Period 2m: det [B_{3+i+j}], i,j = 0..m-2.
double hankel_det_even(const TableParams& t, double nu, int m);
/// Period 2m+1: det [D_{2+i+j}], i,j = 0..m-1.
double hankel_det_odd(const TableParams& t, double nu, int m);
/// Light-like period 2m: det [E_{3+i+j}], i,j = 0..m-2.
double hankel_det_light(const TableParams& t, int m);

/// The determinant for period n with the series variable rescaled to X / rho,
/// rho the smallest nonzero |root| of the radicand. Same zero set as the raw
/// determinant; entries are O(1), so its size is a usable residual.
/// No pole checks: nu = a_i is a regular point here, nu = 0 is not.
double cayley_det_normalized(const TableParams& t, double nu, int n);
double hankel_det_light_normalized(const TableParams& t, int m);

enum class SolveMethod { ClosedForm, NumericScan };

std::string_view to_string(SolveMethod m);

struct CayleyRoot {
    double nu = 0.0;
    double residual = 0.0; // |cayley_det_normalized| at nu
};

struct CayleySolution {
    int period = 0;
    std::vector<CayleyRoot> roots;
    SolveMethod method = SolveMethod::NumericScan;
    std::vector<double> degenerate;  // roots at nu = a_i
    std::vector<double> closed_form; // real closed-form roots, empty when none is known
};

/// Real caustic parameters from the explicit small-period formulas (n = 3, 4, 6),
/// sorted. Empty for other n.
std::vector<double> closed_form_caustics(const TableParams& t, int n);

/// Grid scan plus bisection of the period-n determinant over a window around
/// the table parameters. Roots closer together than the grid step can be missed.
CayleySolution find_periodic_caustics(const TableParams& t, int n);

struct VerifyReport {
    double residual = 0.0; // smallest closure residual over k <= 2n bounces
    int period = 0;        // 0 when nothing closed
    int best_k = 0;
    Side side = Side::Interior;
    MVec dir;
    double nu_drift = 0.0; // max |nu_k - nu| / (1 + |nu|) along the run
    Trajectory trajectory;
};

/// Launches every direction at x0 tangent to C_nu (interior, and exterior for
/// space-like chords of collared tables), runs 2n bounces and keeps the best closure.
VerifyReport verify_periodic(const TableParams& t, double nu, int n, const MVec& x0);

/// Third parameter completing (a, b, .) to a collared table whose light-like
/// trajectories close after 4 bounces: ab/(b-a).
double light_period4_a2(double a, double b);
/// Light-like period 6, first family: ab(2 sqrt(b) + sqrt(b-a)) / ((a+3b) sqrt(b-a)).
double light_period6_a2_first(double a, double b);
/// Light-like period 6, second family: ab(2 sqrt(ab) + a + b) / (b-a)^2.
double light_period6_a2_second(double a, double b);

} // namespace hbill
