#pragma once

#include <array>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "hbill/confocal.hpp"
#include "hbill/geodesic.hpp"
#include "hbill/mink.hpp"

namespace hbill {

/// A bounce point on the boundary with the outgoing velocity.
struct BilliardState {
    MVec point;
    MVec dir;
};

enum class StopStatus { Completed, NoHit, DegenerateReflection, DegenerateTangency };

std::string_view to_string(StopStatus s);
StopStatus stop_status_from_string(std::string_view s);

/// Closure against the initial state. period == 0 means no state matched
/// within tolerance; residual/best_k then describe the closest approach.
struct Closure {
    int period = 0;
    double residual = std::numeric_limits<double>::infinity();
    int best_k = 0;
};

inline constexpr double kClosureTol = 1e-6;

struct Trajectory {
    TableParams table;
    Side side = Side::Interior;
    std::vector<BilliardState> states;
    std::vector<CausalClass> segment_class;
    std::vector<double> segment_nu;
    std::vector<std::array<double, 3>> segment_f_ratios;
    double nu = std::numeric_limits<double>::quiet_NaN(); // +inf for light-like chords
    std::array<double, 3> f_ratios{};
    StopStatus status = StopStatus::Completed;
    Closure closure;

    std::size_t bounces() const { return states.empty() ? 0 : states.size() - 1; }
};

struct Integrals {
    std::array<double, 3> F{};

    double operator[](int j) const { return F[j]; }
    double sum() const { return F[0] + F[1] + F[2]; }
};

using LaxMatrix = Eigen::Matrix3d;

/// Billiard reflection v -> v - 2 <v,n>/<n,n> n at a boundary point.
MVec reflect(const TableParams& t, const MVec& p, const MVec& v_in);

/// Alternates chord hits and reflections. Stops early on NoHit or a degenerate
/// reflection, recording the reason in Trajectory::status.
Trajectory simulate(const TableParams& t, const BilliardState& s0, int n_bounces, Side side = Side::Interior);

Integrals integrals(const TableParams& t, const MVec& x, const MVec& y);

/// F scaled to unit Euclidean norm, sign fixed so the largest-magnitude entry is positive.
std::array<double, 3> projective_ratios(const Integrals& f);

struct PhiForms {
    double resolvent = 0.0;
    double partial_fractions = 0.0;
};

double phi_mu(const TableParams& t, const MVec& x, const MVec& y, double mu);
PhiForms phi_mu_forms(const TableParams& t, const MVec& x, const MVec& y, double mu);

/// Confocal parameter of the conic tangent to the geodesic through x and y;
/// +infinity for light-like chords.
double caustic_nu(const TableParams& t, const MVec& x, const MVec& y);

/// Unit tangent directions at the boundary point x whose geodesics are tangent
/// to C_nu, oriented into the given side. nu may be +infinity (light-like).
std::vector<MVec> direction_for_caustic(const TableParams& t, const MVec& x, double nu,
                                        Side side = Side::Interior);

/// Orthonormal Lorentz frame of T_p H at a boundary point.
struct BoundaryFrame {
    MVec space;
    MVec time;
};

BoundaryFrame boundary_frame(const TableParams& t, const MVec& p);

/// Unit direction of the given causal class at a boundary point, rotated by the
/// boost parameter `rapidity` inside the frame and pointed into `side`.
/// For light-like directions `branch` (+1/-1) selects the generatrix family.
MVec make_direction(const TableParams& t, const MVec& p, CausalClass cls, double rapidity,
                    Side side = Side::Interior, int branch = 1);

/// L(lambda) = A + lambda (x (x) y* - y (x) x*).
LaxMatrix lax_matrix(const TableParams& t, double lambda, const MVec& x, const MVec& y);

/// (trace, sum of principal 2x2 minors, determinant) of a 3x3 matrix.
std::array<double, 3> char_poly_coeffs(const LaxMatrix& m);

/// Largest relative change of the characteristic polynomial of
/// L_k = A + lambda x~_{k-1} ^ x~_k along the trajectory, after rescaling the
/// points to constant |x~_k ^ x~_{k+1}|^2.
double lax_isospectral_check(const TableParams& t, const Trajectory& traj, std::span<const double> lambdas);

double state_residual(const BilliardState& a, const BilliardState& b);
Closure detect_closure(const Trajectory& traj, double tol = kClosureTol);

/// Alternating antipodal map: every second bounce point goes to its antipode.
/// Collared tables only. An involution on (points, directions).
Trajectory aa_map(const Trajectory& traj);

/// Fills the per-segment class, caustic and integral columns plus the closure report.
void annotate(Trajectory& traj);

} // namespace hbill
