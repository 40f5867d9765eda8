#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace hbill {

/// A vector of 3D Minkowski space. Index 0 is the time-like axis.
struct MVec {
    double x0 = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;

    double operator[](int i) const { return i == 0 ? x0 : (i == 1 ? x1 : x2); }
    double& operator[](int i) { return i == 0 ? x0 : (i == 1 ? x1 : x2); }

    bool is_finite() const { return std::isfinite(x0) && std::isfinite(x1) && std::isfinite(x2); }
    std::array<double, 3> to_array() const { return {x0, x1, x2}; }

    friend MVec operator+(const MVec& a, const MVec& b) { return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2}; }
    friend MVec operator-(const MVec& a, const MVec& b) { return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2}; }
    friend MVec operator-(const MVec& a) { return {-a.x0, -a.x1, -a.x2}; }
    friend MVec operator*(double s, const MVec& a) { return {s * a.x0, s * a.x1, s * a.x2}; }
    friend MVec operator*(const MVec& a, double s) { return s * a; }
    friend MVec operator/(const MVec& a, double s) { return {a.x0 / s, a.x1 / s, a.x2 / s}; }
    friend bool operator==(const MVec&, const MVec&) = default;
};

enum class CausalClass { SpaceLike, LightLike, TimeLike, Zero };

std::string_view to_string(CausalClass c);
CausalClass causal_class_from_string(std::string_view s);

/// Components w_ij = x_i y_j - x_j y_i of the bivector x ^ y.
struct Bivector {
    double w01 = 0.0;
    double w02 = 0.0;
    double w12 = 0.0;
};

/// Relative tolerance on <v,v>/|v|^2 below which a vector counts as light-like.
inline constexpr double kCausalEps = 1e-10;

double inner(const MVec& x, const MVec& y);
CausalClass causal_class(const MVec& v, double eps = kCausalEps);
Bivector wedge(const MVec& x, const MVec& y);

/// |x ^ y|^2 = <x,y>^2 - <x,x><y,y>.
double wedge_norm2(const MVec& x, const MVec& y);

/// Same quantity from bivector components: -w12^2 + w02^2 + w01^2.
double wedge_norm2(const Bivector& w);

bool on_hyperboloid(const MVec& x, double tol);

/// x / sqrt(<x,x>); throws NonPositiveNorm when <x,x> <= eps.
MVec renormalize_to_h(const MVec& x, double eps = 1e-14);

double euclid_norm(const MVec& v);
double euclid_dot(const MVec& a, const MVec& b);

/// Euclidean cross product with the time component sign-flipped, i.e. the
/// Minkowski-orthogonal complement of span{a, b}.
MVec minkowski_cross(const MVec& a, const MVec& b);

} // namespace hbill
