#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "hbill/mink.hpp"

namespace hbill {

enum class TableKind { Collared, Transverse };

std::string_view to_string(TableKind k);

/// The diagonal matrix A = diag(a0, a1, a2) of the boundary cone <A^-1 x, x> = 0.
struct TableParams {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    TableKind kind = TableKind::Collared;

    double a(int i) const { return i == 0 ? a0 : (i == 1 ? a1 : a2); }
    std::array<double, 3> as_array() const { return {a0, a1, a2}; }
    double scale() const;
};

/// Validates the ordering 0 < a0 < a1 < a2 (collared) or a1 < 0 < a0 < a2
/// (transverse). Values closer than 1e-9 * max|a_i| count as coincident.
TableParams classify_table(double a0, double a1, double a2);

/// -x0^2/(a0-l) + x1^2/(a1-l) + x2^2/(a2-l). Throws PoleParameter near a_i.
double cone_eval(const TableParams& t, double lambda, const MVec& x);

/// <A^-1 x, x>: the boundary member of the confocal family. Positive inside the table.
double boundary_eval(const TableParams& t, const MVec& x);

/// A^-1 x, componentwise.
MVec apply_inverse(const TableParams& t, const MVec& x);

enum class JacobiCase {
    CollaredGeneric,   // l1 < a0 < a1 < l2 < a2
    TransverseA,       // l1 < l2 < a1
    TransverseB,       // a1 < l1 < l2 < a0
    TransverseC,       // a0 < l1 < l2 < a2
    TransverseD,       // a2 < l1 < l2
    TransverseDouble,  // on a focal ruling
    TransverseNone,    // no real roots
    X0Zero,            // one root equals a0
    X1Zero,            // one root equals a1
    X2Zero,            // one root equals a2
};

std::string_view to_string(JacobiCase c);

/// Generalized Jacobi coordinates of a point of H, sorted ascending.
struct JacobiCoords {
    enum class Kind { TwoRoots, DoubleRoot, NoRealRoots };
    Kind kind = Kind::NoRealRoots;
    double lo = 0.0;
    double hi = 0.0;
    JacobiCase tag = JacobiCase::TransverseNone;
    double discriminant = 0.0;
};

JacobiCoords jacobi_coordinates(const TableParams& t, const MVec& x);

enum class CurveType { EllipticType, HyperbolicType, Degenerate, Empty };

std::string_view to_string(CurveType c);

CurveType curve_type(const TableParams& t, double lambda);

/// The four foci F^axis_{+-,+-} of the degenerate member lambda = a_axis, or
/// nothing when they are not real. Order: (+,+), (+,-), (-,+), (-,-) over the
/// two non-zero coordinates in increasing index order.
std::optional<std::array<MVec, 4>> foci(const TableParams& t, int axis);

enum class Region { A, B, C, D, E, OnLine };

std::string_view to_string(Region r);

/// Region of the (x0, x1) plane for a transverse table, decided from the four
/// focal lines |x0 sqrt(a2-a0) +- x1 sqrt(a2-a1)| = sqrt(a0-a1) alone.
Region region_classify(const TableParams& t, const MVec& x);

struct KleinPoint {
    double xi1 = 0.0;
    double xi2 = 0.0;
};

KleinPoint klein_project(const MVec& x, double eps = 1e-12);

/// Coefficients (b1, b2) of xi1^2/b1 + xi2^2/b2 = 1.
std::array<double, 2> klein_boundary_coeffs(const TableParams& t);

/// Coefficients of the Klein image of the confocal conic C_nu.
std::array<double, 2> projected_caustic_coeffs(const TableParams& t, double nu);

/// Point of the boundary curve. Collared: angle in the (x1, x2) plane and
/// component = sign of x0. Transverse: angle in the (x0, x1) plane, x2 > 0,
/// component ignored.
MVec boundary_point(const TableParams& t, double angle, int component = 1);

} // namespace hbill
