#pragma once

#include <optional>
#include <string_view>

#include "hbill/confocal.hpp"
#include "hbill/mink.hpp"

namespace hbill {

enum class Connectivity { UniqueTimeLike, UniqueLightLike, UniqueSpaceLike, NotConnectable, Antipodal };

std::string_view to_string(Connectivity c);

/// How two distinct points of H are joined by geodesics, decided by <p,q>.
Connectivity connectivity(const MVec& p, const MVec& q, double eps = 1e-10);

/// Point at parameter t on the geodesic through x with initial velocity v.
/// v must be tangent at x and unit (<v,v> = +-1) unless light-like.
MVec flow(const MVec& x, const MVec& v, double t);

/// d/dt of flow(x, v, t).
MVec flow_velocity(const MVec& x, const MVec& v, double t);

/// Which side of the boundary a chord travels through. Exterior chords are only
/// meaningful on collared tables, where they stay near one component curve.
enum class Side { Interior, Exterior };

std::string_view to_string(Side s);
Side side_from_string(std::string_view s);

struct ChordHit {
    double t_hit = 0.0;
    MVec point;
    MVec velocity; // incoming velocity at the hit point
    CausalClass geodesic_class = CausalClass::Zero;
};

/// First return of the geodesic (x, v) to the boundary cone. Closed form from
/// a boundary start; from an interior point the full quadratic is solved.
/// Returns nothing when the geodesic never comes back.
std::optional<ChordHit> next_boundary_hit(const TableParams& t, const MVec& x, const MVec& v,
                                          Side side = Side::Interior);

/// Unit tangent u of the boundary curve and unit normal n (oriented along the
/// gradient of <A^-1 x, x>, i.e. into the table), both in T_p H.
struct TangentBasis {
    MVec u;
    MVec n;
};

TangentBasis tangent_basis(const TableParams& t, const MVec& p);

/// Scales v to unit Minkowski length, or to max |component| = 1 when light-like.
MVec normalize_direction(const MVec& v);

/// Initial velocity at p of the geodesic arc reaching q, normalized as above.
MVec direction_toward(const MVec& p, const MVec& q);

} // namespace hbill
