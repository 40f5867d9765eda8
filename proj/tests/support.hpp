#pragma once

#include <cmath>
#include <random>

#include "hbill/billiard.hpp"
#include "hbill/confocal.hpp"
#include "hbill/geodesic.hpp"
#include "hbill/mink.hpp"

namespace hbill::testing {

inline TableParams collared() { return classify_table(3, 6, 9); }
inline TableParams transverse() { return classify_table(3, -3, 6); }

inline MVec random_vec(std::mt19937_64& rng, double r = 2.0)
{
    std::uniform_real_distribution<double> u(-r, r);
    return {u(rng), u(rng), u(rng)};
}

// Point of H: x0 uniform, rest on the circle of radius sqrt(1 + x0^2).
inline MVec random_h_point(std::mt19937_64& rng, double x0_max = 3.0)
{
    std::uniform_real_distribution<double> u0(-x0_max, x0_max);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    const double x0 = u0(rng);
    const double r = std::sqrt(1.0 + x0 * x0);
    const double th = ang(rng);
    return {x0, r * std::cos(th), r * std::sin(th)};
}

inline MVec random_tangent(std::mt19937_64& rng, const MVec& p)
{
    const MVec v = random_vec(rng);
    return v - (inner(v, p) / inner(p, p)) * p;
}

inline MVec random_boundary_point(std::mt19937_64& rng, const TableParams& t)
{
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    std::bernoulli_distribution coin;
    return boundary_point(t, ang(rng), coin(rng) ? 1 : -1);
}

inline double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

} // namespace hbill::testing
