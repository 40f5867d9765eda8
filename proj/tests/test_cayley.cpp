#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hbill/cayley.hpp"
#include "hbill/error.hpp"
#include "support.hpp"

using namespace hbill;
using namespace hbill::testing;

namespace {

const double r3 = std::sqrt(3.0);
const double r13 = std::sqrt(13.0);

bool has_root(const std::vector<CayleyRoot>& roots, double want, double tol)
{
    for (const CayleyRoot& r : roots)
        if (std::abs(r.nu - want) <= tol * std::max(1.0, std::abs(want)))
            return true;
    return false;
}

} // namespace

TEST_CASE("square-root series")
{
    const SeriesCoeffs sq = sqrt_series({1, -2, 1}, {1}, 6);
    CHECK(sq.coeffs.size() == 7);
    CHECK(sq.coeffs[0] == 1.0);
    CHECK(sq.coeffs[1] == -1.0);
    for (int k = 2; k <= 6; ++k)
        CHECK(sq.coeffs[k] == 0.0);

    const SeriesCoeffs b = sqrt_series({1, -1}, {1}, 4);
    CHECK(b.coeffs[1] == -0.5);
    CHECK(b.coeffs[2] == -0.125);
    CHECK(b.coeffs[3] == -0.0625);
    CHECK(b.coeffs[4] == doctest::Approx(-5.0 / 128));

    // Negative value at the origin still gives real coefficients.
    const SeriesCoeffs n = sqrt_series({-4, 1, 3}, {2, -1}, 10);
    CHECK(n.coeffs[0] == 1.0);

    try {
        sqrt_series({0, 1}, {1}, 3);
        FAIL("zero constant term");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroConstantTerm);
    }
}

TEST_CASE("squaring the series reproduces the normalized radicand")
{
    const Poly num{-6.0, 1.5, 2.0, -0.5, 1.0};
    const Poly den{2.5, -1.0};
    const int order = 12;
    const SeriesCoeffs s = sqrt_series(num, den, order);
    // g = num / den / (num0 / den0); check (s^2) * den == num * den0 / num0 term by term.
    std::vector<double> sq(order + 1, 0.0);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; i + j <= order; ++j)
            sq[i + j] += s.coeffs[i] * s.coeffs[j];
    const double norm = den[0] / num[0];
    for (int k = 0; k <= order; ++k) {
        double lhs = 0;
        for (int i = 0; i <= k && i < static_cast<int>(den.size()); ++i)
            lhs += den[i] * sq[k - i];
        const double rhs = k < static_cast<int>(num.size()) ? num[k] * norm : 0.0;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(sq[k])));
    }
}

TEST_CASE("hankel determinants in low size")
{
    const TableParams t = collared();
    const SeriesCoeffs b = series_b(t, -2.0, 5);
    CHECK(hankel_det_even(t, -2.0, 2) == doctest::Approx(b.coeffs[3]));
    CHECK(hankel_det_even(t, -2.0, 3) == doctest::Approx(b.coeffs[3] * b.coeffs[5] - b.coeffs[4] * b.coeffs[4]));
    const SeriesCoeffs d = series_d(t, -2.0, 4);
    CHECK(hankel_det_odd(t, -2.0, 1) == doctest::Approx(d.coeffs[2]));
    CHECK(hankel_det_odd(t, -2.0, 2) == doctest::Approx(d.coeffs[2] * d.coeffs[4] - d.coeffs[3] * d.coeffs[3]));

    CHECK(std::abs(hankel_det_even(t, 18.0 / 7, 2)) < 1e-12);
    CHECK(std::abs(hankel_det_even(t, -18.0, 2)) < 1e-12);
    CHECK(std::abs(hankel_det_even(t, 3.6, 2)) < 1e-12);
    CHECK(std::abs(hankel_det_even(t, 18.0 / 11, 3)) < 1e-12);
    for (double nu : {-6.0, -2.0, 1.2})
        CHECK(std::abs(hankel_det_even(transverse(), nu, 2)) < 1e-12);

    for (double bad : {0.0, 3.0, 6.0, 9.0}) {
        try {
            hankel_det_even(t, bad, 2);
            FAIL("pole parameter accepted");
        }
        catch (const Error& e) {
            CHECK(e.code() == ErrorCode::PoleParameter);
        }
    }
}

TEST_CASE("the printed period-3 formula")
{
    // Roots of 3p^2 - 2pq nu + (4pr - q^2) nu^2 with p = abc, q = ab+ac+bc, r = a+b+c.
    for (const TableParams& t : {collared(), transverse()}) {
        const auto cf = closed_form_caustics(t, 3);
        REQUIRE(cf.size() == 2);
        for (double nu : cf)
            CHECK(std::abs(hankel_det_odd(t, nu, 1)) < 1e-12);
    }
}

TEST_CASE("root sets do not depend on the series normalization")
{
    const TableParams t = collared();
    for (double nu : {-4.0, 2.0, 5.0, 12.0}) {
        const SeriesCoeffs b = series_b(t, nu, 5);
        for (double c : {-3.0, 0.25, 10.0}) {
            std::vector<double> s = b.coeffs;
            for (double& v : s)
                v *= c;
            const double scaled = s[3] * s[5] - s[4] * s[4];
            CHECK(scaled == doctest::Approx(c * c * hankel_det_even(t, nu, 3)).epsilon(1e-12));
        }
    }
    // Rescaled variable X -> X / rho only multiplies by a positive constant.
    for (double nu : {-4.0, 2.0, 5.0, 12.0})
        CHECK((cayley_det_normalized(t, nu, 6) > 0) == (hankel_det_even(t, nu, 3) > 0));
}

TEST_CASE("numeric roots match the closed forms")
{
    for (const TableParams& t : {collared(), transverse()}) {
        for (int n : {3, 4, 6}) {
            const CayleySolution sol = find_periodic_caustics(t, n);
            const auto cf = closed_form_caustics(t, n);
            CHECK(sol.method == SolveMethod::NumericScan);
            CHECK(sol.closed_form == cf);
            for (const CayleyRoot& r : sol.roots) {
                bool matched = false;
                for (double c : cf)
                    matched = matched || std::abs(r.nu - c) <= 1e-9 * std::max(1.0, std::abs(c));
                CHECK(matched);
                CHECK(r.residual <= 1e-8);
            }
            for (double c : cf) {
                bool degenerate = false;
                for (int i = 0; i < 3; ++i)
                    degenerate = degenerate || std::abs(c - t.a(i)) < 1e-9;
                if (!degenerate)
                    CHECK(has_root(sol.roots, c, 1e-9));
            }
        }
    }
}

TEST_CASE("period-6 roots and the degenerate list")
{
    const CayleySolution c = find_periodic_caustics(collared(), 6);
    for (double nu : {18.0 / 11, (18 + 72 * r3) / 47, (18 - 72 * r3) / 47, (198 + 36 * r13) / 23,
                      (198 - 36 * r13) / 23})
        CHECK(has_root(c.roots, nu, 1e-9));
    CHECK(c.degenerate == std::vector<double>{6.0});

    const CayleySolution t = find_periodic_caustics(transverse(), 6);
    for (double nu : {-6.0 / 7, (-30 + 24 * r3) / 23, (-30 - 24 * r3) / 23, (-6 + 12 * r13) / 17,
                      (-6 - 12 * r13) / 17})
        CHECK(has_root(t.roots, nu, 1e-9));
    CHECK(t.degenerate == std::vector<double>{6.0});
}

TEST_CASE("period-5 roots")
{
    const CayleySolution c = find_periodic_caustics(collared(), 5);
    REQUIRE(c.roots.size() == 4);
    const double want[] = {-4.39698, 2.06224, 2.99982, 9.39196};
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(c.roots[i].nu - want[i]) <= 1e-4);
    CHECK(c.closed_form.empty());
}

TEST_CASE("verification by simulation")
{
    const VerifyReport p4 = verify_periodic(transverse(), -6, 4, {-1, 0, std::sqrt(2.0)});
    CHECK(p4.period == 4);
    CHECK(p4.residual <= 1e-6);

    const double nu6 = (18 - 72 * r3) / 47;
    const VerifyReport p6 = verify_periodic(collared(), nu6, 6, boundary_point(collared(), 1.0, 1));
    CHECK(p6.period == 6);
    CHECK(p6.residual <= 1e-6);
    for (double v : p6.trajectory.segment_nu)
        CHECK(std::abs(v - nu6) <= 1e-6);

    const double nu5 = find_periodic_caustics(collared(), 5).roots[0].nu;
    const VerifyReport p5 = verify_periodic(collared(), nu5, 5, boundary_point(collared(), 0.3, 1));
    CHECK(((p5.period == 5 && p5.side == Side::Exterior) || (p5.period == 10 && p5.side == Side::Interior)));
    CHECK(p5.residual <= 1e-6);

    try {
        verify_periodic(collared(), 4.5, 4, boundary_point(collared(), 0.3, 1));
        FAIL("no tangent direction expected");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoTangentDirection);
    }
}

TEST_CASE("collared interior closures are even")
{
    for (int n : {4, 6}) {
        for (const CayleyRoot& r : find_periodic_caustics(collared(), n).roots) {
            for (double ang : {0.2, 1.3, 2.4}) {
                const MVec x = boundary_point(collared(), ang, 1);
                for (const MVec& d : direction_for_caustic(collared(), x, r.nu, Side::Interior)) {
                    const Trajectory tr = simulate(collared(), {x, d}, 2 * n);
                    if (tr.closure.period > 0)
                        CHECK(tr.closure.period % 2 == 0);
                }
            }
        }
    }
}

TEST_CASE("light-like Cayley conditions")
{
    const double a = 3, b = 6;
    const TableParams second = classify_table(a, b, light_period6_a2_second(a, b));
    CHECK(std::abs(hankel_det_light_normalized(second, 3)) <= 1e-9);

    const TableParams first = classify_table(a, 3.5, light_period6_a2_first(a, 3.5));
    CHECK(std::abs(hankel_det_light_normalized(first, 3)) <= 1e-9);

    const TableParams four = classify_table(a, 5, light_period4_a2(a, 5));
    CHECK(std::abs(hankel_det_light_normalized(four, 2)) <= 1e-12);
    CHECK(std::abs(hankel_det_light_normalized(collared(), 3)) > 1e-6);

    // Light-like orbits of the period-6 table close after six bounces.
    const MVec x = boundary_point(second, 0.8, 1);
    for (int branch : {1, -1}) {
        const MVec d = make_direction(second, x, CausalClass::LightLike, 0, Side::Interior, branch);
        const Trajectory tr = simulate(second, {x, d}, 12);
        CHECK(tr.closure.period == 6);
        CHECK(tr.closure.residual <= 1e-5);
    }
    const MVec x4 = boundary_point(four, 0.8, 1);
    const Trajectory tr4 =
        simulate(four, {x4, make_direction(four, x4, CausalClass::LightLike, 0, Side::Interior, 1)}, 8);
    CHECK(tr4.closure.period == 4);
}
