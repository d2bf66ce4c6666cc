#include <doctest.h>

#include <cmath>

#include "contattn/densities.hpp"
#include "contattn/errors.hpp"
#include "contattn/specfun.hpp"
#include "contattn/oracle.hpp"
#include "contattn/rng.hpp"

using namespace contattn;

namespace {

double mass_1d(const SparseDensity& p) {
    return expectation_quadrature(p, [](double) { return 1.0; });
}

}  // namespace

TEST_CASE("truncated parabola: Epanechnikov anchor") {
    const auto p = make_truncated_parabola(0.0, 2.0 / 3.0);
    CHECK(std::abs(p.lambda() - (-0.75)) <= 1e-12);
    for (double t = -0.95; t <= 0.95; t += 0.1) {
        CHECK(p(t) == doctest::Approx(0.75 * (1.0 - t * t)).epsilon(1e-13));
    }
    CHECK(p(1.2) == 0.0);
    CHECK(p(-3.0) == 0.0);
}

TEST_CASE("truncated parabola: normalization and shift") {
    CHECK(std::abs(mass_1d(make_truncated_parabola(0.0, 1.0)) - 1.0) <= 1e-10);
    const auto a = make_truncated_parabola(5.0, 1.0);
    const auto b = make_truncated_parabola(0.0, 1.0);
    CHECK(a.lambda() == b.lambda());
    for (double t = -1.0; t <= 1.0; t += 0.2) CHECK(a(t + 5.0) == doctest::Approx(b(t)));
    CHECK_THROWS_AS(make_truncated_parabola(0.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(make_truncated_parabola(0.0, 1e-13), std::domain_error);
}

TEST_CASE("truncated paraboloid") {
    const auto p = make_truncated_paraboloid({0, 0}, Mat2::identity());
    CHECK(p.lambda() == doctest::Approx(-std::sqrt(1.0 / M_PI)).epsilon(1e-12));
    const double mass = expectation_quadrature(p, [](const Vec2&) { return 1.0; }, 256);
    CHECK(std::abs(mass - 1.0) <= 1e-8);

    // the N = 1 specialization of the paraboloid normalizer equals the parabola one
    const double lam_n1 = -std::pow(gamma_fn(2.5) / std::sqrt(2.0 * M_PI), 2.0 / 3.0);
    CHECK(lam_n1 == doctest::Approx(make_truncated_parabola(0.0, 1.0).lambda()).epsilon(1e-12));
    CHECK(lam_n1 == doctest::Approx(-0.6551853485522241).epsilon(1e-9));

    // a diagonal covariance is NOT a product of 1D truncated parabolas
    const auto pd = make_truncated_paraboloid({0, 0}, Mat2::diag(1.0, 4.0));
    const double prod = make_truncated_parabola(0.0, 1.0)(0.0) * make_truncated_parabola(0.0, 4.0)(0.0);
    CHECK(std::abs(pd(Vec2{0, 0}) - prod) > 1e-3);

    CHECK_THROWS_AS(make_truncated_paraboloid({0, 0}, Mat2{1.0, 2.0, 2.0, 1.0}), NotSpdError);
}

TEST_CASE("triangular") {
    const auto p = make_triangular(0.0, 1.0);
    CHECK(p.lambda() == doctest::Approx(-1.0));
    CHECK(p(0.0) == doctest::Approx(1.0));
    for (double t = -0.9; t <= 0.9; t += 0.2) CHECK(p(t) == doctest::Approx(1.0 - std::abs(t)));
    const auto q = make_triangular(0.0, 4.0);
    CHECK(q.support1d().lo == doctest::Approx(-2.0));
    CHECK(q.support1d().hi == doctest::Approx(2.0));
    CHECK(q(0.0) == doctest::Approx(0.5));
    CHECK(std::abs(mass_1d(q) - 1.0) <= 1e-10);
    const auto shifted = make_triangular(3.0, 4.0);
    for (double t = -1.5; t <= 1.5; t += 0.5) CHECK(shifted(t + 3.0) == doctest::Approx(q(t)));
    CHECK_THROWS_AS(make_triangular(0.0, 0.0), std::domain_error);
}

TEST_CASE("location-scale subsumes triangular and truncated parabola") {
    const LocationScaleG g_sq([](double s) { return 0.5 * s * s; }, [](double s) { return s; });
    CHECK(g_sq.a_star() == doctest::Approx(1.0).epsilon(1e-10));
    const auto tri = make_location_scale(g_sq, 0.3, 1.0);
    CHECK(tri.lambda() == doctest::Approx(-1.0).epsilon(1e-10));
    const auto tri_ref = make_triangular(0.3, 1.0);
    for (double t = -1.2; t <= 1.8; t += 0.1) CHECK(tri(t) == doctest::Approx(tri_ref(t)).epsilon(1e-9));

    const LocationScaleG g_cub([](double s) { return s * s * s / 6.0; },
                               [](double s) { return 0.5 * s * s; });
    CHECK(g_cub.a_star() == doctest::Approx(std::cbrt(1.5)).epsilon(1e-10));
    const auto par = make_location_scale(g_cub, -0.4, 1.0);
    CHECK(par.lambda() == doctest::Approx(-0.5 * std::pow(1.5, 2.0 / 3.0)).epsilon(1e-9));
    const auto par_ref = make_truncated_parabola(-0.4, 1.0);
    for (double t = -2.0; t <= 1.2; t += 0.1) CHECK(par(t) == doctest::Approx(par_ref(t)).epsilon(1e-9));

    const auto tri4 = make_location_scale(g_sq, 0.0, 2.0);  // sigma = 2 <-> b = 4
    CHECK(tri4.lambda() == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(tri4.support1d().lo == doctest::Approx(-2.0).epsilon(1e-9));
    const auto tri4_ref = make_triangular(0.0, 4.0);
    for (double t = -2.2; t <= 2.2; t += 0.2) CHECK(tri4(t) == doctest::Approx(tri4_ref(t)).epsilon(1e-9));
}

TEST_CASE("escort distributions") {
    const auto p = make_truncated_parabola(0.0, 1.0);
    // beta = 1: escort equals p
    const auto e1 = escort(p, 1.0);
    for (double t = -1.0; t <= 1.0; t += 0.25) CHECK(e1.eval1d(t) == doctest::Approx(p(t)));
    // beta = 0: uniform over the support
    const auto e0 = escort(p, 0.0);
    const double a = 0.5 * p.support1d().length();
    CHECK(e0.norm == doctest::Approx(2.0 * std::cbrt(1.5)).epsilon(1e-12));
    CHECK(e0.eval1d(0.3) == doctest::Approx(1.0 / (2.0 * a)));
    CHECK(e0.eval1d(a + 0.5) == 0.0);
    // escorts integrate to one; fractional beta has a sqrt kink at the
    // support boundary, so integrate under an endpoint-flattening substitution
    for (double beta : {0.0, 0.5, 1.0, 2.0}) {
        const auto e = escort(p, beta);
        const double lo = p.support1d().lo, hi = p.support1d().hi;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        QuadratureSpec spec;
        const double mass = integrate_adaptive(
            [&](double s) {
                const double t = mid - half * std::cos(M_PI * s);
                return e.eval1d(t) * half * M_PI * std::sin(M_PI * s);
            },
            0.0, 1.0, spec);
        CHECK(std::abs(mass - 1.0) <= 1e-8);
    }
    CHECK_THROWS_AS(escort(make_gaussian_1d(0.0, 1.0), 0.0), InfiniteSupportError);

    // discrete escort
    const auto de = escort(std::vector<double>{0.8, 0.2}, 2.0);
    CHECK(de.probs[0] == doctest::Approx(0.64 / 0.68).epsilon(1e-14));
    CHECK(de.probs[1] == doctest::Approx(0.04 / 0.68).epsilon(1e-14));
    CHECK(de.norm == doctest::Approx(0.68).epsilon(1e-14));
}

TEST_CASE("escort on the 2D paraboloid") {
    const auto p = make_truncated_paraboloid({0.2, -0.1}, Mat2{1.0, 0.3, 0.3, 0.8});
    // beta = 0: norm is the support area, escort uniform on the ellipse
    const auto e0 = escort(p, 0.0);
    CHECK(e0.norm == doctest::Approx(p.support2d().area()).epsilon(1e-12));
    const Vec2 inside = p.support2d().center;
    CHECK(e0.eval2d(inside) == doctest::Approx(1.0 / e0.norm));
    CHECK(e0.eval2d({50.0, 50.0}) == 0.0);
    // beta = 1 reproduces p
    const auto e1 = escort(p, 1.0);
    CHECK(e1.eval2d(inside) == doctest::Approx(p(inside)));
    // fractional beta normalizes by quadrature
    const auto eh = escort(p, 0.5);
    const double mass = expectation_quadrature(
        p, [&](const Vec2& t) { return eh.eval2d(t) / std::max(p(t), 1e-300); }, 256);
    CHECK(std::abs(mass - 1.0) <= 1e-5);
}

TEST_CASE("Tsallis negentropy") {
    const std::vector<double> uniform2{0.5, 0.5};
    CHECK(tsallis_negentropy(uniform2, 2.0) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(tsallis_negentropy(uniform2, 1.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    const std::vector<double> p{0.7, 0.3};
    CHECK(std::abs(tsallis_negentropy(p, 1.000001) - tsallis_negentropy(p, 1.0)) <= 1e-5);
    // continuous sanity: Gini negentropy of the unit triangular density is
    // 1/2 int p^2 - 1/2 = 1/3 - 1/2
    const auto tri = make_triangular(0.0, 1.0);
    CHECK(tsallis_negentropy(tri, 2.0) == doctest::Approx(1.0 / 3.0 - 0.5).epsilon(1e-9));
}

TEST_CASE("numeric lambda oracle agrees with the closed forms") {
    const auto quad = lambda_numeric_oracle([](double t) { return -0.5 * t * t; }, 2.0, {-12.0, 12.0});
    CHECK(std::abs(quad.lambda - make_truncated_parabola(0.0, 1.0).lambda()) <= 1e-8);
    const auto tri = lambda_numeric_oracle([](double t) { return -std::abs(t); }, 2.0, {-12.0, 12.0});
    CHECK(std::abs(tri.lambda - (-1.0)) <= 1e-8);
    // alpha = 1.5: no closed form, but the produced density must normalize
    const auto mid = lambda_numeric_oracle([](double t) { return -0.5 * t * t; }, 1.5, {-12.0, 12.0});
    QuadratureSpec spec;
    spec.absolute_tolerance = 1e-10;
    const double mass = integrate_adaptive(mid.density, -12.0, 12.0, spec);
    CHECK(std::abs(mass - 1.0) <= 1e-8);
}

TEST_CASE("normalizing function A_alpha and its gradient") {
    const auto score = CanonicalScore1D::from_moments(0.0, 1.0);
    CHECK(a_alpha(score, 2.0) ==
          doctest::Approx(1.0 - 0.5 * std::pow(1.5, 2.0 / 3.0)).epsilon(1e-12));
    const auto g1 = grad_a_alpha(score, 1.0);
    CHECK(g1[0] == doctest::Approx(0.0));
    CHECK(g1[1] == doctest::Approx(1.0));
    const auto g2 = grad_a_alpha(score, 2.0);
    const double a = std::cbrt(1.5);
    CHECK(g2[0] == doctest::Approx(0.0));
    CHECK(g2[1] == doctest::Approx(a * a / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(a_alpha(score, 1.5), std::domain_error);
}

TEST_CASE("A_2 from the escort-form normalizer expression") {
    // A_alpha(f) = (1/(1-alpha) + int p^{2-alpha} f) / int p^{2-alpha}
    //              - 1/(1-alpha), evaluated numerically at alpha = 2, where
    // p^0 integrates over the support; must equal lambda + 1
    const auto score = CanonicalScore1D::from_moments(0.0, 1.0);
    const auto p = make_truncated_parabola(0.0, 1.0);
    const auto s = p.support1d();
    QuadratureSpec spec;
    const double int_f = integrate_adaptive(
        [&](double t) { return score.score(t); }, s.lo, s.hi, spec);
    const double a2_formula = (-1.0 + int_f) / s.length() + 1.0;
    CHECK(a2_formula == doctest::Approx(a_alpha(score, 2.0)).epsilon(1e-10));
    CHECK(a2_formula == doctest::Approx(p.lambda() + 1.0).epsilon(1e-10));
}

TEST_CASE("location-scale without strong convexity reports NoBracket") {
    // g(s) = s is convex but F(s) = s g'(s) - g(s) + g(0) = 0 never reaches 1/2
    CHECK_THROWS_AS(LocationScaleG([](double s) { return s; }, [](double) { return 1.0; }),
                    NoBracketError);
}

TEST_CASE("A_alpha is midpoint convex along random segments") {
    Rng rng(909);
    for (double alpha : {1.0, 2.0}) {
        for (int k = 0; k < 20; ++k) {
            const auto s0 = CanonicalScore1D::from_moments(rng.uniform(-1, 1), rng.uniform(0.3, 2.0));
            const auto s1 = CanonicalScore1D::from_moments(rng.uniform(-1, 1), rng.uniform(0.3, 2.0));
            const auto mid = CanonicalScore1D::from_theta(0.5 * (s0.theta1 + s1.theta1),
                                                          0.5 * (s0.theta2 + s1.theta2));
            const double lhs = a_alpha(mid, alpha);
            const double rhs = 0.5 * (a_alpha(s0, alpha) + a_alpha(s1, alpha));
            CHECK(lhs <= rhs + 1e-10);
        }
    }
}

TEST_CASE("softmax optimality among perturbed densities") {
    // for f(t) = -t^2/2 the Gaussian N(0, 1) maximizes E_p[f] - Omega_1(p)
    auto objective = [](const SparseDensity& p) {
        const double ef = expectation_quadrature(p, [](double t) { return -0.5 * t * t; });
        return ef - tsallis_negentropy(p, 1.0);
    };
    const double best = objective(make_gaussian_1d(0.0, 1.0));
    Rng rng(910);
    for (int k = 0; k < 15; ++k) {
        const double mu = rng.uniform(-0.6, 0.6);
        double s2 = rng.uniform(0.4, 2.2);
        if (std::abs(mu) < 0.05 && std::abs(s2 - 1.0) < 0.05) s2 += 0.3;
        const double other = objective(make_gaussian_1d(mu, s2));
        CHECK(best - other >= 1e-6);
    }
    // two-component mixtures, evaluated by raw quadrature
    for (int k = 0; k < 5; ++k) {
        const double w = rng.uniform(0.2, 0.8);
        const double m1 = rng.uniform(-1.0, -0.2), m2 = rng.uniform(0.2, 1.0);
        const double v1 = rng.uniform(0.4, 1.5), v2 = rng.uniform(0.4, 1.5);
        auto mix = [&](double t) {
            return w * gaussian_pdf(t, m1, v1) + (1.0 - w) * gaussian_pdf(t, m2, v2);
        };
        QuadratureSpec spec;
        const double ef = integrate_adaptive([&](double t) { return mix(t) * (-0.5 * t * t); },
                                             -14.0, 14.0, spec);
        const double neg = integrate_adaptive(
            [&](double t) {
                const double v = mix(t);
                return v > 0.0 ? v * std::log(v) : 0.0;
            },
            -14.0, 14.0, spec);
        CHECK(best - (ef - neg) >= 1e-6);
    }
}

TEST_CASE("support correctness across families") {
    const LocationScaleG g([](double s) { return std::cosh(s) - 1.0; },
                           [](double s) { return std::sinh(s); });
    const SparseDensity families[] = {
        make_truncated_parabola(0.4, 0.7),
        make_triangular(-0.3, 1.3),
        make_location_scale(g, 0.1, 0.8),
    };
    for (const auto& p : families) {
        const auto s = p.support1d();
        for (int k = 1; k < 16; ++k) {
            const double inside = s.lo + s.length() * k / 16.0;
            CHECK(p(inside) > 0.0);
        }
        for (double off : {0.01, 0.5, 3.0}) {
            CHECK(p(s.lo - off) == 0.0);
            CHECK(p(s.hi + off) == 0.0);
        }
    }
    const auto pb = make_truncated_paraboloid({0.3, -0.2}, Mat2{1.0, 0.4, 0.4, 0.8});
    const auto& e = pb.support2d();
    for (double phi = 0.1; phi < 2.0 * M_PI; phi += 0.5) {
        // walk along rays: strictly positive just inside, zero outside
        const Vec2 dir{std::cos(phi), std::sin(phi)};
        double r = 0.0;
        while (e.contains(e.center + dir * (r + 0.01))) r += 0.01;
        CHECK(pb(e.center + dir * (0.5 * r)) > 0.0);
        CHECK(pb(e.center + dir * (r + 0.05)) == 0.0);
    }
}

TEST_CASE("canonical score round trips") {
    Rng rng(911);
    for (int k = 0; k < 20; ++k) {
        const double mu = rng.uniform(-3.0, 3.0), s2 = rng.uniform(0.1, 4.0);
        const auto s = CanonicalScore1D::from_moments(mu, s2);
        CHECK(std::abs(s.mu() - mu) <= 1e-14 * std::max(1.0, std::abs(mu)));
        CHECK(std::abs(s.sigma2() - s2) <= 1e-14 * s2);
    }
    CHECK_THROWS_AS(CanonicalScore1D::from_theta(0.0, 0.5), std::domain_error);
}
