#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "contattn/linalg.hpp"
#include "contattn/quadrature.hpp"

namespace contattn {

// Canonical parameters of the quadratic score f(t) = theta1 t + theta2 t^2,
// equivalently (mu, sigma2) with theta1 = mu/sigma2, theta2 = -1/(2 sigma2).
struct CanonicalScore1D {
    double theta1 = 0.0;
    double theta2 = -0.5;

    static CanonicalScore1D from_moments(double mu, double sigma2);
    static CanonicalScore1D from_theta(double theta1, double theta2);

    double mu() const { return -theta1 / (2.0 * theta2); }
    double sigma2() const { return -1.0 / (2.0 * theta2); }
    double score(double t) const { return theta1 * t + theta2 * t * t; }
};

// 2D counterpart: f(t) = theta_lin . t + t' theta_quad t with theta_quad
// symmetric negative definite; theta_lin = Sigma^{-1} mu, theta_quad =
// -1/2 Sigma^{-1}.
struct CanonicalScore2D {
    Vec2 theta_lin;
    Mat2 theta_quad;

    static CanonicalScore2D from_moments(const Vec2& mu, const Mat2& cov);
    static CanonicalScore2D from_theta(const Vec2& theta_lin, const Mat2& theta_quad);

    Mat2 cov() const { return (theta_quad * -2.0).inverse(); }
    Vec2 mu() const { return cov() * theta_lin; }
    double score(const Vec2& t) const { return theta_lin.dot(t) + t.dot(theta_quad * t); }
};

enum class Family {
    Gaussian1D,
    Gaussian2D,
    TruncatedParabola,
    TruncatedParaboloid2D,
    Triangular,
    LocationScale,
};

struct Interval {
    double lo, hi;
    double length() const { return hi - lo; }
};

// Support of a 2D paraboloid density: {t : 1/2 (t-c)' prec (t-c) <= level}.
struct EllipseSupport {
    Vec2 center;
    Mat2 prec;     // Sigma^{-1}
    double level;  // -lambda

    double area() const;
    Rect bounding_box() const;
    // x-extent of the slice at height y (absolute coordinates); nullopt when
    // the horizontal line misses the ellipse.
    std::optional<Interval> chord_x(double y) const;
    bool contains(const Vec2& t) const;
};

// A member of a (2-alpha)-exponential family with its normalizer and exact
// support. Immutable after construction; evaluation is pure.
class SparseDensity {
  public:
    Family family() const { return family_; }
    int dimension() const { return dim_; }

    // Normalizer: the lambda subtracted inside [.]_+ for the sparse
    // families, the log-partition A_1 for the Gaussian ones.
    double lambda() const { return lambda_; }

    bool compact_support() const;
    const Interval& support1d() const;
    const EllipseSupport& support2d() const;

    double operator()(double t) const;
    double operator()(const Vec2& t) const;

    // Location/scale accessors (1D families; sigma2, b, or sigma by family).
    double loc1d() const { return loc1d_; }
    double scale1d() const { return scale1d_; }
    Vec2 loc2d() const { return loc2d_; }
    Mat2 cov2d() const { return cov2d_; }

    friend SparseDensity make_gaussian_1d(double mu, double sigma2);
    friend SparseDensity make_gaussian_2d(const Vec2& mu, const Mat2& cov);
    friend SparseDensity make_truncated_parabola(double mu, double sigma2);
    friend SparseDensity make_truncated_paraboloid(const Vec2& mu, const Mat2& cov);
    friend SparseDensity make_triangular(double mu, double b);
    friend class LocationScaleG;

  private:
    SparseDensity() = default;

    Family family_ = Family::Gaussian1D;
    int dim_ = 1;
    double lambda_ = 0.0;
    double loc1d_ = 0.0, scale1d_ = 1.0;
    Vec2 loc2d_;
    Mat2 cov2d_;
    Mat2 prec2d_;
    Interval support1d_{0.0, 0.0};
    EllipseSupport support2d_{};
    std::function<double(double)> shape_;  // LocationScale: -g'(|s|)/sigma profile
};

SparseDensity make_gaussian_1d(double mu, double sigma2);
SparseDensity make_gaussian_2d(const Vec2& mu, const Mat2& cov);

// p(t) = [-(t-mu)^2/(2 sigma2) - lambda]_+ with lambda = -1/2 (3/(2 sigma))^(2/3).
SparseDensity make_truncated_parabola(double mu, double sigma2);

// p(t) = [-lambda - 1/2 (t-mu)' Sigma^{-1} (t-mu)]_+ with
// lambda = -(Gamma(N/2+2)/sqrt(det(2 pi Sigma)))^(2/(2+N)), N = 2.
SparseDensity make_truncated_paraboloid(const Vec2& mu, const Mat2& cov);

// p(t) = [-lambda - |t-mu|/b]_+ with lambda = -1/sqrt(b).
SparseDensity make_triangular(double mu, double b);

// Base profile g for the location-scale construction: g convex and C^1 on
// R+, density [-lambda - g'(|t-mu|/sigma)/sigma]_+ where a solves
// a g'(a) - g(a) + g(0) = 1/2 and lambda = -g'(a)/sigma.
class LocationScaleG {
  public:
    LocationScaleG(std::function<double(double)> g, std::function<double(double)> gprime);

    double a_star() const { return a_star_; }
    double g(double s) const { return g_(s); }
    double gprime(double s) const { return gprime_(s); }

    SparseDensity make_density(double mu, double sigma) const;

  private:
    std::function<double(double)> g_, gprime_;
    double a_star_;
};

inline SparseDensity make_location_scale(const LocationScaleG& g, double mu, double sigma) {
    return g.make_density(mu, sigma);
}

// Escort distribution p^beta / ||p||_beta^beta together with the escort
// normalizer ||p||_beta^beta.
struct EscortResult {
    std::function<double(double)> eval1d;
    std::function<double(const Vec2&)> eval2d;
    double norm;  // ||p||_beta^beta
};
EscortResult escort(const SparseDensity& p, double beta);

struct DiscreteEscort {
    std::vector<double> probs;
    double norm;
};
DiscreteEscort escort(const std::vector<double>& p, double beta);

// Tsallis negentropy Omega_alpha; the alpha = 1 branch is Shannon's
// negentropy with 0 log 0 := 0.
double tsallis_negentropy(const SparseDensity& p, double alpha);
double tsallis_negentropy(const std::vector<double>& p, double alpha);

// Numeric normalizer for p(t) = [(alpha-1)(f(t) - lambda)]_+^(1/(alpha-1)):
// finds lambda such that the density integrates to one over the window.
struct NumericDensity {
    double lambda;
    std::function<double(double)> density;
};
NumericDensity lambda_numeric_oracle(const std::function<double(double)>& f, double alpha,
                                     const Interval& window);

// Normalizing function A_alpha(theta) of the 1D quadratic family and its
// gradient, the (2-alpha)-escort expectation of (t, t^2). alpha in {1, 2}.
double a_alpha(const CanonicalScore1D& score, double alpha);
std::array<double, 2> grad_a_alpha(const CanonicalScore1D& score, double alpha);

}  // namespace contattn
