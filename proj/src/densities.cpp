#include "contattn/densities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "contattn/errors.hpp"
#include "contattn/specfun.hpp"

namespace contattn {

namespace {

constexpr double kDegenerateSigma2 = 1e-12;
constexpr double kDegenerateEig2D = 1e-10;
constexpr double kGaussianWindowStd = 10.0;

void require_scale_1d(double sigma2, const char* what) {
    if (!(sigma2 > kDegenerateSigma2)) throw std::domain_error(what);
}

}  // namespace

CanonicalScore1D CanonicalScore1D::from_moments(double mu, double sigma2) {
    require_scale_1d(sigma2, "CanonicalScore1D: sigma2 must be positive and non-degenerate");
    CanonicalScore1D s;
    s.theta1 = mu / sigma2;
    s.theta2 = -0.5 / sigma2;
    return s;
}

CanonicalScore1D CanonicalScore1D::from_theta(double theta1, double theta2) {
    if (!(theta2 < 0.0)) throw std::domain_error("CanonicalScore1D: theta2 must be negative");
    CanonicalScore1D s;
    s.theta1 = theta1;
    s.theta2 = theta2;
    return s;
}

CanonicalScore2D CanonicalScore2D::from_moments(const Vec2& mu, const Mat2& cov) {
    require_spd(cov, "CanonicalScore2D: covariance not SPD", kDegenerateEig2D);
    CanonicalScore2D s;
    const Mat2 prec = cov.inverse();
    s.theta_lin = prec * mu;
    s.theta_quad = prec * -0.5;
    // symmetrize away the roundoff from the explicit inverse
    const double off = 0.5 * (s.theta_quad.b + s.theta_quad.c);
    s.theta_quad.b = s.theta_quad.c = off;
    return s;
}

CanonicalScore2D CanonicalScore2D::from_theta(const Vec2& theta_lin, const Mat2& theta_quad) {
    if (!theta_quad.symmetric()) {
        throw std::domain_error("CanonicalScore2D: theta_quad must be symmetric");
    }
    require_spd(theta_quad * -1.0, "CanonicalScore2D: -theta_quad must be positive definite");
    CanonicalScore2D s;
    s.theta_lin = theta_lin;
    s.theta_quad = theta_quad;
    return s;
}

double EllipseSupport::area() const {
    // {1/2 x' prec x <= level} is an ellipse with matrix (2 level) prec^{-1}
    return 2.0 * M_PI * level / std::sqrt(prec.det());
}

Rect EllipseSupport::bounding_box() const {
    const Mat2 cov = prec.inverse();
    const double hx = std::sqrt(2.0 * level * cov.a);
    const double hy = std::sqrt(2.0 * level * cov.d);
    return {center.x - hx, center.x + hx, center.y - hy, center.y + hy};
}

std::optional<Interval> EllipseSupport::chord_x(double y) const {
    // 1/2 (A x^2 + 2B x dy + C dy^2) = level, x relative to the center
    const double dy = y - center.y;
    const double A = prec.a, B = 0.5 * (prec.b + prec.c), C = prec.d;
    const double disc = B * B * dy * dy - A * (C * dy * dy - 2.0 * level);
    if (disc <= 0.0) return std::nullopt;
    const double rt = std::sqrt(disc);
    return Interval{center.x + (-B * dy - rt) / A, center.x + (-B * dy + rt) / A};
}

bool EllipseSupport::contains(const Vec2& t) const {
    const Vec2 d = t - center;
    return 0.5 * d.dot(prec * d) <= level;
}

bool SparseDensity::compact_support() const {
    return family_ != Family::Gaussian1D && family_ != Family::Gaussian2D;
}

const Interval& SparseDensity::support1d() const {
    if (dim_ != 1 || !compact_support()) {
        throw std::logic_error("support1d: density has no compact 1D support");
    }
    return support1d_;
}

const EllipseSupport& SparseDensity::support2d() const {
    if (family_ != Family::TruncatedParaboloid2D) {
        throw std::logic_error("support2d: density has no elliptical support");
    }
    return support2d_;
}

double SparseDensity::operator()(double t) const {
    switch (family_) {
        case Family::Gaussian1D:
            return gaussian_pdf(t, loc1d_, scale1d_);
        case Family::TruncatedParabola: {
            const double d = t - loc1d_;
            return std::max(0.0, -lambda_ - d * d / (2.0 * scale1d_));
        }
        case Family::Triangular:
            return std::max(0.0, -lambda_ - std::abs(t - loc1d_) / scale1d_);
        case Family::LocationScale:
            return std::max(0.0, -lambda_ + shape_(std::abs(t - loc1d_) / scale1d_));
        default:
            throw std::logic_error("SparseDensity: 1D evaluation on a 2D family");
    }
}

double SparseDensity::operator()(const Vec2& t) const {
    switch (family_) {
        case Family::Gaussian2D:
            return gaussian_pdf(t, loc2d_, cov2d_);
        case Family::TruncatedParaboloid2D: {
            const Vec2 d = t - loc2d_;
            return std::max(0.0, -lambda_ - 0.5 * d.dot(prec2d_ * d));
        }
        default:
            throw std::logic_error("SparseDensity: 2D evaluation on a 1D family");
    }
}

SparseDensity make_gaussian_1d(double mu, double sigma2) {
    require_scale_1d(sigma2, "make_gaussian_1d: degenerate sigma2");
    SparseDensity p;
    p.family_ = Family::Gaussian1D;
    p.dim_ = 1;
    p.loc1d_ = mu;
    p.scale1d_ = sigma2;
    // log-partition of f(t) = -(t-mu)^2/(2 sigma2)
    p.lambda_ = 0.5 * std::log(2.0 * M_PI * sigma2);
    return p;
}

SparseDensity make_gaussian_2d(const Vec2& mu, const Mat2& cov) {
    require_spd(cov, "make_gaussian_2d: covariance not SPD", kDegenerateEig2D);
    SparseDensity p;
    p.family_ = Family::Gaussian2D;
    p.dim_ = 2;
    p.loc2d_ = mu;
    p.cov2d_ = cov;
    p.prec2d_ = cov.inverse();
    p.lambda_ = 0.5 * std::log(4.0 * M_PI * M_PI * cov.det());
    return p;
}

SparseDensity make_truncated_parabola(double mu, double sigma2) {
    require_scale_1d(sigma2, "make_truncated_parabola: degenerate sigma2");
    SparseDensity p;
    p.family_ = Family::TruncatedParabola;
    p.dim_ = 1;
    p.loc1d_ = mu;
    p.scale1d_ = sigma2;
    const double sigma = std::sqrt(sigma2);
    p.lambda_ = -0.5 * std::pow(3.0 / (2.0 * sigma), 2.0 / 3.0);
    const double a = std::cbrt(1.5 * sigma2);
    p.support1d_ = {mu - a, mu + a};
    return p;
}

SparseDensity make_truncated_paraboloid(const Vec2& mu, const Mat2& cov) {
    require_spd(cov, "make_truncated_paraboloid: covariance not SPD", kDegenerateEig2D);
    SparseDensity p;
    p.family_ = Family::TruncatedParaboloid2D;
    p.dim_ = 2;
    p.loc2d_ = mu;
    p.cov2d_ = cov;
    p.prec2d_ = cov.inverse();
    constexpr int N = 2;
    const double det2pi = std::pow(2.0 * M_PI, N) * cov.det();
    p.lambda_ = -std::pow(gamma_fn(N / 2.0 + 2.0) / std::sqrt(det2pi), 2.0 / (2.0 + N));
    p.support2d_ = {mu, p.prec2d_, -p.lambda_};
    return p;
}

SparseDensity make_triangular(double mu, double b) {
    if (!(b > kDegenerateSigma2)) throw std::domain_error("make_triangular: b must be positive");
    SparseDensity p;
    p.family_ = Family::Triangular;
    p.dim_ = 1;
    p.loc1d_ = mu;
    p.scale1d_ = b;
    p.lambda_ = -1.0 / std::sqrt(b);
    const double a = std::sqrt(b);
    p.support1d_ = {mu - a, mu + a};
    return p;
}

LocationScaleG::LocationScaleG(std::function<double(double)> g, std::function<double(double)> gprime)
    : g_(std::move(g)), gprime_(std::move(gprime)) {
    // Solve a g'(a) - g(a) + g(0) = 1/2; geometric bracket expansion.
    const double g0 = g_(0.0);
    auto F = [&](double s) { return s * gprime_(s) - g_(s) + g0 - 0.5; };
    double hi = 1.0;
    int doublings = 0;
    while (F(hi) < 0.0) {
        hi *= 2.0;
        if (++doublings > 30) {
            throw NoBracketError("LocationScaleG: F(a) never reaches 1/2; g not strongly convex enough");
        }
    }
    RootSpec spec;
    spec.tolerance = 1e-12;
    a_star_ = bisect(F, 0.0, hi, spec);
}

SparseDensity LocationScaleG::make_density(double mu, double sigma) const {
    if (!(sigma > 0.0)) throw std::domain_error("make_location_scale: sigma must be positive");
    SparseDensity p;
    p.family_ = Family::LocationScale;
    p.dim_ = 1;
    p.loc1d_ = mu;
    p.scale1d_ = sigma;
    p.lambda_ = -gprime_(a_star_) / sigma;
    p.support1d_ = {mu - a_star_ * sigma, mu + a_star_ * sigma};
    auto gp = gprime_;
    const double s = sigma;
    p.shape_ = [gp, s](double u) { return -gp(u) / s; };
    return p;
}

namespace {

// ||p||_beta^beta by quadrature, honoring the support kinks / Gaussian window.
double escort_norm_quadrature(const SparseDensity& p, double beta) {
    QuadratureSpec spec;
    spec.absolute_tolerance = 1e-12;
    if (p.dimension() == 1) {
        double lo, hi;
        if (p.compact_support()) {
            lo = p.support1d().lo;
            hi = p.support1d().hi;
        } else {
            const double sd = std::sqrt(p.scale1d());
            lo = p.loc1d() - kGaussianWindowStd * sd;
            hi = p.loc1d() + kGaussianWindowStd * sd;
        }
        return integrate_endpoint_tamed([&](double t) { return std::pow(p(t), beta); }, lo, hi,
                                        spec);
    }
    // 2D paraboloid: iterate the bounding box, inner integral on the chord
    const auto& e = p.support2d();
    const Rect box = e.bounding_box();
    const int n = 256;
    const auto& gl = gauss_legendre(n);
    const double ym = 0.5 * (box.ylo + box.yhi), yh = 0.5 * (box.yhi - box.ylo);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = ym + yh * gl.nodes[i];
        const auto chord = e.chord_x(y);
        if (!chord) continue;
        const double xm = 0.5 * (chord->lo + chord->hi), xh = 0.5 * chord->length();
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            row += gl.weights[j] * std::pow(p(Vec2{xm + xh * gl.nodes[j], y}), beta);
        }
        total += gl.weights[i] * row * xh;
    }
    return total * yh;
}

}  // namespace

EscortResult escort(const SparseDensity& p, double beta) {
    if (!(beta >= 0.0)) throw std::domain_error("escort: beta must be nonnegative");
    double norm;
    if (beta == 1.0) {
        norm = 1.0;
    } else if (beta == 0.0) {
        if (!p.compact_support()) {
            throw InfiniteSupportError("escort: beta = 0 needs a finite-measure support");
        }
        norm = p.dimension() == 1 ? p.support1d().length() : p.support2d().area();
    } else if (p.family() == Family::Gaussian1D) {
        // int N(t; mu, s2)^beta = beta^{-1/2} (2 pi s2)^{(1-beta)/2}
        norm = std::pow(beta, -0.5) * std::pow(2.0 * M_PI * p.scale1d(), 0.5 * (1.0 - beta));
    } else if (p.family() == Family::Gaussian2D) {
        norm = std::pow(beta, -1.0) * std::pow(4.0 * M_PI * M_PI * p.cov2d().det(), 0.5 * (1.0 - beta));
    } else {
        norm = escort_norm_quadrature(p, beta);
    }

    EscortResult r;
    r.norm = norm;
    const double n = norm;
    // p = 0 stays 0 for every beta (pow(0, 0) would say 1)
    if (p.dimension() == 1) {
        r.eval1d = [p, beta, n](double t) {
            const double v = p(t);
            return v > 0.0 ? std::pow(v, beta) / n : 0.0;
        };
    } else {
        r.eval2d = [p, beta, n](const Vec2& t) {
            const double v = p(t);
            return v > 0.0 ? std::pow(v, beta) / n : 0.0;
        };
    }
    return r;
}

DiscreteEscort escort(const std::vector<double>& p, double beta) {
    if (!(beta >= 0.0)) throw std::domain_error("escort: beta must be nonnegative");
    DiscreteEscort r;
    r.probs.resize(p.size());
    r.norm = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        r.probs[i] = p[i] > 0.0 ? std::pow(p[i], beta) : 0.0;
        r.norm += r.probs[i];
    }
    for (double& v : r.probs) v /= r.norm;
    return r;
}

double tsallis_negentropy(const SparseDensity& p, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("tsallis_negentropy: alpha must be positive");
    const bool shannon = std::abs(alpha - 1.0) < 1e-12;
    QuadratureSpec spec;
    spec.absolute_tolerance = 1e-12;
    Fn1D integrand1d;
    std::function<double(const Vec2&)> integrand2d;
    if (shannon) {
        integrand1d = [&p](double t) {
            const double v = p(t);
            return v > 0.0 ? v * std::log(v) : 0.0;
        };
        integrand2d = [&p](const Vec2& t) {
            const double v = p(t);
            return v > 0.0 ? v * std::log(v) : 0.0;
        };
    } else {
        integrand1d = [&p, alpha](double t) { return std::pow(p(t), alpha); };
        integrand2d = [&p, alpha](const Vec2& t) { return std::pow(p(t), alpha); };
    }

    double integral;
    if (p.dimension() == 1) {
        double lo, hi;
        if (p.compact_support()) {
            lo = p.support1d().lo;
            hi = p.support1d().hi;
        } else {
            const double sd = std::sqrt(p.scale1d());
            lo = p.loc1d() - kGaussianWindowStd * sd;
            hi = p.loc1d() + kGaussianWindowStd * sd;
        }
        integral = integrate_endpoint_tamed(integrand1d, lo, hi, spec);
    } else if (p.family() == Family::TruncatedParaboloid2D) {
        const auto& e = p.support2d();
        const Rect box = e.bounding_box();
        const int n = 256;
        const auto& gl = gauss_legendre(n);
        const double ym = 0.5 * (box.ylo + box.yhi), yh = 0.5 * (box.yhi - box.ylo);
        integral = 0.0;
        for (int i = 0; i < n; ++i) {
            const double y = ym + yh * gl.nodes[i];
            const auto chord = e.chord_x(y);
            if (!chord) continue;
            const double xm = 0.5 * (chord->lo + chord->hi), xh = 0.5 * chord->length();
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += gl.weights[j] * integrand2d({xm + xh * gl.nodes[j], y});
            integral += gl.weights[i] * row * xh;
        }
        integral *= yh;
    } else {
        const Mat2 cov = p.cov2d();
        const double hx = kGaussianWindowStd * std::sqrt(cov.a);
        const double hy = kGaussianWindowStd * std::sqrt(cov.d);
        const Vec2 mu = p.loc2d();
        integral = integrate_fixed_2d([&](double x, double y) { return integrand2d({x, y}); },
                                      {mu.x - hx, mu.x + hx, mu.y - hy, mu.y + hy}, 256);
    }

    if (shannon) return integral;
    return (integral - 1.0) / (alpha * (alpha - 1.0));
}

double tsallis_negentropy(const std::vector<double>& p, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("tsallis_negentropy: alpha must be positive");
    if (std::abs(alpha - 1.0) < 1e-12) {
        double s = 0.0;
        for (double v : p) {
            if (v > 0.0) s += v * std::log(v);
        }
        return s;
    }
    double s = 0.0;
    for (double v : p) {
        if (v > 0.0) s += std::pow(v, alpha);
    }
    return (s - 1.0) / (alpha * (alpha - 1.0));
}

NumericDensity lambda_numeric_oracle(const std::function<double(double)>& f, double alpha,
                                     const Interval& window) {
    if (!(alpha > 1.0)) throw std::domain_error("lambda_numeric_oracle: alpha must exceed 1");
    // locate max f on the window by grid scan + golden refinement
    const int kGrid = 2048;
    double best_t = window.lo, best_f = f(window.lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double t = window.lo + (window.hi - window.lo) * i / kGrid;
        const double v = f(t);
        if (v > best_f) {
            best_f = v;
            best_t = t;
        }
    }
    {
        const double h = (window.hi - window.lo) / kGrid;
        double lo = std::max(window.lo, best_t - h), hi = std::min(window.hi, best_t + h);
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double m1 = lo + 0.381966011250105 * (hi - lo);
            const double m2 = hi - 0.381966011250105 * (hi - lo);
            if (f(m1) < f(m2)) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        best_t = 0.5 * (lo + hi);
        best_f = std::max(best_f, f(best_t));
    }
    const double fmax = best_f;

    const double expo = 1.0 / (alpha - 1.0);
    auto density_at = [&](double lambda, double t) {
        const double base = (alpha - 1.0) * (f(t) - lambda);
        return base > 0.0 ? std::pow(base, expo) : 0.0;
    };
    auto mass = [&](double lambda) {
        // split at the crossings of f = lambda found by scanning the grid
        std::vector<double> splits;
        double prev_t = window.lo;
        double prev_s = f(prev_t) - lambda;
        for (int i = 1; i <= kGrid; ++i) {
            const double t = window.lo + (window.hi - window.lo) * i / kGrid;
            const double s = f(t) - lambda;
            if ((prev_s <= 0.0) != (s <= 0.0)) {
                RootSpec rs;
                rs.tolerance = 1e-13;
                splits.push_back(bisect([&](double u) { return f(u) - lambda; },
                                        prev_t, t, rs));
            }
            prev_t = t;
            prev_s = s;
        }
        QuadratureSpec qs;
        qs.absolute_tolerance = 1e-11;
        return integrate_adaptive_split([&](double t) { return density_at(lambda, t); },
                                        window.lo, window.hi, splits, qs);
    };

    const double lam_lo = fmax - 10.0 * (1.0 + std::abs(fmax));
    const double lam_hi = fmax;
    if (mass(lam_lo) < 1.0) {
        throw NoBracketError("lambda_numeric_oracle: initial bracket does not contain the root");
    }
    RootSpec rs;
    rs.tolerance = 1e-11;
    const double lambda =
        bisect([&](double l) { return mass(l) - 1.0; }, lam_lo, lam_hi, rs);

    NumericDensity out;
    out.lambda = lambda;
    out.density = [f, alpha, lambda, expo](double t) {
        const double base = (alpha - 1.0) * (f(t) - lambda);
        return base > 0.0 ? std::pow(base, expo) : 0.0;
    };
    return out;
}

double a_alpha(const CanonicalScore1D& score, double alpha) {
    const double mu = score.mu(), sigma2 = score.sigma2();
    if (std::abs(alpha - 1.0) < 1e-12) {
        // log int exp(theta1 t + theta2 t^2)
        return mu * mu / (2.0 * sigma2) + 0.5 * std::log(2.0 * M_PI * sigma2);
    }
    if (std::abs(alpha - 2.0) < 1e-12) {
        // lambda of the theta-form score plus one; the quadratic completion
        // shifts the central lambda by mu^2/(2 sigma2)
        const double lambda_central = -0.5 * std::pow(3.0 / (2.0 * std::sqrt(sigma2)), 2.0 / 3.0);
        return lambda_central + mu * mu / (2.0 * sigma2) + 1.0;
    }
    throw std::domain_error("a_alpha: only alpha in {1, 2} is supported");
}

std::array<double, 2> grad_a_alpha(const CanonicalScore1D& score, double alpha) {
    const double mu = score.mu(), sigma2 = score.sigma2();
    if (std::abs(alpha - 1.0) < 1e-12) {
        return {mu, sigma2 + mu * mu};
    }
    if (std::abs(alpha - 2.0) < 1e-12) {
        // 0-escort is uniform on [mu - a, mu + a]
        const double a = std::cbrt(1.5 * sigma2);
        return {mu, mu * mu + a * a / 3.0};
    }
    throw std::domain_error("grad_a_alpha: only alpha in {1, 2} is supported");
}

}  // namespace contattn
