#include "contattn/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace contattn {

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589031;  // 2/sqrt(pi)
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599;     // 1/sqrt(2 pi)

// Maclaurin series erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1)),
// used for |x| <= 2 where it converges quickly and without cancellation
// trouble at double precision.
double erf_series(double x) {
    const double xx = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 80; ++n) {
        term *= -xx / n;
        const double inc = term / (2 * n + 1);
        sum += inc;
        if (std::abs(inc) < 1e-18 * std::abs(sum)) break;
    }
    return kTwoOverSqrtPi * sum;
}

// erfc(x) for x >= 2 via the Legendre continued fraction for the upper
// incomplete gamma function: erfc(x) = Gamma(1/2, x^2)/sqrt(pi), evaluated
// with the modified Lentz algorithm.
double erfc_cf(double x) {
    const double z = x * x;
    const double a = 0.5;
    const double tiny = 1e-300;
    double b = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 300; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    // Gamma(1/2, z) = exp(-z) z^(1/2) h; erfc = that / sqrt(pi)
    return std::exp(-z) * x * h * (kTwoOverSqrtPi * 0.5);
}

}  // namespace

double erf(double x) {
    if (std::isnan(x)) return x;
    const double ax = std::abs(x);
    double r;
    if (ax <= 2.0) {
        r = erf_series(ax);
    } else if (ax < 27.0) {
        r = 1.0 - erfc_cf(ax);
    } else {
        r = 1.0;
    }
    return x < 0.0 ? -r : r;
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: argument must be positive");
    // Lanczos approximation, g = 7, 9 coefficients.
    static const double kCoef[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection keeps the (0, 0.5) tail accurate
        return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double acc = kCoef[0];
    for (int i = 1; i < 9; ++i) acc += kCoef[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double gaussian_pdf(double t, double mean, double sigma2) {
    if (!(sigma2 > 0.0)) throw NotSpdError("gaussian_pdf: sigma2 must be positive");
    const double z = (t - mean) / std::sqrt(sigma2);
    return kInvSqrt2Pi / std::sqrt(sigma2) * std::exp(-0.5 * z * z);
}

double gaussian_pdf(const Vec2& t, const Vec2& mean, const Mat2& cov) {
    require_spd(cov, "gaussian_pdf: covariance not SPD");
    const Mat2 prec = cov.inverse();
    const Vec2 d = t - mean;
    const double q = d.dot(prec * d);
    return std::exp(-0.5 * q) / (2.0 * M_PI * std::sqrt(cov.det()));
}

double beta_exp(double u, double beta) {
    if (std::abs(beta - 1.0) < 1e-12) return std::exp(u);
    const double base = 1.0 + (1.0 - beta) * u;
    if (base <= 0.0) {
        // [.]_+ clips. beta < 1: the zero branch of the density. beta > 1:
        // the exponent is negative and the function diverges at the pole.
        return beta < 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::pow(base, 1.0 / (1.0 - beta));
}

double beta_log(double u, double beta) {
    if (!(u > 0.0)) throw std::domain_error("beta_log: argument must be positive");
    if (std::abs(beta - 1.0) < 1e-12) return std::log(u);
    return (std::pow(u, 1.0 - beta) - 1.0) / (1.0 - beta);
}

}  // namespace contattn
