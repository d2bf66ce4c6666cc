#pragma once

#include "contattn/linalg.hpp"

namespace contattn {

// Error function, |error| <= 1e-13 absolute on [-6, 6], saturating beyond.
double erf(double x);

// Gamma function for x > 0 (Lanczos); throws std::domain_error for x <= 0.
double gamma_fn(double x);

// Standard normal pdf N(x; 0, 1).
double std_normal_pdf(double x);

// N(t; mean, sigma2), sigma2 > 0.
double gaussian_pdf(double t, double mean, double sigma2);

// N(t; mean, cov) in 2D; throws NotSpdError if cov fails the SPD check.
double gaussian_pdf(const Vec2& t, const Vec2& mean, const Mat2& cov);

// Deformed exponential/logarithm pair. The beta = 1 branch is taken when
// |beta - 1| < 1e-12.
double beta_exp(double u, double beta);
double beta_log(double u, double beta);  // u > 0

}  // namespace contattn
