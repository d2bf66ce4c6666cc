#pragma once

#include <functional>
#include <vector>

#include "contattn/densities.hpp"
#include "contattn/discrete.hpp"
#include "contattn/matrix.hpp"
#include "contattn/quadrature.hpp"

namespace contattn {

// Slow reference implementations used by tests and `contattn check`. These
// never call into the closed-form attention paths; they share only the
// core quadrature/special-function primitives.

// E_p[g] with kink-aware splitting at the support boundary. Gaussian
// densities are integrated over mean +/- 10 standard deviations.
double expectation_quadrature(const SparseDensity& p, const std::function<double(double)>& g,
                              const QuadratureSpec& spec = {});
double expectation_quadrature(const SparseDensity& p,
                              const std::function<double(const Vec2&)>& g,
                              int nodes_per_axis = 256);

// Generalized beta-covariance cov_{p,beta}(phi, psi), entirely
// by quadrature: ||p||_beta^beta (E[phi psi'] - E[phi] E[psi]') under the
// beta-escort. beta in {0, 1}; beta = 0 needs a compactly supported density.
using VecFn1D = std::function<std::vector<double>(double)>;
using VecFn2D = std::function<std::vector<double>(const Vec2&)>;
Matrix generalized_cov_quadrature(const SparseDensity& p, const VecFn1D& phi, const VecFn1D& psi,
                                  double beta, const QuadratureSpec& spec = {});
Matrix generalized_cov_quadrature(const SparseDensity& p, const VecFn2D& phi, const VecFn2D& psi,
                                  double beta, int nodes_per_axis = 256);

struct FiniteDiffSpec {
    double step = 1e-6;  // central differences only
};

// J[i][j] = d f_i / d x_j by central differences, column by column.
Matrix finite_diff_jacobian(const std::function<std::vector<double>(const std::vector<double>&)>& f,
                            const std::vector<double>& x, const FiniteDiffSpec& spec = {});

double finite_diff_derivative(const std::function<double(double)>& f, double x,
                              const FiniteDiffSpec& spec = {});

// Exhaustive support-enumeration solution of argmin_{p in simplex} ||p - f||^2.
// Guards with TooLargeError above L = 20.
SimplexVector simplex_projection_bruteforce(const std::vector<double>& f);

}  // namespace contattn
