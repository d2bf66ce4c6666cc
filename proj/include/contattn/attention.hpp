#pragma once

#include <optional>
#include <vector>

#include "contattn/basis.hpp"
#include "contattn/densities.hpp"
#include "contattn/matrix.hpp"

namespace contattn {

// theta <-> moment conversions for the quadratic score families.
CanonicalScore1D theta_from_moments(double mu, double sigma2);
CanonicalScore2D theta_from_moments(const Vec2& mu, const Mat2& cov);
struct Moments1D {
    double mu, sigma2;
};
struct Moments2D {
    Vec2 mu;
    Mat2 cov;
};
Moments1D moments_from_theta(const CanonicalScore1D& score);
Moments2D moments_from_theta(const CanonicalScore2D& score);

// First/second moments of a discrete attention distribution over known
// locations. Throws DegenerateCovarianceError when the covariance is not
// positive (minimum eigenvalue below 1e-10).
Moments1D moment_match_from_discrete(const std::vector<double>& p,
                                     const std::vector<double>& locations);
Moments2D moment_match_from_discrete(const std::vector<double>& p,
                                     const std::vector<Vec2>& locations);

// Continuous softmax forward: r_j = N(mu; mu_j, Sigma + Sigma_j).
std::vector<double> forward_softmax(const CanonicalScore1D& score, const RBFBasis& basis);
std::vector<double> forward_softmax(const CanonicalScore2D& score, const RBFBasis& basis);

// Jacobian d r_j / d theta stored column-per-basis-function: M x N with
// M = 2 (1D: theta1, theta2) or M = 6 (2D: theta_lin, then the four raw
// entries of theta_quad row-major).
Matrix jacobian_softmax(const CanonicalScore1D& score, const RBFBasis& basis);
Matrix jacobian_softmax(const CanonicalScore2D& score, const RBFBasis& basis);

// Continuous sparsemax in 1D, closed form in erf and Gaussian terms.
std::vector<double> forward_sparsemax_1d(const CanonicalScore1D& score, const RBFBasis& basis);
Matrix jacobian_sparsemax_1d(const CanonicalScore1D& score, const RBFBasis& basis);

// Continuous sparsemax in 2D: unit-disc reparametrization, polar
// coordinates, closed-form radial integral, fixed-order angular rule.
// Each call re-evaluates at twice the node count and throws
// ToleranceNotReachedError if the results drift by more than 1e-7.
std::vector<double> forward_sparsemax_2d(const CanonicalScore2D& score, const RBFBasis& basis,
                                         int angular_nodes = 512);
Matrix jacobian_sparsemax_2d(const CanonicalScore2D& score, const RBFBasis& basis,
                             int angular_nodes = 512);

struct AttentionResult {
    std::vector<double> r;        // E_p[psi(t)]
    std::vector<double> context;  // B r, empty when no value function given
    Matrix jacobian;              // M x N, d r_j / d theta_i
};

// Full attention step: density from the score, expectation of the basis,
// optional context through B, Jacobian for the backward pass.
AttentionResult attend(const CanonicalScore1D& score, const RBFBasis& basis, const Matrix* B,
                       double alpha);
AttentionResult attend(const CanonicalScore2D& score, const RBFBasis& basis, const Matrix* B,
                       double alpha, int angular_nodes = 512);

// Backward contraction dL/dtheta = (dr/dtheta) B' (dL/dc).
std::vector<double> backward_theta(const Matrix& jacobian, const Matrix& B,
                                   const std::vector<double>& dl_dc);

}  // namespace contattn
