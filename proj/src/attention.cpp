#include "contattn/attention.hpp"

#include <cmath>
#include <stdexcept>

#include "contattn/errors.hpp"
#include "contattn/specfun.hpp"

namespace contattn {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621;
constexpr double kAngularDriftTol = 1e-7;

void require_1d(const RBFBasis& basis) {
    if (basis.dimension != 1) throw std::invalid_argument("basis dimension must be 1");
}

void require_2d(const RBFBasis& basis) {
    if (basis.dimension != 2) throw std::invalid_argument("basis dimension must be 2");
}

// int 1, int s, int s^2, int s^3 against N(s; 0, 1) over [u, v]
struct StdNormalMoments {
    double i0, i1, i2, i3;
};

StdNormalMoments std_normal_moments(double u, double v) {
    const double nu = std_normal_pdf(u), nv = std_normal_pdf(v);
    StdNormalMoments m;
    m.i0 = 0.5 * (erf(v * kInvSqrt2) - erf(u * kInvSqrt2));
    m.i1 = nu - nv;
    m.i2 = m.i0 - v * nv + u * nu;
    m.i3 = nu * (2.0 + u * u) - nv * (2.0 + v * v);
    return m;
}

}  // namespace

CanonicalScore1D theta_from_moments(double mu, double sigma2) {
    return CanonicalScore1D::from_moments(mu, sigma2);
}

CanonicalScore2D theta_from_moments(const Vec2& mu, const Mat2& cov) {
    return CanonicalScore2D::from_moments(mu, cov);
}

Moments1D moments_from_theta(const CanonicalScore1D& score) {
    return {score.mu(), score.sigma2()};
}

Moments2D moments_from_theta(const CanonicalScore2D& score) {
    return {score.mu(), score.cov()};
}

Moments1D moment_match_from_discrete(const std::vector<double>& p,
                                     const std::vector<double>& locations) {
    if (p.size() != locations.size() || p.empty()) {
        throw std::invalid_argument("moment_match: lengths must agree");
    }
    double m1 = 0.0;
    for (size_t i = 0; i < p.size(); ++i) m1 += p[i] * locations[i];
    // centered accumulation; the textbook E[t^2] - mu^2 form cancels
    // catastrophically when the distribution concentrates on a few nearby
    // locations, and downstream 1/sigma2 amplifies the loss
    double sigma2 = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const double d = locations[i] - m1;
        sigma2 += p[i] * d * d;
    }
    if (!(sigma2 >= 1e-10)) {
        throw DegenerateCovarianceError("moment_match: variance below 1e-10");
    }
    return {m1, sigma2};
}

Moments2D moment_match_from_discrete(const std::vector<double>& p,
                                     const std::vector<Vec2>& locations) {
    if (p.size() != locations.size() || p.empty()) {
        throw std::invalid_argument("moment_match: lengths must agree");
    }
    Vec2 m1{};
    for (size_t i = 0; i < p.size(); ++i) m1 = m1 + p[i] * locations[i];
    Mat2 cov{};
    for (size_t i = 0; i < p.size(); ++i) {
        const Vec2 d = locations[i] - m1;
        cov = cov + p[i] * Mat2::outer(d, d);
    }
    const double off = 0.5 * (cov.b + cov.c);
    cov.b = cov.c = off;
    if (sym_eigenvalues(cov)[0] < 1e-10) {
        throw DegenerateCovarianceError("moment_match: covariance minimum eigenvalue below 1e-10");
    }
    return {m1, cov};
}

std::vector<double> forward_softmax(const CanonicalScore1D& score, const RBFBasis& basis) {
    require_1d(basis);
    const double mu = score.mu(), sigma2 = score.sigma2();
    std::vector<double> r(basis.size());
    for (size_t j = 0; j < r.size(); ++j) {
        r[j] = gaussian_pdf(mu, basis.centers1d[j], sigma2 + basis.widths1d[j]);
    }
    return r;
}

std::vector<double> forward_softmax(const CanonicalScore2D& score, const RBFBasis& basis) {
    require_2d(basis);
    const Vec2 mu = score.mu();
    const Mat2 cov = score.cov();
    std::vector<double> r(basis.size());
    for (size_t j = 0; j < r.size(); ++j) {
        r[j] = gaussian_pdf(mu, basis.centers2d[j], cov + basis.widths2d[j]);
    }
    return r;
}

Matrix jacobian_softmax(const CanonicalScore1D& score, const RBFBasis& basis) {
    require_1d(basis);
    const double mu = score.mu(), sigma2 = score.sigma2();
    Matrix jac(2, basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
        const double muj = basis.centers1d[j], s2j = basis.widths1d[j];
        const double stilde = gaussian_pdf(mu, muj, sigma2 + s2j);
        const double s2t = 1.0 / (1.0 / sigma2 + 1.0 / s2j);
        const double mut = s2t * (mu / sigma2 + muj / s2j);
        jac(0, j) = stilde * (mut - mu);
        jac(1, j) = stilde * (s2t + mut * mut - sigma2 - mu * mu);
    }
    return jac;
}

Matrix jacobian_softmax(const CanonicalScore2D& score, const RBFBasis& basis) {
    require_2d(basis);
    const Vec2 mu = score.mu();
    const Mat2 cov = score.cov();
    const Mat2 prec = cov.inverse();
    Matrix jac(6, basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
        const Vec2& muj = basis.centers2d[j];
        const Mat2& covj = basis.widths2d[j];
        const double stilde = gaussian_pdf(mu, muj, cov + covj);
        const Mat2 st = (prec + covj.inverse()).inverse();
        const Vec2 mut = st * (prec * mu + covj.inverse() * muj);
        const Vec2 lin = stilde * (mut - mu);
        const Mat2 quad = stilde * (st + Mat2::outer(mut, mut) - cov - Mat2::outer(mu, mu));
        jac(0, j) = lin.x;
        jac(1, j) = lin.y;
        jac(2, j) = quad.a;
        jac(3, j) = quad.b;
        jac(4, j) = quad.c;
        jac(5, j) = quad.d;
    }
    return jac;
}

std::vector<double> forward_sparsemax_1d(const CanonicalScore1D& score, const RBFBasis& basis) {
    require_1d(basis);
    const double mu = score.mu(), sigma2 = score.sigma2();
    const SparseDensity p = make_truncated_parabola(mu, sigma2);
    const double a = 0.5 * p.support1d().length();
    const double lambda = p.lambda();
    std::vector<double> r(basis.size());
    for (size_t j = 0; j < r.size(); ++j) {
        const double muj = basis.centers1d[j];
        const double sj = std::sqrt(basis.widths1d[j]);
        const double u = (mu - muj - a) / sj, v = (mu - muj + a) / sj;
        const auto m = std_normal_moments(u, v);
        const double d = muj - mu;
        r[j] = -lambda * m.i0 -
               (sj * sj * m.i2 + 2.0 * sj * d * m.i1 + d * d * m.i0) / (2.0 * sigma2);
    }
    return r;
}

Matrix jacobian_sparsemax_1d(const CanonicalScore1D& score, const RBFBasis& basis) {
    require_1d(basis);
    const double mu = score.mu(), sigma2 = score.sigma2();
    const SparseDensity p = make_truncated_parabola(mu, sigma2);
    const double a = 0.5 * p.support1d().length();
    Matrix jac(2, basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
        const double muj = basis.centers1d[j];
        const double sj = std::sqrt(basis.widths1d[j]);
        const double u = (mu - muj - a) / sj, v = (mu - muj + a) / sj;
        const auto m = std_normal_moments(u, v);
        const double nu = std_normal_pdf(u), nv = std_normal_pdf(v);
        // cov_{p,0}(t, psi_j) and cov_{p,0}(t^2, psi_j), the beta = 0 escort
        // being uniform on [mu - a, mu + a]
        jac(0, j) = (muj - mu) * m.i0 + sj * m.i1;
        jac(1, j) = (muj * muj - mu * mu + sj * sj - a * a / 3.0) * m.i0 -
                    sj * (mu + muj + a) * nv + sj * (mu + muj - a) * nu;
    }
    return jac;
}

namespace {

// Shared per-(score, basis function, angle) quantities of the polar
// reduction: the unit-disc reparametrization u = c^{-1} Sigma^{-1/2}(t - mu)
// followed by u = a(theta) r.
struct PolarScore {
    double lambda, c;
    Vec2 mu;
    Mat2 cov, half, half_inv;
};

PolarScore polar_score(const CanonicalScore2D& score) {
    PolarScore ps;
    ps.mu = score.mu();
    ps.cov = score.cov();
    const SparseDensity p = make_truncated_paraboloid(ps.mu, ps.cov);
    ps.lambda = p.lambda();
    ps.c = std::sqrt(-2.0 * ps.lambda);
    ps.half = sym_sqrt(ps.cov);
    ps.half_inv = ps.half.inverse();
    return ps;
}

struct AngleTerms {
    double stilde, sigma, r0, u, v, nu, nv, e0;
    Vec2 dir;  // (cos, sin)
};

AngleTerms angle_terms(const Vec2& mut, const Mat2& sti, double det_st, double theta) {
    AngleTerms at;
    at.dir = {std::cos(theta), std::sin(theta)};
    const Vec2 stia = sti * at.dir;
    const double s2 = 1.0 / at.dir.dot(stia);
    at.sigma = std::sqrt(s2);
    const double proj = stia.dot(mut);
    at.r0 = s2 * proj;
    const double q = mut.dot(sti * mut) - s2 * proj * proj;
    at.stilde = at.sigma / std::sqrt(2.0 * M_PI * det_st) * std::exp(-0.5 * q);
    at.u = -at.r0 / at.sigma;
    at.v = (1.0 - at.r0) / at.sigma;
    at.nu = std_normal_pdf(at.u);
    at.nv = std_normal_pdf(at.v);
    at.e0 = 0.5 * (erf(at.v * kInvSqrt2) - erf(at.u * kInvSqrt2));
    return at;
}

double forward_one_2d(const PolarScore& ps, const Vec2& muj, const Mat2& covj, int nodes) {
    const Vec2 mut = (1.0 / ps.c) * (ps.half_inv * (muj - ps.mu));
    const Mat2 st = (1.0 / (ps.c * ps.c)) * (ps.half_inv * covj * ps.half_inv);
    const Mat2 sti = st.inverse();
    const double det_st = st.det();
    double acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const auto at = angle_terms(mut, sti, det_st, 2.0 * M_PI * (k + 0.5) / nodes);
        const double s = at.sigma, s2 = s * s, r0 = at.r0;
        const double f = (2.0 * s * s2 + r0 * r0 * s + r0 * s) * at.nv -
                         (2.0 * s * s2 + r0 * r0 * s - s) * at.nu -
                         (r0 * r0 * r0 + (3.0 * s2 - 1.0) * r0) * at.e0;
        acc += at.stilde * f;
    }
    return -ps.lambda * acc * (2.0 * M_PI / nodes);
}

struct BackwardOne2D {
    Vec2 cov_t;
    Mat2 cov_tt;
};

BackwardOne2D backward_one_2d(const PolarScore& ps, const Vec2& muj, const Mat2& covj,
                              int nodes) {
    const Vec2 mut = (1.0 / ps.c) * (ps.half_inv * (muj - ps.mu));
    const Mat2 st = (1.0 / (ps.c * ps.c)) * (ps.half_inv * covj * ps.half_inv);
    const Mat2 sti = st.inverse();
    const double det_st = st.det();
    Vec2 ig{};
    double ih = 0.0;
    Mat2 im{};
    for (int k = 0; k < nodes; ++k) {
        const auto at = angle_terms(mut, sti, det_st, 2.0 * M_PI * (k + 0.5) / nodes);
        const double s = at.sigma, s2 = s * s, r0 = at.r0;
        const Vec2 w = ps.c * (ps.half * at.dir);
        // G: int_0^1 r (w r + mu) N(r; r0, s^2)
        const Vec2 g = (w * (s * r0) + ps.mu * s) * at.nu -
                       (w * (s * (1.0 + r0)) + ps.mu * s) * at.nv +
                       (w * (s2 + r0 * r0) + ps.mu * r0) * at.e0;
        // H: int_0^1 r N(r; r0, s^2)
        const double h = s * (at.nu - at.nv) + r0 * at.e0;
        // M: int_0^1 (r^3 A + r^2 B + r C) N(r; r0, s^2)
        const Mat2 A = Mat2::outer(w, w);
        const Mat2 B = Mat2::outer(w, ps.mu) + Mat2::outer(ps.mu, w);
        const Mat2 C = Mat2::outer(ps.mu, ps.mu);
        const Mat2 a_t = s * s2 * A;
        const Mat2 b_t = s2 * (3.0 * r0 * A + B);
        const Mat2 c_t = s * (3.0 * r0 * r0 * A + 2.0 * r0 * B + C);
        const Mat2 d_t = r0 * r0 * r0 * A + r0 * r0 * B + r0 * C;
        const Mat2 m = ((2.0 + at.u * at.u) * a_t + at.u * b_t + c_t) * at.nu -
                       ((2.0 + at.v * at.v) * a_t + at.v * b_t + c_t) * at.nv +
                       (b_t + d_t) * at.e0;
        ig = ig + at.stilde * g;
        ih += at.stilde * h;
        im = im + at.stilde * m;
    }
    const double hstep = 2.0 * M_PI / nodes;
    ig = ig * hstep;
    ih *= hstep;
    im = im * hstep;
    const double area = -2.0 * M_PI * ps.lambda * std::sqrt(ps.cov.det());
    BackwardOne2D out;
    out.cov_t = ig - ps.mu * ih;
    out.cov_tt = im - (Mat2::outer(ps.mu, ps.mu) + ps.cov * (1.0 / area)) * ih;
    return out;
}

}  // namespace

std::vector<double> forward_sparsemax_2d(const CanonicalScore2D& score, const RBFBasis& basis,
                                         int angular_nodes) {
    require_2d(basis);
    if (angular_nodes < 64) throw std::invalid_argument("forward_sparsemax_2d: need >= 64 nodes");
    const PolarScore ps = polar_score(score);
    std::vector<double> r(basis.size());
    for (size_t j = 0; j < r.size(); ++j) {
        const double coarse = forward_one_2d(ps, basis.centers2d[j], basis.widths2d[j],
                                             angular_nodes);
        const double fine = forward_one_2d(ps, basis.centers2d[j], basis.widths2d[j],
                                           2 * angular_nodes);
        if (std::abs(fine - coarse) > kAngularDriftTol) {
            throw ToleranceNotReachedError("forward_sparsemax_2d: angular refinement drifted");
        }
        r[j] = coarse;
    }
    return r;
}

Matrix jacobian_sparsemax_2d(const CanonicalScore2D& score, const RBFBasis& basis,
                             int angular_nodes) {
    require_2d(basis);
    if (angular_nodes < 64) throw std::invalid_argument("jacobian_sparsemax_2d: need >= 64 nodes");
    const PolarScore ps = polar_score(score);
    Matrix jac(6, basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
        const auto coarse = backward_one_2d(ps, basis.centers2d[j], basis.widths2d[j],
                                            angular_nodes);
        const auto fine = backward_one_2d(ps, basis.centers2d[j], basis.widths2d[j],
                                          2 * angular_nodes);
        const Mat2 dtt = fine.cov_tt - coarse.cov_tt;
        const double drift = std::max(
            {std::abs(fine.cov_t.x - coarse.cov_t.x), std::abs(fine.cov_t.y - coarse.cov_t.y),
             std::abs(dtt.a), std::abs(dtt.b), std::abs(dtt.c), std::abs(dtt.d)});
        if (drift > kAngularDriftTol) {
            throw ToleranceNotReachedError("jacobian_sparsemax_2d: angular refinement drifted");
        }
        jac(0, j) = coarse.cov_t.x;
        jac(1, j) = coarse.cov_t.y;
        jac(2, j) = coarse.cov_tt.a;
        jac(3, j) = coarse.cov_tt.b;
        jac(4, j) = coarse.cov_tt.c;
        jac(5, j) = coarse.cov_tt.d;
    }
    return jac;
}

namespace {

std::vector<double> context_of(const Matrix* B, const std::vector<double>& r) {
    if (B == nullptr) return {};
    if (B->cols() != r.size()) throw std::invalid_argument("attend: B column count != basis size");
    return (*B) * r;
}

}  // namespace

AttentionResult attend(const CanonicalScore1D& score, const RBFBasis& basis, const Matrix* B,
                       double alpha) {
    AttentionResult out;
    if (std::abs(alpha - 1.0) < 1e-12) {
        out.r = forward_softmax(score, basis);
        out.jacobian = jacobian_softmax(score, basis);
    } else if (std::abs(alpha - 2.0) < 1e-12) {
        out.r = forward_sparsemax_1d(score, basis);
        out.jacobian = jacobian_sparsemax_1d(score, basis);
    } else {
        throw std::domain_error("attend: alpha must be 1 or 2");
    }
    out.context = context_of(B, out.r);
    return out;
}

AttentionResult attend(const CanonicalScore2D& score, const RBFBasis& basis, const Matrix* B,
                       double alpha, int angular_nodes) {
    AttentionResult out;
    if (std::abs(alpha - 1.0) < 1e-12) {
        out.r = forward_softmax(score, basis);
        out.jacobian = jacobian_softmax(score, basis);
    } else if (std::abs(alpha - 2.0) < 1e-12) {
        out.r = forward_sparsemax_2d(score, basis, angular_nodes);
        out.jacobian = jacobian_sparsemax_2d(score, basis, angular_nodes);
    } else {
        throw std::domain_error("attend: alpha must be 1 or 2");
    }
    out.context = context_of(B, out.r);
    return out;
}

std::vector<double> backward_theta(const Matrix& jacobian, const Matrix& B,
                                   const std::vector<double>& dl_dc) {
    const std::vector<double> dl_dr = B.transpose() * dl_dc;
    return jacobian * dl_dr;
}

}  // namespace contattn
