#include "contattn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "contattn/errors.hpp"

namespace contattn {

namespace {

constexpr double kGaussianWindowStd = 10.0;

Interval integration_window_1d(const SparseDensity& p) {
    if (p.compact_support()) return p.support1d();
    const double sd = std::sqrt(p.scale1d());
    return {p.loc1d() - kGaussianWindowStd * sd, p.loc1d() + kGaussianWindowStd * sd};
}

// Sweeps the paraboloid support with an outer rule over the bounding box's
// y-extent and an inner rule over the exact ellipse chord, accumulating all
// requested integrands in one pass.
void sweep_support_2d(const SparseDensity& p, int nodes,
                      const std::function<void(const Vec2&, double)>& accumulate) {
    const auto& e = p.support2d();
    const Rect box = e.bounding_box();
    const auto& gl = gauss_legendre(nodes);
    const double ym = 0.5 * (box.ylo + box.yhi), yh = 0.5 * (box.yhi - box.ylo);
    for (int i = 0; i < nodes; ++i) {
        const double y = ym + yh * gl.nodes[i];
        const auto chord = e.chord_x(y);
        if (!chord) continue;
        const double xm = 0.5 * (chord->lo + chord->hi), xh = 0.5 * chord->length();
        for (int j = 0; j < nodes; ++j) {
            const double w = gl.weights[i] * yh * gl.weights[j] * xh;
            accumulate({xm + xh * gl.nodes[j], y}, w);
        }
    }
}

void sweep_gaussian_2d(const SparseDensity& p, int nodes,
                       const std::function<void(const Vec2&, double)>& accumulate) {
    const Mat2 cov = p.cov2d();
    const Vec2 mu = p.loc2d();
    const double hx = kGaussianWindowStd * std::sqrt(cov.a);
    const double hy = kGaussianWindowStd * std::sqrt(cov.d);
    const auto& gl = gauss_legendre(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double x = mu.x + hx * gl.nodes[i];
        for (int j = 0; j < nodes; ++j) {
            const double w = gl.weights[i] * hx * gl.weights[j] * hy;
            accumulate({x, mu.y + hy * gl.nodes[j]}, w);
        }
    }
}

void sweep_2d(const SparseDensity& p, int nodes,
              const std::function<void(const Vec2&, double)>& accumulate) {
    if (p.compact_support()) {
        sweep_support_2d(p, nodes, accumulate);
    } else {
        sweep_gaussian_2d(p, nodes, accumulate);
    }
}

}  // namespace

// Uniform pre-subdivision so that narrow integrand features (a thin RBF in a
// wide window) cannot slip between the first probe nodes of the adaptive rule.
namespace {

std::vector<double> uniform_splits(double lo, double hi, int panels) {
    std::vector<double> s;
    s.reserve(panels - 1);
    for (int k = 1; k < panels; ++k) s.push_back(lo + (hi - lo) * k / panels);
    return s;
}

}  // namespace

double expectation_quadrature(const SparseDensity& p, const std::function<double(double)>& g,
                              const QuadratureSpec& spec) {
    if (p.dimension() != 1) throw std::invalid_argument("expectation_quadrature: 1D density required");
    const Interval w = integration_window_1d(p);
    QuadratureSpec panel_spec = spec;
    panel_spec.absolute_tolerance = spec.absolute_tolerance / 64.0;
    return integrate_adaptive_split([&](double t) { return p(t) * g(t); }, w.lo, w.hi,
                                    uniform_splits(w.lo, w.hi, 64), panel_spec);
}

double expectation_quadrature(const SparseDensity& p,
                              const std::function<double(const Vec2&)>& g, int nodes_per_axis) {
    if (p.dimension() != 2) throw std::invalid_argument("expectation_quadrature: 2D density required");
    double acc = 0.0;
    sweep_2d(p, nodes_per_axis, [&](const Vec2& t, double w) { acc += w * p(t) * g(t); });
    return acc;
}

namespace {

double escort_weight(const SparseDensity& p, double t, double beta) {
    const double v = p(t);
    return v > 0.0 ? std::pow(v, beta) : 0.0;
}

double escort_weight(const SparseDensity& p, const Vec2& t, double beta) {
    const double v = p(t);
    return v > 0.0 ? std::pow(v, beta) : 0.0;
}

void check_beta(const SparseDensity& p, double beta) {
    if (beta != 0.0 && beta != 1.0) {
        throw std::invalid_argument("generalized_cov_quadrature: beta must be 0 or 1");
    }
    if (beta == 0.0 && !p.compact_support()) {
        throw InfiniteSupportError("generalized_cov_quadrature: beta = 0 needs finite support");
    }
}

Matrix assemble_cov(const Matrix& int_phipsi, const std::vector<double>& int_phi,
                    const std::vector<double>& int_psi, double z) {
    Matrix cov = int_phipsi;
    for (std::size_t i = 0; i < cov.rows(); ++i)
        for (std::size_t j = 0; j < cov.cols(); ++j) cov(i, j) -= int_phi[i] * int_psi[j] / z;
    return cov;
}

}  // namespace

Matrix generalized_cov_quadrature(const SparseDensity& p, const VecFn1D& phi, const VecFn1D& psi,
                                  double beta, const QuadratureSpec& spec) {
    check_beta(p, beta);
    const Interval w = integration_window_1d(p);
    const std::size_t m = phi(w.lo).size(), n = psi(w.lo).size();

    // the 0-escort is an indicator that jumps exactly at the support edge;
    // the tamed rule's vanishing endpoint Jacobian absorbs it. The tamed
    // integral runs in the substituted coordinate, pre-split uniformly so
    // narrow basis functions cannot hide between probe nodes.
    const double mid = 0.5 * (w.lo + w.hi), half = 0.5 * (w.hi - w.lo);
    QuadratureSpec panel_spec = spec;
    panel_spec.absolute_tolerance = spec.absolute_tolerance / 64.0;
    auto integral = [&](const std::function<double(double)>& h) {
        return integrate_adaptive_split(
            [&](double s) {
                const double t = mid - half * std::cos(M_PI * s);
                return escort_weight(p, t, beta) * h(t) * half * M_PI * std::sin(M_PI * s);
            },
            0.0, 1.0, uniform_splits(0.0, 1.0, 64), panel_spec);
    };

    const double z = integral([](double) { return 1.0; });
    Matrix int_phipsi(m, n);
    std::vector<double> int_phi(m), int_psi(n);
    for (std::size_t i = 0; i < m; ++i) {
        int_phi[i] = integral([&](double t) { return phi(t)[i]; });
        for (std::size_t j = 0; j < n; ++j) {
            int_phipsi(i, j) = integral([&](double t) { return phi(t)[i] * psi(t)[j]; });
        }
    }
    for (std::size_t j = 0; j < n; ++j) int_psi[j] = integral([&](double t) { return psi(t)[j]; });
    return assemble_cov(int_phipsi, int_phi, int_psi, z);
}

Matrix generalized_cov_quadrature(const SparseDensity& p, const VecFn2D& phi, const VecFn2D& psi,
                                  double beta, int nodes_per_axis) {
    check_beta(p, beta);
    const Vec2 probe = p.compact_support() ? p.support2d().center : p.loc2d();
    const std::size_t m = phi(probe).size(), n = psi(probe).size();

    double z = 0.0;
    Matrix int_phipsi(m, n);
    std::vector<double> int_phi(m, 0.0), int_psi(n, 0.0);
    sweep_2d(p, nodes_per_axis, [&](const Vec2& t, double w) {
        const double ew = w * escort_weight(p, t, beta);
        if (ew == 0.0) return;
        z += ew;
        const auto ph = phi(t);
        const auto ps = psi(t);
        for (std::size_t i = 0; i < m; ++i) {
            int_phi[i] += ew * ph[i];
            for (std::size_t j = 0; j < n; ++j) int_phipsi(i, j) += ew * ph[i] * ps[j];
        }
        for (std::size_t j = 0; j < n; ++j) int_psi[j] += ew * ps[j];
    });
    return assemble_cov(int_phipsi, int_phi, int_psi, z);
}

Matrix finite_diff_jacobian(const std::function<std::vector<double>(const std::vector<double>&)>& f,
                            const std::vector<double>& x, const FiniteDiffSpec& spec) {
    if (!(spec.step > 0.0)) throw std::invalid_argument("finite_diff_jacobian: step must be positive");
    std::vector<double> xp = x;
    Matrix j;
    for (std::size_t col = 0; col < x.size(); ++col) {
        xp[col] = x[col] + spec.step;
        const auto fp = f(xp);
        xp[col] = x[col] - spec.step;
        const auto fm = f(xp);
        xp[col] = x[col];
        if (j.rows() == 0) j = Matrix(fp.size(), x.size());
        for (std::size_t row = 0; row < fp.size(); ++row) {
            j(row, col) = (fp[row] - fm[row]) / (2.0 * spec.step);
        }
    }
    return j;
}

double finite_diff_derivative(const std::function<double(double)>& f, double x,
                              const FiniteDiffSpec& spec) {
    return (f(x + spec.step) - f(x - spec.step)) / (2.0 * spec.step);
}

SimplexVector simplex_projection_bruteforce(const std::vector<double>& f) {
    const std::size_t L = f.size();
    if (L == 0) throw std::invalid_argument("simplex_projection_bruteforce: empty input");
    if (L > 20) throw TooLargeError("simplex_projection_bruteforce: L > 20");

    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<double> best;
    for (std::uint32_t mask = 1; mask < (1u << L); ++mask) {
        double sum = 0.0;
        int k = 0;
        for (std::size_t i = 0; i < L; ++i) {
            if (mask & (1u << i)) {
                sum += f[i];
                ++k;
            }
        }
        const double tau = (sum - 1.0) / k;
        // feasibility: strictly positive on the candidate support, KKT
        // threshold respected off it
        bool ok = true;
        for (std::size_t i = 0; i < L && ok; ++i) {
            if (mask & (1u << i)) {
                ok = f[i] - tau > 0.0;
            } else {
                ok = f[i] - tau <= 1e-12;
            }
        }
        if (!ok) continue;
        double obj = 0.0;
        std::vector<double> p(L, 0.0);
        for (std::size_t i = 0; i < L; ++i) {
            if (mask & (1u << i)) {
                p[i] = f[i] - tau;
                obj += tau * tau;
            } else {
                obj += f[i] * f[i];
            }
        }
        if (obj < best_obj) {
            best_obj = obj;
            best = std::move(p);
        }
    }
    SimplexVector out;
    out.probs = std::move(best);
    out.support_mask.resize(L);
    for (std::size_t i = 0; i < L; ++i) out.support_mask[i] = out.probs[i] > 0.0;
    return out;
}

}  // namespace contattn
