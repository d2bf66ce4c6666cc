#include "contattn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "contattn/errors.hpp"

namespace contattn {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const Fn1D& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;  // Richardson correction
    }
    if (depth <= 0) {
        throw ToleranceNotReachedError("integrate_adaptive: subdivision limit reached");
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const Fn1D& f, double a, double b, const QuadratureSpec& spec) {
    if (!(a <= b)) throw std::invalid_argument("integrate_adaptive: requires a <= b");
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(fa, fm, fb, b - a);
    return adaptive_step(f, a, b, fa, fm, fb, whole, spec.absolute_tolerance,
                         spec.max_subdivisions);
}

double integrate_adaptive_split(const Fn1D& f, double a, double b,
                                const std::vector<double>& interior_splits,
                                const QuadratureSpec& spec) {
    std::vector<double> pts{a};
    for (double s : interior_splits) {
        if (s > a && s < b) pts.push_back(s);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        total += integrate_adaptive(f, pts[i], pts[i + 1], spec);
    }
    return total;
}

double integrate_endpoint_tamed(const Fn1D& f, double a, double b, const QuadratureSpec& spec) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    return integrate_adaptive(
        [&](double s) {
            const double t = mid - half * std::cos(M_PI * s);
            return f(t) * half * M_PI * std::sin(M_PI * s);
        },
        0.0, 1.0, spec);
}

const GaussLegendre& gauss_legendre(int n) {
    if (n < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
    static std::map<int, GaussLegendre> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration from the Chebyshev initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(gl)).first->second;
}

double integrate_fixed_1d(const Fn1D& f, double a, double b, int nodes) {
    const auto& gl = gauss_legendre(nodes);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) {
        sum += gl.weights[i] * f(mid + half * gl.nodes[i]);
    }
    return half * sum;
}

double integrate_fixed_2d(const Fn2D& f, const Rect& domain, int nodes_per_axis) {
    if (nodes_per_axis < 8) {
        throw std::invalid_argument("integrate_fixed_2d: need at least 8 nodes per axis");
    }
    const auto& gl = gauss_legendre(nodes_per_axis);
    const double xm = 0.5 * (domain.xlo + domain.xhi), xh = 0.5 * (domain.xhi - domain.xlo);
    const double ym = 0.5 * (domain.ylo + domain.yhi), yh = 0.5 * (domain.yhi - domain.ylo);
    double total = 0.0;
    for (int i = 0; i < nodes_per_axis; ++i) {
        const double x = xm + xh * gl.nodes[i];
        double row = 0.0;
        for (int j = 0; j < nodes_per_axis; ++j) {
            row += gl.weights[j] * f(x, ym + yh * gl.nodes[j]);
        }
        total += gl.weights[i] * row;
    }
    return total * xh * yh;
}

double bisect(const Fn1D& f, double lo, double hi, const RootSpec& spec) {
    if (!(lo <= hi)) throw std::invalid_argument("bisect: requires lo <= hi");
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw NoBracketError("bisect: f(lo) and f(hi) have the same sign");
    for (int it = 0; it < spec.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) <= spec.tolerance || (hi - lo) <= spec.tolerance) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    if ((hi - lo) <= spec.tolerance) return 0.5 * (lo + hi);
    throw ToleranceNotReachedError("bisect: iteration limit reached");
}

}  // namespace contattn
