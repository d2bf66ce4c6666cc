#pragma once

#include <functional>
#include <vector>

namespace contattn {

struct QuadratureSpec {
    double absolute_tolerance = 1e-10;
    int max_subdivisions = 40;   // recursion depth of the adaptive rule
    int fixed_node_count = 64;   // per axis, for fixed-order rules
};

struct RootSpec {
    double tolerance = 1e-12;
    int max_iterations = 200;
};

using Fn1D = std::function<double(double)>;
using Fn2D = std::function<double(double, double)>;

// Adaptive Simpson on [a, b]. Throws ToleranceNotReachedError when the
// subdivision depth is exhausted before the per-interval error estimate
// falls under the budget.
double integrate_adaptive(const Fn1D& f, double a, double b, const QuadratureSpec& spec = {});

// Same, but forces subdivision at the given interior points first. Callers
// integrating truncated densities pass the support endpoints here so the
// adaptive rule never straddles a kink.
double integrate_adaptive_split(const Fn1D& f, double a, double b,
                                const std::vector<double>& interior_splits,
                                const QuadratureSpec& spec = {});

// Adaptive integration under the substitution t = mid - half cos(pi s). The
// Jacobian vanishing at the endpoints absorbs boundary misbehavior such as
// the sqrt kink of p^beta or the indicator jump of a 0-escort at the edge
// of a density's support.
double integrate_endpoint_tamed(const Fn1D& f, double a, double b,
                                const QuadratureSpec& spec = {});

struct Rect {
    double xlo, xhi, ylo, yhi;
};

// Tensor-product Gauss-Legendre rule with nodes_per_axis points per axis.
double integrate_fixed_2d(const Fn2D& f, const Rect& domain, int nodes_per_axis);

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

// Fixed-order Gauss-Legendre on [a, b].
double integrate_fixed_1d(const Fn1D& f, double a, double b, int nodes);

// Bisection; requires f(lo) * f(hi) <= 0, else NoBracketError. Stops when
// |f(mid)| <= tolerance or the bracket width falls under tolerance.
double bisect(const Fn1D& f, double lo, double hi, const RootSpec& spec = {});

}  // namespace contattn
