#include "contattn/demo.hpp"

#include <cmath>
#include <stdexcept>

#include "contattn/attention.hpp"
#include "contattn/discrete.hpp"
#include "contattn/rng.hpp"
#include "contattn/value.hpp"

namespace contattn {

namespace {

std::vector<double> apply_rho(const std::vector<double>& f, double alpha) {
    return alpha == 2.0 ? sparsemax(f).probs : softmax(f).probs;
}

// sum(c_disc + c_cont) for a fixed H/B, as a function of the scores alone
double pipeline_sum(const std::vector<double>& f, double alpha, const Matrix& H,
                    const Matrix& B, const std::vector<double>& locations,
                    const RBFBasis& basis) {
    const auto p = apply_rho(f, alpha);
    const std::vector<double> c_disc = H * p;
    const auto mm = moment_match_from_discrete(p, locations);
    const auto score = theta_from_moments(mm.mu, mm.sigma2);
    const auto att = attend(score, basis, &B, alpha);
    double total = 0.0;
    for (double v : c_disc) total += v;
    for (double v : att.context) total += v;
    return total;
}

}  // namespace

DemoRun run_demo(const DemoConfig& cfg) {
    if (cfg.alpha != 1.0 && cfg.alpha != 2.0) throw std::domain_error("run_demo: alpha must be 1 or 2");
    Rng rng(cfg.seed);

    const int D = cfg.encoder_dim, L = cfg.length;
    Matrix H(D, L);
    for (auto& v : H.data()) v = rng.normal();
    std::vector<double> f(L);
    for (auto& v : f) v = rng.normal();

    DemoRun run;
    run.scores = f;
    run.locations = unit_interval_locations(L);

    const RBFBasis basis = RBFBasis::linear_1d(cfg.basis_size, cfg.rbf_sigma);
    const ValueFunction value = fit({H, run.locations}, basis, cfg.ridge);
    const Matrix& B = value.B;

    run.discrete_probs = apply_rho(f, cfg.alpha);
    run.context_discrete = H * run.discrete_probs;

    const auto mm = moment_match_from_discrete(run.discrete_probs, run.locations);
    run.mu = mm.mu;
    run.sigma2 = mm.sigma2;
    const auto score = theta_from_moments(mm.mu, mm.sigma2);
    const auto att = attend(score, basis, &B, cfg.alpha);
    run.context_continuous = att.context;

    run.context.resize(D);
    for (int i = 0; i < D; ++i) run.context[i] = run.context_discrete[i] + run.context_continuous[i];

    const SparseDensity density = cfg.alpha == 2.0 ? make_truncated_parabola(mm.mu, mm.sigma2)
                                                   : make_gaussian_1d(mm.mu, mm.sigma2);
    run.density_grid.resize(L);
    for (int l = 0; l < L; ++l) run.density_grid[l] = density(run.locations[l]);

    // analytic gradient of sum(c) through both branches
    std::vector<double> ones_d(D, 1.0);
    const std::vector<double> dsum_dc_disc = H.transpose() * ones_d;  // per p_l
    const std::vector<double> g_theta = backward_theta(att.jacobian, B, ones_d);  // (2,)
    // theta(mu, sigma2) chain: theta1 = mu/s2, theta2 = -1/(2 s2)
    const double s2 = mm.sigma2, mu = mm.mu;
    const double dsum_dmu = g_theta[0] / s2;
    const double dtheta1_ds2 = -mu / (s2 * s2);
    const double dtheta2_ds2 = 0.5 / (s2 * s2);
    const double dsum_ds2 = g_theta[0] * dtheta1_ds2 + g_theta[1] * dtheta2_ds2;

    std::vector<double> dsum_dp(L);
    for (int l = 0; l < L; ++l) {
        const double t = run.locations[l];
        const double dmu_dp = t;
        const double ds2_dp = t * t - 2.0 * mu * t;
        dsum_dp[l] = dsum_dc_disc[l] + dsum_dmu * dmu_dp + dsum_ds2 * ds2_dp;
    }
    const Matrix j_rho = jacobian_discrete(f, cfg.alpha == 2.0 ? RhoKind::Sparsemax
                                                               : RhoKind::Softmax);
    run.grad_scores = j_rho.transpose() * dsum_dp;

    // central differences of the whole pipeline
    const double h = cfg.fd_step;
    run.grad_scores_fd.resize(L);
    std::vector<double> fp = f;
    for (int l = 0; l < L; ++l) {
        fp[l] = f[l] + h;
        const double up = pipeline_sum(fp, cfg.alpha, H, B, run.locations, basis);
        fp[l] = f[l] - h;
        const double dn = pipeline_sum(fp, cfg.alpha, H, B, run.locations, basis);
        fp[l] = f[l];
        run.grad_scores_fd[l] = (up - dn) / (2.0 * h);
        run.max_grad_delta =
            std::max(run.max_grad_delta, std::abs(run.grad_scores_fd[l] - run.grad_scores[l]));
    }
    return run;
}

}  // namespace contattn
