#pragma once

#include <cstdint>
#include <vector>

#include "contattn/matrix.hpp"

namespace contattn {

struct DemoConfig {
    double alpha = 1.0;  // 1 or 2; picks both the discrete map and the density
    std::uint64_t seed = 42;
    int encoder_dim = 8;   // D
    int length = 40;       // L
    int basis_size = 16;   // N
    double rbf_sigma = 0.1;
    double ridge = 1e-6;
    double fd_step = 1e-6;  // verification finite-difference step
};

// Synthetic combined-attention pipeline: random H and scores, discrete
// softmax/sparsemax, moment matching, continuous attention, summed context
// vectors, and an end-to-end gradient check of sum(c) w.r.t. the discrete
// scores.
struct DemoRun {
    std::vector<double> scores;          // f, length L
    std::vector<double> discrete_probs;  // rho(f)
    std::vector<double> locations;       // t_l = l / L
    std::vector<double> density_grid;    // continuous density at the locations
    double mu = 0.0, sigma2 = 0.0;       // moment-matched parameters
    std::vector<double> context_discrete;
    std::vector<double> context_continuous;
    std::vector<double> context;  // sum of the two
    std::vector<double> grad_scores;     // analytic d sum(c) / d f
    std::vector<double> grad_scores_fd;  // central differences
    double max_grad_delta = 0.0;
};

DemoRun run_demo(const DemoConfig& config);

}  // namespace contattn
