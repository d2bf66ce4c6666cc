#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "contattn/attention.hpp"
#include "contattn/densities.hpp"
#include "contattn/discrete.hpp"
#include "contattn/oracle.hpp"
#include "contattn/rng.hpp"

using namespace contattn;

namespace {

struct Config {
    CanonicalScore1D score1d;
    CanonicalScore2D score2d;
    RBFBasis basis1d;
    RBFBasis basis2d;
};

std::vector<Config> make_configs(int n) {
    Rng rng(55);
    std::vector<Config> configs;
    for (int k = 0; k < n; ++k) {
        Config c{
            CanonicalScore1D::from_moments(rng.uniform(-1, 1), rng.uniform(0.3, 1.5)),
            CanonicalScore2D::from_moments({rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)},
                                           Mat2::diag(rng.uniform(0.4, 1.2), rng.uniform(0.4, 1.2))),
            RBFBasis::make_1d({rng.uniform(-1, 1), rng.uniform(-1, 1)},
                              {rng.uniform(0.1, 0.5), rng.uniform(0.1, 0.5)}),
            RBFBasis::make_2d({{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}},
                              {Mat2::diag(rng.uniform(0.1, 0.5), rng.uniform(0.1, 0.5))}),
        };
        configs.push_back(std::move(c));
    }
    return configs;
}

}  // namespace

TEST_CASE("forward and jacobian paths are reentrant across worker threads") {
    const int kConfigs = 12;
    const auto configs = make_configs(kConfigs);

    // serial reference
    std::vector<std::vector<double>> serial(kConfigs);
    for (int k = 0; k < kConfigs; ++k) {
        const auto& c = configs[k];
        auto& out = serial[k];
        for (double v : forward_softmax(c.score1d, c.basis1d)) out.push_back(v);
        for (double v : forward_sparsemax_1d(c.score1d, c.basis1d)) out.push_back(v);
        for (double v : forward_sparsemax_2d(c.score2d, c.basis2d, 128)) out.push_back(v);
        const Matrix j = jacobian_sparsemax_1d(c.score1d, c.basis1d);
        for (double v : j.data()) out.push_back(v);
        out.push_back(make_truncated_parabola(c.score1d.mu(), c.score1d.sigma2()).lambda());
    }

    std::vector<std::vector<double>> parallel(kConfigs);
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&, t]() {
            for (int k = t; k < kConfigs; k += 4) {
                const auto& c = configs[k];
                auto& out = parallel[k];
                for (double v : forward_softmax(c.score1d, c.basis1d)) out.push_back(v);
                for (double v : forward_sparsemax_1d(c.score1d, c.basis1d)) out.push_back(v);
                for (double v : forward_sparsemax_2d(c.score2d, c.basis2d, 128)) out.push_back(v);
                const Matrix j = jacobian_sparsemax_1d(c.score1d, c.basis1d);
                for (double v : j.data()) out.push_back(v);
                out.push_back(make_truncated_parabola(c.score1d.mu(), c.score1d.sigma2()).lambda());
            }
        });
    }
    for (auto& w : workers) w.join();

    for (int k = 0; k < kConfigs; ++k) {
        REQUIRE(parallel[k].size() == serial[k].size());
        for (size_t i = 0; i < serial[k].size(); ++i) CHECK(parallel[k][i] == serial[k][i]);
    }
}

TEST_CASE("discrete transformations are reentrant") {
    Rng rng(56);
    std::vector<std::vector<double>> inputs(16);
    for (auto& f : inputs) {
        f.resize(8);
        for (double& v : f) v = rng.uniform(-2, 2);
    }
    std::vector<std::vector<double>> serial(16), parallel(16);
    for (int k = 0; k < 16; ++k) serial[k] = sparsemax(inputs[k]).probs;
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&, t]() {
            for (int k = t; k < 16; k += 4) parallel[k] = sparsemax(inputs[k]).probs;
        });
    }
    for (auto& w : workers) w.join();
    for (int k = 0; k < 16; ++k) CHECK(parallel[k] == serial[k]);
}
