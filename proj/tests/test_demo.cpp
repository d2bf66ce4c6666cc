#include <doctest.h>

#include <cmath>

#include "contattn/demo.hpp"

using namespace contattn;

TEST_CASE("demo pipeline gradient check passes for both alphas") {
    for (double alpha : {1.0, 2.0}) {
        DemoConfig cfg;
        cfg.alpha = alpha;
        cfg.seed = 42;
        const auto run = run_demo(cfg);
        CHECK(run.max_grad_delta <= 1e-4);
        CHECK(run.discrete_probs.size() == 40);
        double mass = 0.0;
        for (double p : run.discrete_probs) {
            CHECK(p >= 0.0);
            mass += p;
        }
        CHECK(std::abs(mass - 1.0) <= 1e-12);
    }
}

TEST_CASE("demo density grid reflects the support") {
    DemoConfig cfg;
    cfg.alpha = 1.0;
    cfg.seed = 42;
    const auto soft = run_demo(cfg);
    for (double v : soft.density_grid) CHECK(v > 0.0);

    cfg.alpha = 2.0;
    const auto sparse = run_demo(cfg);
    const double sigma = std::sqrt(sparse.sigma2);
    if (sigma < 0.2) {
        int zeros = 0;
        for (double v : sparse.density_grid) zeros += v == 0.0 ? 1 : 0;
        CHECK(zeros >= 1);
    }
}

TEST_CASE("demo is deterministic in the seed") {
    DemoConfig cfg;
    cfg.alpha = 2.0;
    cfg.seed = 43;
    const auto a = run_demo(cfg);
    const auto b = run_demo(cfg);
    REQUIRE(a.context.size() == b.context.size());
    for (size_t i = 0; i < a.context.size(); ++i) CHECK(a.context[i] == b.context[i]);
    for (size_t i = 0; i < a.scores.size(); ++i) CHECK(a.scores[i] == b.scores[i]);

    cfg.seed = 44;
    const auto c = run_demo(cfg);
    bool differs = false;
    for (size_t i = 0; i < a.scores.size(); ++i) differs = differs || a.scores[i] != c.scores[i];
    CHECK(differs);
}
