#include <doctest.h>

#include <cmath>

#include "contattn/discrete.hpp"
#include "contattn/oracle.hpp"
#include "contattn/rng.hpp"

using namespace contattn;

TEST_CASE("softmax") {
    const auto u = softmax({0.0, 0.0, 0.0});
    for (double p : u.probs) CHECK(p == doctest::Approx(1.0 / 3.0));
    const auto r = softmax({std::log(2.0), 0.0});
    CHECK(r.probs[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(r.probs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    // shift invariance
    for (double c : {-5.0, 7.0}) {
        const auto a = softmax({0.3, -1.0, 2.2});
        const auto b = softmax({0.3 + c, -1.0 + c, 2.2 + c});
        for (size_t i = 0; i < 3; ++i) CHECK(a.probs[i] == doctest::Approx(b.probs[i]).epsilon(1e-13));
    }
}

TEST_CASE("sparsemax examples") {
    const auto a = sparsemax({0.5, 0.5, -1.0});
    CHECK(a.probs[0] == doctest::Approx(0.5));
    CHECK(a.probs[1] == doctest::Approx(0.5));
    CHECK(a.probs[2] == 0.0);
    CHECK_FALSE(a.support_mask[2]);

    const auto b = sparsemax({2.0, 0.0});
    CHECK(b.probs[0] == doctest::Approx(1.0));
    CHECK(b.probs[1] == 0.0);

    const auto c = sparsemax({0.0, 0.0, 0.0, 0.0});
    for (double p : c.probs) CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("sparsemax boundary ties get zero probability and leave the support") {
    // tau = 0 puts the second coordinate exactly at the threshold
    const auto s = sparsemax({1.0, 0.0, -1.0});
    CHECK(s.probs[0] == doctest::Approx(1.0));
    CHECK(s.probs[1] == 0.0);
    CHECK(s.support_mask == std::vector<bool>{true, false, false});
}

TEST_CASE("sparsemax equals the brute-force projection") {
    Rng rng(12);
    for (int k = 0; k < 100; ++k) {
        const int L = rng.uniform_int(1, 8);
        std::vector<double> f(L);
        for (double& v : f) v = rng.uniform(-2.0, 2.0);
        const auto a = sparsemax(f).probs;
        const auto b = simplex_projection_bruteforce(f).probs;
        for (int i = 0; i < L; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
    }
}

TEST_CASE("alpha entmax") {
    const auto single = alpha_entmax({3.7}, 2.0);
    CHECK(single.probs[0] == doctest::Approx(1.0));

    Rng rng(13);
    for (int k = 0; k < 50; ++k) {
        const int L = rng.uniform_int(2, 9);
        std::vector<double> f(L);
        for (double& v : f) v = rng.uniform(-2.0, 2.0);
        const auto a = alpha_entmax(f, 2.0).probs;
        const auto b = sparsemax(f).probs;
        for (int i = 0; i < L; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
    }
    for (int k = 0; k < 20; ++k) {
        const int L = rng.uniform_int(2, 6);
        std::vector<double> f(L);
        for (double& v : f) v = rng.uniform(-2.0, 2.0);
        const auto a = alpha_entmax(f, 1.0001).probs;
        const auto b = softmax(f).probs;
        for (int i = 0; i < L; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-3);
    }
    CHECK_THROWS_AS(alpha_entmax({1.0, 2.0}, 1.0), std::domain_error);
}

TEST_CASE("raising a score never shrinks its own probability") {
    Rng rng(14);
    for (int k = 0; k < 200; ++k) {
        const int L = rng.uniform_int(2, 7);
        std::vector<double> f(L);
        for (double& v : f) v = rng.uniform(-2.0, 2.0);
        const int i = rng.uniform_int(0, L - 1);
        const double before_soft = softmax(f).probs[i];
        const double before_sparse = sparsemax(f).probs[i];
        f[i] += rng.uniform(0.01, 1.0);
        CHECK(softmax(f).probs[i] >= before_soft);
        CHECK(sparsemax(f).probs[i] >= before_sparse - 1e-14);
    }
}

TEST_CASE("discrete jacobians") {
    // softmax at p = (1/2, 1/2)
    const Matrix js = jacobian_discrete({0.0, 0.0}, RhoKind::Softmax);
    CHECK(js(0, 0) == doctest::Approx(0.25));
    CHECK(js(0, 1) == doctest::Approx(-0.25));
    CHECK(js(1, 0) == doctest::Approx(-0.25));
    CHECK(js(1, 1) == doctest::Approx(0.25));

    // sparsemax with full support s = (1, 1)
    const Matrix jp = jacobian_discrete({0.1, 0.0}, RhoKind::Sparsemax);
    CHECK(jp(0, 0) == doctest::Approx(0.5));
    CHECK(jp(0, 1) == doctest::Approx(-0.5));

    // single-point support: Diag(s) - ss'/1 vanishes
    const Matrix jz = jacobian_discrete({2.0, 0.0}, RhoKind::Sparsemax);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) CHECK(jz(i, j) == 0.0);
}

TEST_CASE("softmax jacobian rows sum to zero") {
    Rng rng(15);
    for (int k = 0; k < 10; ++k) {
        const int L = rng.uniform_int(2, 6);
        std::vector<double> f(L);
        for (double& v : f) v = rng.uniform(-2.0, 2.0);
        const Matrix j = jacobian_discrete(f, RhoKind::Softmax);
        for (int i = 0; i < L; ++i) {
            double row = 0.0;
            for (int c = 0; c < L; ++c) row += j(i, c);
            CHECK(std::abs(row) <= 1e-12);
        }
    }
}
