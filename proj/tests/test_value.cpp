#include <doctest.h>

#include <cmath>

#include "contattn/errors.hpp"
#include "contattn/rng.hpp"
#include "contattn/specfun.hpp"
#include "contattn/value.hpp"

using namespace contattn;

TEST_CASE("design matrix") {
    const auto basis = RBFBasis::make_1d({0.5}, {0.04});
    const Matrix f = design_matrix(basis, std::vector<double>{0.5});
    CHECK(f(0, 0) == doctest::Approx(gaussian_pdf(0.5, 0.5, 0.04)));

    // tiny widths centered at the locations give a diagonally dominant F
    const auto locs = unit_interval_locations(6);
    std::vector<double> widths(6, 2.5e-3);
    const auto narrow = RBFBasis::make_1d(std::vector<double>(locs), widths);
    const Matrix fd = design_matrix(narrow, locs);
    for (size_t i = 0; i < 6; ++i)
        for (size_t j = 0; j < 6; ++j) {
            CHECK(fd(i, j) > 0.0);
            if (i != j) CHECK(fd(i, i) > 100.0 * fd(i, j));
        }
}

TEST_CASE("precompute_G closed cases") {
    const Matrix eye = Matrix::identity(3);
    const Matrix g0 = precompute_G(eye, 0.0);
    const Matrix g1 = precompute_G(eye, 1.0);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) {
            CHECK(g0(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
            CHECK(g1(i, j) == doctest::Approx(i == j ? 0.5 : 0.0));
        }

    // shrinkage: ||G|| decreases as the ridge grows
    Rng rng(31);
    Matrix f(3, 7);
    for (auto& v : f.data()) v = rng.normal();
    double prev = precompute_G(f, 1e-6).frobenius_norm();
    for (double ridge : {1e-3, 1e-1, 1.0, 10.0}) {
        const double cur = precompute_G(f, ridge).frobenius_norm();
        CHECK(cur <= prev);
        prev = cur;
    }

    // rank-deficient FF' with zero ridge
    Matrix bad(2, 2, 1.0);
    CHECK_THROWS_AS(precompute_G(bad, 0.0), SingularSystemError);
}

TEST_CASE("ridge fit") {
    Rng rng(32);
    const int N = 5, L = 20, D = 3;
    const auto basis = RBFBasis::linear_1d(N, 0.2);
    const auto locs = unit_interval_locations(L);
    const Matrix F = design_matrix(basis, locs);

    // recovery of H constructed inside the row space of F
    Matrix C(D, N);
    for (auto& v : C.data()) v = rng.normal();
    const Matrix H = C * F;
    const auto vf = fit({H, locs}, basis, 0.0);
    CHECK((vf.B * F - H).frobenius_norm() <= 1e-8);

    // continuity in the ridge
    Matrix H2(D, L);
    for (auto& v : H2.data()) v = rng.normal();
    const auto b0 = fit({H2, locs}, basis, 0.0);
    const auto b1 = fit({H2, locs}, basis, 1e-6);
    CHECK((b0.B - b1.B).frobenius_norm() <= 1e-4);

    // zero observations give a zero fit
    const auto bz = fit({Matrix(D, L), locs}, basis, 1e-6);
    CHECK(bz.B.frobenius_norm() == 0.0);
}

TEST_CASE("normal equations hold for fitted models") {
    Rng rng(33);
    for (int rep = 0; rep < 10; ++rep) {
        const int N = rng.uniform_int(3, 8), L = rng.uniform_int(10, 25), D = rng.uniform_int(2, 5);
        const double ridge = std::pow(10.0, rng.uniform(-7.0, -2.0));
        const auto basis = RBFBasis::linear_1d(N, rng.uniform(0.1, 0.4));
        const auto locs = unit_interval_locations(L);
        Matrix H(D, L);
        for (auto& v : H.data()) v = rng.normal();
        const auto vf = fit({H, locs}, basis, ridge);
        const Matrix F = design_matrix(basis, locs);
        Matrix A = F * F.transpose();
        for (int i = 0; i < N; ++i) A(i, i) += ridge;
        CHECK((vf.B * A - H * F.transpose()).frobenius_norm() <= 1e-8 * (1.0 + H.frobenius_norm()));
    }
}

TEST_CASE("fitted coefficients beat random perturbations") {
    Rng rng(34);
    const int N = 5, L = 18, D = 3;
    const double ridge = 1e-3;
    const auto basis = RBFBasis::linear_1d(N, 0.25);
    const auto locs = unit_interval_locations(L);
    Matrix H(D, L);
    for (auto& v : H.data()) v = rng.normal();
    const auto vf = fit({H, locs}, basis, ridge);
    const Matrix F = design_matrix(basis, locs);
    auto objective = [&](const Matrix& B) {
        const double fitpart = (B * F - H).frobenius_norm();
        const double reg = B.frobenius_norm();
        return fitpart * fitpart + ridge * reg * reg;
    };
    const double best = objective(vf.B);
    for (int k = 0; k < 20; ++k) {
        Matrix delta(D, N);
        for (auto& v : delta.data()) v = rng.normal();
        CHECK(best < objective(vf.B + delta * 1e-3));
    }
}

TEST_CASE("monotone shrinkage of the coefficients") {
    Rng rng(35);
    const auto basis = RBFBasis::linear_1d(6, 0.2);
    const auto locs = unit_interval_locations(20);
    Matrix H(4, 20);
    for (auto& v : H.data()) v = rng.normal();
    double prev = fit({H, locs}, basis, 1e-8).B.frobenius_norm();
    for (double ridge : {1e-5, 1e-3, 1e-1, 10.0}) {
        const double cur = fit({H, locs}, basis, ridge).B.frobenius_norm();
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("G depends only on basis, locations, and ridge") {
    const auto basis = RBFBasis::linear_1d(5, 0.3);
    const auto locs = unit_interval_locations(12);
    const RidgeFitter f1(basis, locs, 1e-6);
    const RidgeFitter f2(basis, locs, 1e-6);
    REQUIRE(f1.G().rows() == f2.G().rows());
    for (size_t i = 0; i < f1.G().rows(); ++i)
        for (size_t j = 0; j < f1.G().cols(); ++j) CHECK(f1.G()(i, j) == f2.G()(i, j));

    // the same fitter serves different inputs
    Rng rng(36);
    Matrix h1(3, 12), h2(3, 12);
    for (auto& v : h1.data()) v = rng.normal();
    for (auto& v : h2.data()) v = rng.normal();
    const auto v1 = f1.fit(h1);
    const auto v2 = f1.fit(h2);
    CHECK(v1.B.rows() == 3);
    CHECK(v2.B.rows() == 3);
}

TEST_CASE("evaluation") {
    const auto basis = RBFBasis::linear_1d(4, 0.2);
    ValueFunction zero{Matrix(2, 4), basis};
    for (double t : {0.0, 0.3, 1.0}) {
        const auto v = zero.evaluate(t);
        CHECK(v[0] == 0.0);
        CHECK(v[1] == 0.0);
    }

    // a single basis function scales its column
    const auto b1 = RBFBasis::make_1d({0.5}, {0.09});
    Matrix coef(2, 1);
    coef(0, 0) = 2.0;
    coef(1, 0) = -1.0;
    ValueFunction vf{coef, b1};
    const double psi = gaussian_pdf(0.4, 0.5, 0.09);
    const auto v = vf.evaluate(0.4);
    CHECK(v[0] == doctest::Approx(2.0 * psi));
    CHECK(v[1] == doctest::Approx(-psi));
}

TEST_CASE("2D fit over grid locations") {
    Rng rng(38);
    const int side = 4, L = side * side, D = 3;
    std::vector<Vec2> locs;
    for (int i = 1; i <= side; ++i)
        for (int j = 1; j <= side; ++j)
            locs.push_back({static_cast<double>(i) / side, static_cast<double>(j) / side});
    const auto basis = RBFBasis::grid_2d(2, 0.02);
    Matrix H(D, L);
    for (auto& v : H.data()) v = rng.normal();
    const auto vf = fit(ObservationMatrix2D{H, locs}, basis, 1e-6);
    CHECK(vf.B.rows() == D);
    CHECK(vf.B.cols() == 4);
    const Matrix F = design_matrix(basis, locs);
    Matrix A = F * F.transpose();
    for (int i = 0; i < 4; ++i) A(i, i) += 1e-6;
    CHECK((vf.B * A - H * F.transpose()).frobenius_norm() <= 1e-8 * (1.0 + H.frobenius_norm()));
}

TEST_CASE("near interpolation with narrow widths") {
    Rng rng(37);
    const int N = 8, L = 8, D = 2;
    const auto locs = unit_interval_locations(L);
    const auto basis = RBFBasis::make_1d(std::vector<double>(locs), std::vector<double>(N, 5e-4));
    Matrix H(D, L);
    double hmax = 0.0;
    for (auto& v : H.data()) {
        v = rng.normal();
        hmax = std::max(hmax, std::abs(v));
    }
    const auto vf = fit({H, locs}, basis, 1e-8);
    double err = 0.0;
    for (int l = 0; l < L; ++l) {
        const auto v = vf.evaluate(locs[l]);
        for (int d = 0; d < D; ++d) err = std::max(err, std::abs(v[d] - H(d, l)));
    }
    CHECK(err < 0.05 * hmax);
}
