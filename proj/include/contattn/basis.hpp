#pragma once

#include <vector>

#include "contattn/linalg.hpp"

namespace contattn {

// Ordered collection of Gaussian RBFs psi_j(t) = N(t; mu_j, Sigma_j). One
// instance is either 1D (scalar widths sigma_j^2) or 2D (SPD widths).
struct RBFBasis {
    int dimension = 1;
    std::vector<double> centers1d;
    std::vector<double> widths1d;  // sigma_j^2
    std::vector<Vec2> centers2d;
    std::vector<Mat2> widths2d;

    std::size_t size() const {
        return dimension == 1 ? centers1d.size() : centers2d.size();
    }

    double evaluate(std::size_t j, double t) const;
    double evaluate(std::size_t j, const Vec2& t) const;
    std::vector<double> psi(double t) const;
    std::vector<double> psi(const Vec2& t) const;

    static RBFBasis make_1d(std::vector<double> centers, std::vector<double> widths);
    static RBFBasis make_2d(std::vector<Vec2> centers, std::vector<Mat2> widths);

    // n centers linearly spaced in [0, 1], common width sigma (std dev).
    static RBFBasis linear_1d(int n, double sigma);
    // n_side x n_side grid of centers in [0, 1]^2 with width w * I.
    static RBFBasis grid_2d(int n_side, double w = 0.001);
};

}  // namespace contattn
