#include "contattn/basis.hpp"

#include <stdexcept>

#include "contattn/specfun.hpp"

namespace contattn {

double RBFBasis::evaluate(std::size_t j, double t) const {
    return gaussian_pdf(t, centers1d[j], widths1d[j]);
}

double RBFBasis::evaluate(std::size_t j, const Vec2& t) const {
    return gaussian_pdf(t, centers2d[j], widths2d[j]);
}

std::vector<double> RBFBasis::psi(double t) const {
    std::vector<double> v(size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = evaluate(j, t);
    return v;
}

std::vector<double> RBFBasis::psi(const Vec2& t) const {
    std::vector<double> v(size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = evaluate(j, t);
    return v;
}

RBFBasis RBFBasis::make_1d(std::vector<double> centers, std::vector<double> widths) {
    if (centers.empty() || centers.size() != widths.size()) {
        throw std::invalid_argument("RBFBasis: need matching, nonempty centers/widths");
    }
    for (double w : widths) {
        if (!(w > 0.0)) throw std::invalid_argument("RBFBasis: widths must be positive");
    }
    RBFBasis b;
    b.dimension = 1;
    b.centers1d = std::move(centers);
    b.widths1d = std::move(widths);
    return b;
}

RBFBasis RBFBasis::make_2d(std::vector<Vec2> centers, std::vector<Mat2> widths) {
    if (centers.empty() || centers.size() != widths.size()) {
        throw std::invalid_argument("RBFBasis: need matching, nonempty centers/widths");
    }
    for (const Mat2& w : widths) require_spd(w, "RBFBasis: width not SPD");
    RBFBasis b;
    b.dimension = 2;
    b.centers2d = std::move(centers);
    b.widths2d = std::move(widths);
    return b;
}

RBFBasis RBFBasis::linear_1d(int n, double sigma) {
    if (n < 1) throw std::invalid_argument("RBFBasis: n must be >= 1");
    std::vector<double> centers(n), widths(n, sigma * sigma);
    for (int j = 0; j < n; ++j) {
        centers[j] = n == 1 ? 0.5 : static_cast<double>(j) / (n - 1);
    }
    return make_1d(std::move(centers), std::move(widths));
}

RBFBasis RBFBasis::grid_2d(int n_side, double w) {
    if (n_side < 1) throw std::invalid_argument("RBFBasis: n_side must be >= 1");
    std::vector<Vec2> centers;
    std::vector<Mat2> widths;
    centers.reserve(static_cast<std::size_t>(n_side) * n_side);
    for (int i = 0; i < n_side; ++i) {
        for (int j = 0; j < n_side; ++j) {
            const double x = n_side == 1 ? 0.5 : static_cast<double>(i) / (n_side - 1);
            const double y = n_side == 1 ? 0.5 : static_cast<double>(j) / (n_side - 1);
            centers.push_back({x, y});
            widths.push_back(Mat2::diag(w, w));
        }
    }
    return make_2d(std::move(centers), std::move(widths));
}

}  // namespace contattn
