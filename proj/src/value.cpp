#include "contattn/value.hpp"

#include <stdexcept>
#include <utility>

namespace contattn {

Matrix design_matrix(const RBFBasis& basis, const std::vector<double>& locations) {
    if (basis.dimension != 1) throw std::invalid_argument("design_matrix: 1D basis required");
    if (locations.empty()) throw std::invalid_argument("design_matrix: no locations");
    Matrix f(basis.size(), locations.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t l = 0; l < locations.size(); ++l) f(j, l) = basis.evaluate(j, locations[l]);
    return f;
}

Matrix design_matrix(const RBFBasis& basis, const std::vector<Vec2>& locations) {
    if (basis.dimension != 2) throw std::invalid_argument("design_matrix: 2D basis required");
    if (locations.empty()) throw std::invalid_argument("design_matrix: no locations");
    Matrix f(basis.size(), locations.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t l = 0; l < locations.size(); ++l) f(j, l) = basis.evaluate(j, locations[l]);
    return f;
}

Matrix precompute_G(const Matrix& F, double ridge) {
    if (ridge < 0.0) throw std::invalid_argument("precompute_G: ridge must be nonnegative");
    const std::size_t n = F.rows();
    Matrix a = F * F.transpose();
    for (std::size_t i = 0; i < n; ++i) a(i, i) += ridge;
    const Matrix l = cholesky_factor(a);         // throws SingularSystemError
    const Matrix x = cholesky_solve(l, F);       // (FF' + ridge I)^{-1} F
    return x.transpose();
}

RidgeFitter::RidgeFitter(RBFBasis basis, std::vector<double> locations, double ridge)
    : basis_(std::move(basis)),
      f_(design_matrix(basis_, locations)),
      g_(precompute_G(f_, ridge)) {}

ValueFunction RidgeFitter::fit(const Matrix& H) const {
    if (H.cols() != g_.rows()) throw std::invalid_argument("fit: H column count != location count");
    return {H * g_, basis_};
}

ValueFunction fit(const ObservationMatrix& obs, const RBFBasis& basis, double ridge) {
    if (obs.H.cols() != obs.locations.size()) {
        throw std::invalid_argument("fit: H column count must equal location count");
    }
    return RidgeFitter(basis, obs.locations, ridge).fit(obs.H);
}

ValueFunction fit(const ObservationMatrix2D& obs, const RBFBasis& basis, double ridge) {
    if (obs.H.cols() != obs.locations.size()) {
        throw std::invalid_argument("fit: H column count must equal location count");
    }
    const Matrix f = design_matrix(basis, obs.locations);
    return {obs.H * precompute_G(f, ridge), basis};
}

std::vector<double> unit_interval_locations(std::size_t L) {
    std::vector<double> t(L);
    for (std::size_t l = 0; l < L; ++l) t[l] = static_cast<double>(l + 1) / static_cast<double>(L);
    return t;
}

}  // namespace contattn
