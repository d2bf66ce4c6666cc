#pragma once

#include <vector>

#include "contattn/basis.hpp"
#include "contattn/matrix.hpp"

namespace contattn {

// Discrete observations: columns of H live at the matching locations.
struct ObservationMatrix {
    Matrix H;  // D x L
    std::vector<double> locations;
};

struct ObservationMatrix2D {
    Matrix H;
    std::vector<Vec2> locations;
};

struct ValueFunction {
    Matrix B;  // D x N
    RBFBasis basis;

    std::vector<double> evaluate(double t) const { return B * basis.psi(t); }
    std::vector<double> evaluate(const Vec2& t) const { return B * basis.psi(t); }
};

// F[j][l] = psi_j(t_l).
Matrix design_matrix(const RBFBasis& basis, const std::vector<double>& locations);
Matrix design_matrix(const RBFBasis& basis, const std::vector<Vec2>& locations);

// G = F' (F F' + ridge I_N)^{-1} through a Cholesky solve. Throws
// SingularSystemError when ridge = 0 and F F' is rank-deficient.
Matrix precompute_G(const Matrix& F, double ridge);

// Fits B = H G once G is known; G depends only on the basis, the locations
// and the ridge, so one fitter can be reused across many inputs H.
class RidgeFitter {
  public:
    RidgeFitter(RBFBasis basis, std::vector<double> locations, double ridge);

    const Matrix& G() const { return g_; }
    const Matrix& F() const { return f_; }
    ValueFunction fit(const Matrix& H) const;

  private:
    RBFBasis basis_;
    Matrix f_, g_;
};

inline constexpr double kDefaultRidge = 1e-6;

ValueFunction fit(const ObservationMatrix& obs, const RBFBasis& basis,
                  double ridge = kDefaultRidge);
ValueFunction fit(const ObservationMatrix2D& obs, const RBFBasis& basis,
                  double ridge = kDefaultRidge);

// Uniform location conventions for length-L inputs: t_l = l / L, l = 1..L.
std::vector<double> unit_interval_locations(std::size_t L);

}  // namespace contattn
