#pragma once

#include <vector>

#include "contattn/matrix.hpp"

namespace contattn {

struct SimplexVector {
    std::vector<double> probs;
    std::vector<bool> support_mask;  // mask[i] <=> probs[i] > 0
};

enum class RhoKind { Softmax, Sparsemax };

SimplexVector softmax(const std::vector<double>& f);

// Euclidean projection onto the simplex by sort-and-threshold, O(L log L).
// A score sitting exactly at the threshold gets probability 0 and is left
// out of the support mask.
SimplexVector sparsemax(const std::vector<double>& f);

// p_i = [(alpha-1)(f_i - lambda)]_+^(1/(alpha-1)) with lambda found by
// bisection; alpha > 1.
SimplexVector alpha_entmax(const std::vector<double>& f, double alpha);

// Analytic Jacobians: Diag(p) - p p' for softmax, Diag(s) - s s'/(1's) for
// sparsemax with s the support indicator.
Matrix jacobian_discrete(const std::vector<double>& f, RhoKind kind);

}  // namespace contattn
