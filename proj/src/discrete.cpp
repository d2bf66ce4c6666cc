#include "contattn/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "contattn/errors.hpp"

namespace contattn {

namespace {

void require_scores(const std::vector<double>& f) {
    if (f.empty()) throw std::invalid_argument("score vector must be nonempty");
    for (double v : f) {
        if (!std::isfinite(v)) throw std::invalid_argument("score vector must be finite");
    }
}

SimplexVector finalize(std::vector<double> probs) {
    SimplexVector out;
    out.support_mask.resize(probs.size());
    for (size_t i = 0; i < probs.size(); ++i) out.support_mask[i] = probs[i] > 0.0;
    out.probs = std::move(probs);
    return out;
}

}  // namespace

SimplexVector softmax(const std::vector<double>& f) {
    require_scores(f);
    const double m = *std::max_element(f.begin(), f.end());
    std::vector<double> p(f.size());
    double z = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        p[i] = std::exp(f[i] - m);
        z += p[i];
    }
    for (double& v : p) v /= z;
    return finalize(std::move(p));
}

SimplexVector sparsemax(const std::vector<double>& f) {
    require_scores(f);
    const size_t L = f.size();
    std::vector<double> sorted(f);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cumsum = 0.0, tau = sorted[0] - 1.0;
    for (size_t k = 0; k < L; ++k) {
        cumsum += sorted[k];
        const double cand = (cumsum - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - cand > 0.0) {
            tau = cand;
        } else {
            break;
        }
    }
    std::vector<double> p(L);
    for (size_t i = 0; i < L; ++i) p[i] = std::max(0.0, f[i] - tau);
    return finalize(std::move(p));
}

SimplexVector alpha_entmax(const std::vector<double>& f, double alpha) {
    require_scores(f);
    if (!(alpha > 1.0)) throw std::domain_error("alpha_entmax: alpha must exceed 1");
    const double am1 = alpha - 1.0;
    const double expo = 1.0 / am1;
    const double fmax = *std::max_element(f.begin(), f.end());
    const double fmin = *std::min_element(f.begin(), f.end());

    auto probs_at = [&](double lambda, std::vector<double>* out) {
        double s = 0.0;
        for (size_t i = 0; i < f.size(); ++i) {
            const double base = am1 * (f[i] - lambda);
            const double v = base > 0.0 ? std::pow(base, expo) : 0.0;
            if (out) (*out)[i] = v;
            s += v;
        }
        return s;
    };

    double lo = fmax - expo - (fmax - fmin);
    double hi = fmax;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (probs_at(mid, nullptr) >= 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    std::vector<double> p(f.size());
    const double sum = probs_at(lo, &p);
    if (std::abs(sum - 1.0) > 1e-10) {
        throw ToleranceNotReachedError("alpha_entmax: bisection did not normalize");
    }
    for (double& v : p) v /= sum;  // exact simplex membership; zeros stay zero
    return finalize(std::move(p));
}

Matrix jacobian_discrete(const std::vector<double>& f, RhoKind kind) {
    require_scores(f);
    const size_t L = f.size();
    Matrix j(L, L);
    if (kind == RhoKind::Softmax) {
        const auto p = softmax(f).probs;
        for (size_t i = 0; i < L; ++i)
            for (size_t k = 0; k < L; ++k) j(i, k) = (i == k ? p[i] : 0.0) - p[i] * p[k];
        return j;
    }
    const auto sm = sparsemax(f);
    double nnz = 0.0;
    for (bool b : sm.support_mask) nnz += b ? 1.0 : 0.0;
    for (size_t i = 0; i < L; ++i) {
        if (!sm.support_mask[i]) continue;
        for (size_t k = 0; k < L; ++k) {
            if (!sm.support_mask[k]) continue;
            j(i, k) = (i == k ? 1.0 : 0.0) - 1.0 / nnz;
        }
    }
    return j;
}

}  // namespace contattn
