#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "contattn/attention.hpp"
#include "contattn/checks.hpp"
#include "contattn/demo.hpp"
#include "contattn/densities.hpp"
#include "contattn/discrete.hpp"
#include "contattn/oracle.hpp"
#include "contattn/specfun.hpp"
#include "contattn/value.hpp"

namespace py = pybind11;
using namespace contattn;

namespace {

std::vector<std::vector<double>> matrix_to_lists(const Matrix& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

Matrix matrix_from_lists(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("matrix: no rows");
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw std::invalid_argument("matrix: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Mat2 mat2_from_lists(const std::vector<std::vector<double>>& rows) {
    if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2) {
        throw std::invalid_argument("expected a 2x2 matrix");
    }
    return {rows[0][0], rows[0][1], rows[1][0], rows[1][1]};
}

py::dict simplex_to_dict(const SimplexVector& s) {
    py::dict d;
    d["probs"] = s.probs;
    d["support"] = std::vector<bool>(s.support_mask.begin(), s.support_mask.end());
    return d;
}

py::dict density_info(const SparseDensity& p) {
    py::dict d;
    d["lambda"] = p.lambda();
    d["dimension"] = p.dimension();
    if (p.dimension() == 1 && p.compact_support()) {
        d["support"] = py::make_tuple(p.support1d().lo, p.support1d().hi);
    } else if (p.dimension() == 2 && p.compact_support()) {
        const auto box = p.support2d().bounding_box();
        d["support_bounding_box"] = py::make_tuple(box.xlo, box.xhi, box.ylo, box.yhi);
    } else {
        d["support"] = py::none();
    }
    return d;
}

py::dict attention_to_dict(const AttentionResult& res) {
    py::dict d;
    d["r"] = res.r;
    if (!res.context.empty()) d["context"] = res.context;
    d["jacobian"] = matrix_to_lists(res.jacobian);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Continuous sparse attention: Tsallis-regularized prediction maps, sparse "
              "density families, and closed-form attention forward/backward passes.";

    py::register_exception<NotSpdError>(m, "NotSpdError");
    py::register_exception<ToleranceNotReachedError>(m, "ToleranceNotReachedError");
    py::register_exception<NoBracketError>(m, "NoBracketError");
    py::register_exception<InfiniteSupportError>(m, "InfiniteSupportError");
    py::register_exception<DegenerateCovarianceError>(m, "DegenerateCovarianceError");
    py::register_exception<SingularSystemError>(m, "SingularSystemError");
    py::register_exception<TooLargeError>(m, "TooLargeError");

    // special functions
    m.def("erf", &contattn::erf, py::arg("x"));
    m.def("gamma_fn", &gamma_fn, py::arg("x"));
    m.def("beta_exp", &beta_exp, py::arg("u"), py::arg("beta"));
    m.def("beta_log", &beta_log, py::arg("u"), py::arg("beta"));

    // discrete transformations
    m.def("softmax", [](const std::vector<double>& f) { return simplex_to_dict(softmax(f)); });
    m.def("sparsemax", [](const std::vector<double>& f) { return simplex_to_dict(sparsemax(f)); });
    m.def("alpha_entmax", [](const std::vector<double>& f, double alpha) {
        return simplex_to_dict(alpha_entmax(f, alpha));
    });
    m.def("jacobian_discrete", [](const std::vector<double>& f, const std::string& kind) {
        return matrix_to_lists(
            jacobian_discrete(f, kind == "sparsemax" ? RhoKind::Sparsemax : RhoKind::Softmax));
    });
    m.def("simplex_projection_bruteforce", [](const std::vector<double>& f) {
        return simplex_to_dict(simplex_projection_bruteforce(f));
    });
    m.def("tsallis_negentropy",
          py::overload_cast<const std::vector<double>&, double>(&tsallis_negentropy));

    // density families
    py::class_<SparseDensity>(m, "SparseDensity")
        .def("__call__", [](const SparseDensity& p, double t) { return p(t); })
        .def("__call__",
             [](const SparseDensity& p, double x, double y) { return p(Vec2{x, y}); })
        .def_property_readonly("lam", &SparseDensity::lambda)
        .def_property_readonly("dimension", &SparseDensity::dimension)
        .def("info", &density_info);

    m.def("gaussian", &make_gaussian_1d, py::arg("mu"), py::arg("sigma2"));
    m.def("truncated_parabola", &make_truncated_parabola, py::arg("mu"), py::arg("sigma2"));
    m.def("triangular", &make_triangular, py::arg("mu"), py::arg("b"));
    m.def(
        "truncated_paraboloid",
        [](const std::vector<double>& mu, const std::vector<std::vector<double>>& cov) {
            return make_truncated_paraboloid({mu.at(0), mu.at(1)}, mat2_from_lists(cov));
        },
        py::arg("mu"), py::arg("cov"));
    m.def(
        "gaussian_2d",
        [](const std::vector<double>& mu, const std::vector<std::vector<double>>& cov) {
            return make_gaussian_2d({mu.at(0), mu.at(1)}, mat2_from_lists(cov));
        },
        py::arg("mu"), py::arg("cov"));

    // continuous attention
    m.def(
        "attend_1d",
        [](double mu, double sigma2, const std::vector<double>& centers,
           const std::vector<double>& widths, double alpha,
           const std::optional<std::vector<std::vector<double>>>& B) {
            const auto basis = RBFBasis::make_1d(centers, widths);
            const auto score = CanonicalScore1D::from_moments(mu, sigma2);
            if (B) {
                const Matrix bm = matrix_from_lists(*B);
                return attention_to_dict(attend(score, basis, &bm, alpha));
            }
            return attention_to_dict(attend(score, basis, nullptr, alpha));
        },
        py::arg("mu"), py::arg("sigma2"), py::arg("centers"), py::arg("widths"),
        py::arg("alpha") = 1.0, py::arg("B") = std::nullopt);
    m.def(
        "attend_2d",
        [](const std::vector<double>& mu, const std::vector<std::vector<double>>& cov,
           const std::vector<std::vector<double>>& centers,
           const std::vector<std::vector<double>>& widths, double alpha,
           const std::optional<std::vector<std::vector<double>>>& B, int angular_nodes) {
            std::vector<Vec2> c2;
            std::vector<Mat2> w2;
            for (const auto& c : centers) c2.push_back({c.at(0), c.at(1)});
            for (const auto& w : widths) w2.push_back(Mat2::diag(w.at(0), w.at(1)));
            const auto basis = RBFBasis::make_2d(std::move(c2), std::move(w2));
            const auto score =
                CanonicalScore2D::from_moments({mu.at(0), mu.at(1)}, mat2_from_lists(cov));
            if (B) {
                const Matrix bm = matrix_from_lists(*B);
                return attention_to_dict(attend(score, basis, &bm, alpha, angular_nodes));
            }
            return attention_to_dict(attend(score, basis, nullptr, alpha, angular_nodes));
        },
        py::arg("mu"), py::arg("cov"), py::arg("centers"), py::arg("widths"),
        py::arg("alpha") = 1.0, py::arg("B") = std::nullopt, py::arg("angular_nodes") = 512);

    m.def(
        "moment_match",
        [](const std::vector<double>& p, const std::vector<double>& locations) {
            const auto mm = moment_match_from_discrete(p, locations);
            return py::make_tuple(mm.mu, mm.sigma2);
        },
        py::arg("p"), py::arg("locations"));

    // value-function regression
    m.def(
        "fit_value",
        [](const std::vector<std::vector<double>>& H, int basis_n, double rbf_sigma,
           double ridge) {
            const Matrix h = matrix_from_lists(H);
            const auto basis = RBFBasis::linear_1d(basis_n, rbf_sigma);
            const auto locs = unit_interval_locations(h.cols());
            const auto vf = fit({h, locs}, basis, ridge);
            const Matrix F = design_matrix(basis, locs);
            py::dict d;
            d["B"] = matrix_to_lists(vf.B);
            d["residual"] = (vf.B * F - h).frobenius_norm();
            return d;
        },
        py::arg("H"), py::arg("basis_n") = 8, py::arg("rbf_sigma") = 0.1,
        py::arg("ridge") = kDefaultRidge);

    // demo + checks
    m.def(
        "run_demo",
        [](double alpha, std::uint64_t seed) {
            DemoConfig cfg;
            cfg.alpha = alpha;
            cfg.seed = seed;
            const auto run = run_demo(cfg);
            py::dict d;
            d["mu"] = run.mu;
            d["sigma2"] = run.sigma2;
            d["discrete_probs"] = run.discrete_probs;
            d["density_grid"] = run.density_grid;
            d["context"] = run.context;
            d["gradient_max_delta"] = run.max_grad_delta;
            return d;
        },
        py::arg("alpha") = 1.0, py::arg("seed") = 42);
    m.def(
        "run_checks",
        [](const std::string& filter) {
            py::list out;
            for (const auto& r : run_all_checks(filter)) {
                py::dict d;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["max_delta"] = r.max_delta;
                d["tolerance"] = r.tolerance;
                d["detail"] = r.detail;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("filter") = "");
}
