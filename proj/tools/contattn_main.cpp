// contattn: evaluate sparse attention densities, run continuous attention
// forward/backward passes, fit value functions, and run the check suite.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "contattn/attention.hpp"
#include "contattn/checks.hpp"
#include "contattn/demo.hpp"
#include "contattn/densities.hpp"
#include "contattn/errors.hpp"
#include "contattn/oracle.hpp"
#include "contattn/value.hpp"

using json = nlohmann::json;
using namespace contattn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalFailure = 3;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Matrix matrix_from_json(const json& j) {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    const auto& data = j.at("data");
    if (data.size() != rows) throw std::invalid_argument("matrix json: row count mismatch");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (data[i].size() != cols) throw std::invalid_argument("matrix json: column count mismatch");
        for (std::size_t jj = 0; jj < cols; ++jj) m(i, jj) = data[i][jj].get<double>();
    }
    return m;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open for reading: " + path);
    json j;
    in >> j;
    return j;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* env = std::getenv("CONTATTN_SEED");
    if (env == nullptr || *env == '\0') return fallback;
    return std::strtoull(env, nullptr, 10);
}

Mat2 cov_from_flags(const std::vector<double>& entries) {
    if (entries.size() != 4) throw std::invalid_argument("--cov expects 4 numbers a,b,c,d");
    return Mat2{entries[0], entries[1], entries[2], entries[3]};
}

// ---- density ------------------------------------------------------------

struct DensityArgs {
    std::string family = "truncated-parabola";
    std::vector<double> mu{0.0};
    double sigma2 = 1.0;
    double b = 1.0;
    std::vector<double> cov{1.0, 0.0, 0.0, 1.0};
    std::string out_csv = "density.csv";
    std::string out_json = "density.json";
};

int cmd_density(const DensityArgs& args) {
    SparseDensity p = [&]() -> SparseDensity {
        if (args.family == "gaussian") return make_gaussian_1d(args.mu.at(0), args.sigma2);
        if (args.family == "truncated-parabola")
            return make_truncated_parabola(args.mu.at(0), args.sigma2);
        if (args.family == "triangular") return make_triangular(args.mu.at(0), args.b);
        if (args.family == "gaussian-2d") {
            return make_gaussian_2d({args.mu.at(0), args.mu.at(1)}, cov_from_flags(args.cov));
        }
        if (args.family == "truncated-paraboloid") {
            return make_truncated_paraboloid({args.mu.at(0), args.mu.at(1)},
                                             cov_from_flags(args.cov));
        }
        throw std::invalid_argument("unknown family: " + args.family);
    }();

    json sidecar;
    sidecar["family"] = args.family;
    sidecar["lambda"] = p.lambda();

    std::ofstream csv(args.out_csv, std::ios::binary);
    if (!csv) throw std::invalid_argument("cannot open for writing: " + args.out_csv);

    if (p.dimension() == 1) {
        double lo, hi;
        if (p.compact_support()) {
            const auto s = p.support1d();
            const double pad = 0.2 * s.length();
            lo = s.lo - pad;
            hi = s.hi + pad;
            sidecar["support"] = {{"lo", s.lo}, {"hi", s.hi}};
        } else {
            const double sd = std::sqrt(p.scale1d());
            lo = p.loc1d() - 4.8 * sd;
            hi = p.loc1d() + 4.8 * sd;
            sidecar["support"] = "all";
        }
        csv << "t,p\n";
        for (int i = 0; i < 1001; ++i) {
            const double t = lo + (hi - lo) * i / 1000.0;
            csv << fmt(t) << "," << fmt(p(t)) << "\n";
        }
        sidecar["mass"] = expectation_quadrature(p, [](double) { return 1.0; });
    } else {
        Rect box{};
        if (p.compact_support()) {
            box = p.support2d().bounding_box();
            const double padx = 0.2 * (box.xhi - box.xlo), pady = 0.2 * (box.yhi - box.ylo);
            sidecar["support"] = {{"center", {p.loc2d().x, p.loc2d().y}},
                                  {"level", -p.lambda()},
                                  {"bounding_box", {box.xlo, box.xhi, box.ylo, box.yhi}}};
            box = {box.xlo - padx, box.xhi + padx, box.ylo - pady, box.yhi + pady};
        } else {
            const Mat2 c = p.cov2d();
            const Vec2 mu = p.loc2d();
            box = {mu.x - 4.8 * std::sqrt(c.a), mu.x + 4.8 * std::sqrt(c.a),
                   mu.y - 4.8 * std::sqrt(c.d), mu.y + 4.8 * std::sqrt(c.d)};
            sidecar["support"] = "all";
        }
        csv << "x,y,p\n";
        for (int i = 0; i < 201; ++i) {
            for (int j = 0; j < 201; ++j) {
                const double x = box.xlo + (box.xhi - box.xlo) * i / 200.0;
                const double y = box.ylo + (box.yhi - box.ylo) * j / 200.0;
                csv << fmt(x) << "," << fmt(y) << "," << fmt(p(Vec2{x, y})) << "\n";
            }
        }
        sidecar["mass"] = expectation_quadrature(p, [](const Vec2&) { return 1.0; }, 256);
    }
    write_json(args.out_json, sidecar);
    std::cout << "density: lambda=" << fmt(p.lambda())
              << " mass=" << fmt(sidecar["mass"].get<double>()) << "\n";
    return kExitOk;
}

// ---- attend ---------------------------------------------------------------

struct AttendArgs {
    double alpha = 1.0;
    int dimension = 1;
    std::vector<double> mu{0.5};
    double sigma2 = 0.04;
    std::vector<double> cov{0.04, 0.0, 0.0, 0.04};
    std::vector<double> theta;  // optional override: 2 values (1D) or 6 (2D)
    int basis_n = 8;
    double rbf_sigma = 0.1;
    double rbf_width_2d = 0.001;
    std::string value_b;
    bool check = false;
    int angular_nodes = 512;
    std::string out = "attend.json";
};

int cmd_attend(const AttendArgs& args) {
    std::optional<Matrix> B;
    if (!args.value_b.empty()) B = matrix_from_json(load_json(args.value_b));
    const Matrix* bp = B ? &*B : nullptr;

    json out;
    out["alpha"] = args.alpha;
    out["dimension"] = args.dimension;
    double forward_delta = 0.0, jac_delta = 0.0;
    double forward_tol = 0.0, jac_tol = 0.0;

    if (args.dimension == 1) {
        if (!args.theta.empty() && args.theta.size() != 2) {
            throw std::invalid_argument("--theta needs 2 values in 1D");
        }
        CanonicalScore1D score =
            args.theta.empty() ? CanonicalScore1D::from_moments(args.mu.at(0), args.sigma2)
                               : CanonicalScore1D::from_theta(args.theta.at(0), args.theta.at(1));
        const RBFBasis basis = RBFBasis::linear_1d(args.basis_n, args.rbf_sigma);
        const auto res = attend(score, basis, bp, args.alpha);
        out["theta"] = {score.theta1, score.theta2};
        out["mu"] = score.mu();
        out["sigma2"] = score.sigma2();
        out["r"] = res.r;
        if (bp) out["context"] = res.context;
        out["jacobian"] = matrix_to_json(res.jacobian);

        if (args.check) {
            forward_tol = 1e-10;
            jac_tol = 1e-6;
            const SparseDensity p = args.alpha == 2.0
                                        ? make_truncated_parabola(score.mu(), score.sigma2())
                                        : make_gaussian_1d(score.mu(), score.sigma2());
            QuadratureSpec qs;
            qs.absolute_tolerance = 1e-12;
            for (std::size_t j = 0; j < basis.size(); ++j) {
                const double num = expectation_quadrature(
                    p, [&](double t) { return basis.evaluate(j, t); }, qs);
                forward_delta = std::max(forward_delta, std::abs(res.r[j] - num));
            }
            const Matrix oracle = generalized_cov_quadrature(
                p, [](double t) { return std::vector<double>{t, t * t}; },
                [&](double t) { return basis.psi(t); }, 2.0 - args.alpha, qs);
            jac_delta = (res.jacobian - oracle).max_abs();
        }
    } else if (args.dimension == 2) {
        CanonicalScore2D score = [&]() {
            if (args.theta.empty()) {
                return CanonicalScore2D::from_moments({args.mu.at(0), args.mu.at(1)},
                                                      cov_from_flags(args.cov));
            }
            if (args.theta.size() != 6) throw std::invalid_argument("--theta needs 6 values in 2D");
            return CanonicalScore2D::from_theta(
                {args.theta[0], args.theta[1]},
                {args.theta[2], args.theta[3], args.theta[4], args.theta[5]});
        }();
        const int side = static_cast<int>(std::round(std::sqrt(args.basis_n)));
        if (side * side != args.basis_n) {
            throw std::invalid_argument("--basis-n must be a perfect square in 2D");
        }
        const RBFBasis basis = RBFBasis::grid_2d(side, args.rbf_width_2d);
        const auto res = attend(score, basis, bp, args.alpha, args.angular_nodes);
        const auto mm = moments_from_theta(score);
        out["theta"] = {score.theta_lin.x, score.theta_lin.y, score.theta_quad.a,
                        score.theta_quad.b, score.theta_quad.c, score.theta_quad.d};
        out["mu"] = {mm.mu.x, mm.mu.y};
        out["cov"] = {mm.cov.a, mm.cov.b, mm.cov.c, mm.cov.d};
        out["r"] = res.r;
        if (bp) out["context"] = res.context;
        out["jacobian"] = matrix_to_json(res.jacobian);

        if (args.check) {
            forward_tol = args.alpha == 2.0 ? 1e-6 : 1e-8;
            jac_tol = args.alpha == 2.0 ? 1e-4 : 1e-6;
            const SparseDensity p = args.alpha == 2.0 ? make_truncated_paraboloid(mm.mu, mm.cov)
                                                      : make_gaussian_2d(mm.mu, mm.cov);
            for (std::size_t j = 0; j < basis.size(); ++j) {
                const double num = expectation_quadrature(
                    p, [&](const Vec2& t) { return basis.evaluate(j, t); }, 256);
                forward_delta = std::max(forward_delta, std::abs(res.r[j] - num));
            }
            const Matrix oracle = generalized_cov_quadrature(
                p,
                [](const Vec2& t) {
                    return std::vector<double>{t.x, t.y, t.x * t.x, t.x * t.y, t.y * t.x,
                                               t.y * t.y};
                },
                [&](const Vec2& t) { return basis.psi(t); }, 2.0 - args.alpha, 256);
            jac_delta = (res.jacobian - oracle).max_abs();
        }
    } else {
        throw std::invalid_argument("--dimension must be 1 or 2");
    }

    if (args.check) {
        out["oracle_deltas"] = {{"forward", forward_delta},
                                {"jacobian", jac_delta},
                                {"forward_tolerance", forward_tol},
                                {"jacobian_tolerance", jac_tol}};
    }
    write_json(args.out, out);
    if (args.check && (forward_delta > forward_tol || jac_delta > jac_tol)) {
        std::cerr << "attend: oracle mismatch (forward " << forward_delta << ", jacobian "
                  << jac_delta << ")\n";
        return kExitNumericalFailure;
    }
    std::cout << "attend: wrote " << args.out << "\n";
    return kExitOk;
}

// ---- fit -------------------------------------------------------------------

struct FitArgs {
    std::string input;
    int dimension = 1;
    int basis_n = 8;
    double rbf_sigma = 0.1;
    double rbf_width_2d = 0.001;
    double ridge = kDefaultRidge;
    std::string out = "B.json";
};

int cmd_fit(const FitArgs& args) {
    const Matrix H = matrix_from_json(load_json(args.input));
    const std::size_t L = H.cols();
    Matrix B, F;
    if (args.dimension == 1) {
        const RBFBasis basis = RBFBasis::linear_1d(args.basis_n, args.rbf_sigma);
        const auto locs = unit_interval_locations(L);
        F = design_matrix(basis, locs);
        B = fit({H, locs}, basis, args.ridge).B;
    } else if (args.dimension == 2) {
        const int side = static_cast<int>(std::round(std::sqrt(static_cast<double>(L))));
        if (static_cast<std::size_t>(side) * side != L) {
            throw std::invalid_argument("fit: 2D input needs a square number of columns");
        }
        const int bside = static_cast<int>(std::round(std::sqrt(args.basis_n)));
        if (bside * bside != args.basis_n) {
            throw std::invalid_argument("--basis-n must be a perfect square in 2D");
        }
        const RBFBasis basis = RBFBasis::grid_2d(bside, args.rbf_width_2d);
        std::vector<Vec2> locs;
        locs.reserve(L);
        for (int i = 1; i <= side; ++i)
            for (int j = 1; j <= side; ++j)
                locs.push_back({static_cast<double>(i) / side, static_cast<double>(j) / side});
        F = design_matrix(basis, locs);
        B = fit(ObservationMatrix2D{H, locs}, basis, args.ridge).B;
    } else {
        throw std::invalid_argument("--dimension must be 1 or 2");
    }
    const double residual = (B * F - H).frobenius_norm();
    json out = matrix_to_json(B);
    out["residual"] = residual;
    out["ridge"] = args.ridge;
    write_json(args.out, out);
    std::cout << "fit: residual=" << fmt(residual) << " wrote " << args.out << "\n";
    return kExitOk;
}

// ---- demo -------------------------------------------------------------------

struct DemoArgs {
    double alpha = 1.0;
    std::uint64_t seed = 42;
    int basis_n = 16;
    double rbf_sigma = 0.1;
    double ridge = kDefaultRidge;
    std::string out_report = "demo_report.json";
    std::string out_csv = "demo_attention.csv";
};

int cmd_demo(const DemoArgs& args) {
    DemoConfig cfg;
    cfg.alpha = args.alpha;
    cfg.seed = seed_from_env(args.seed);
    cfg.basis_size = args.basis_n;
    cfg.rbf_sigma = args.rbf_sigma;
    cfg.ridge = args.ridge;
    const DemoRun run = run_demo(cfg);

    json report;
    report["alpha"] = cfg.alpha;
    report["seed"] = cfg.seed;
    report["mu"] = run.mu;
    report["sigma2"] = run.sigma2;
    report["scores"] = run.scores;
    report["discrete_probs"] = run.discrete_probs;
    report["context_discrete"] = run.context_discrete;
    report["context_continuous"] = run.context_continuous;
    report["context"] = run.context;
    report["gradient_max_delta"] = run.max_grad_delta;
    report["gradient_tolerance"] = 1e-4;
    report["gradient_ok"] = run.max_grad_delta <= 1e-4;
    write_json(args.out_report, report);

    std::ofstream csv(args.out_csv, std::ios::binary);
    if (!csv) throw std::invalid_argument("cannot open for writing: " + args.out_csv);
    csv << "location,discrete_p,continuous_density\n";
    for (std::size_t l = 0; l < run.locations.size(); ++l) {
        csv << fmt(run.locations[l]) << "," << fmt(run.discrete_probs[l]) << ","
            << fmt(run.density_grid[l]) << "\n";
    }

    std::cout << "demo: alpha=" << cfg.alpha << " seed=" << cfg.seed
              << " grad_delta=" << fmt(run.max_grad_delta) << "\n";
    if (run.max_grad_delta > 1e-4) {
        std::cerr << "demo: end-to-end gradient check failed\n";
        return kExitNumericalFailure;
    }
    return kExitOk;
}

// ---- check --------------------------------------------------------------------

int cmd_check(const std::string& filter, bool as_json) {
    const auto results = run_all_checks(filter);
    if (as_json) {
        json arr = json::array();
        for (const auto& r : results) {
            arr.push_back({{"name", r.name},
                           {"passed", r.passed},
                           {"max_delta", r.max_delta},
                           {"tolerance", r.tolerance},
                           {"detail", r.detail}});
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            std::printf("[%s] %-34s max_delta=%-12.3e tol=%-9.0e %s\n",
                        r.passed ? "PASS" : "FAIL", r.name.c_str(), r.max_delta, r.tolerance,
                        r.detail.c_str());
        }
    }
    if (results.empty()) {
        std::cerr << "check: no checks matched filter '" << filter << "'\n";
        return kExitInputError;
    }
    return all_passed(results) ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous sparse attention toolkit"};
    app.require_subcommand(1);

    DensityArgs dargs;
    auto* density = app.add_subcommand("density", "evaluate a density to a grid file");
    density->add_option("--family", dargs.family,
                        "gaussian | truncated-parabola | triangular | gaussian-2d | "
                        "truncated-paraboloid");
    density->add_option("--mu", dargs.mu, "location (1 value in 1D, 2 in 2D)")->expected(1, 2);
    density->add_option("--sigma2", dargs.sigma2, "variance (1D families)");
    density->add_option("--b", dargs.b, "triangular scale");
    density->add_option("--cov", dargs.cov, "2D covariance a,b,c,d")->expected(4);
    density->add_option("--out-csv", dargs.out_csv, "grid output path");
    density->add_option("--out-json", dargs.out_json, "sidecar output path");

    AttendArgs aargs;
    auto* at = app.add_subcommand("attend", "run an attention forward/backward pass");
    at->add_option("--alpha", aargs.alpha, "1 (softmax) or 2 (sparsemax)");
    at->add_option("--dimension", aargs.dimension, "1 or 2");
    at->add_option("--mu", aargs.mu, "score mean")->expected(1, 2);
    at->add_option("--sigma2", aargs.sigma2, "score variance (1D)");
    at->add_option("--cov", aargs.cov, "score covariance a,b,c,d (2D)")->expected(4);
    at->add_option("--theta", aargs.theta, "canonical parameters (2 values 1D, 6 values 2D)")
        ->expected(2, 6);
    at->add_option("--basis-n", aargs.basis_n, "number of RBFs (perfect square in 2D)");
    at->add_option("--rbf-sigma", aargs.rbf_sigma, "RBF width sigma (1D)");
    at->add_option("--rbf-width-2d", aargs.rbf_width_2d, "RBF width w for w*I (2D)");
    at->add_option("--value-B", aargs.value_b, "value-function coefficient matrix JSON");
    at->add_flag("--check", aargs.check, "compare against the quadrature oracle");
    at->add_option("--angular-nodes", aargs.angular_nodes, "angular rule size (2D sparsemax)");
    at->add_option("--out", aargs.out, "result JSON path");

    FitArgs fargs;
    auto* ft = app.add_subcommand("fit", "fit a value function by ridge regression");
    ft->add_option("--input", fargs.input, "H matrix JSON (D x L)")->required();
    ft->add_option("--dimension", fargs.dimension, "1 or 2");
    ft->add_option("--basis-n", fargs.basis_n, "number of RBFs");
    ft->add_option("--rbf-sigma", fargs.rbf_sigma, "RBF width sigma (1D)");
    ft->add_option("--rbf-width-2d", fargs.rbf_width_2d, "RBF width (2D)");
    ft->add_option("--ridge", fargs.ridge, "ridge penalty");
    ft->add_option("--out", fargs.out, "output path for B");

    DemoArgs demo_args;
    auto* demo = app.add_subcommand("demo", "synthetic combined-attention pipeline");
    demo->add_option("--alpha", demo_args.alpha, "1 or 2");
    demo->add_option("--seed", demo_args.seed, "RNG seed (CONTATTN_SEED overrides)");
    demo->add_option("--basis-n", demo_args.basis_n, "number of RBFs");
    demo->add_option("--rbf-sigma", demo_args.rbf_sigma, "RBF width");
    demo->add_option("--ridge", demo_args.ridge, "ridge penalty");
    demo->add_option("--out-report", demo_args.out_report, "report JSON path");
    demo->add_option("--out-csv", demo_args.out_csv, "attention map CSV path");

    std::string filter;
    bool check_json = false;
    auto* check = app.add_subcommand("check", "run the acceptance check suite");
    check->add_option("--filter", filter, "substring filter on check names");
    check->add_flag("--json", check_json, "machine-readable report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (density->parsed()) return cmd_density(dargs);
        if (at->parsed()) return cmd_attend(aargs);
        if (ft->parsed()) return cmd_fit(fargs);
        if (demo->parsed()) return cmd_demo(demo_args);
        if (check->parsed()) return cmd_check(filter, check_json);
    } catch (const ToleranceNotReachedError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
