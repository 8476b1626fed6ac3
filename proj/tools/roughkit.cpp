#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "roughkit/controlled.hpp"
#include "roughkit/io.hpp"
#include "roughkit/rde.hpp"
#include "roughkit/sewing.hpp"
#include "roughkit/stats.hpp"
#include "roughkit/young.hpp"

using namespace roughkit;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string out = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string config_file;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool stochastic) {
    cmd->add_option("--out", opts.out, "artifact directory");
    auto* seed = cmd->add_option("--seed", opts.seed, "RNG seed");
    if (stochastic) seed->required();  // no wall-clock defaults
    seed->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--config", opts.config_file, "JSON config file");
}

json load_config(const CommonOpts& opts) {
    json cfg = json::object();
    if (!opts.config_file.empty()) {
        std::ifstream in(opts.config_file);
        if (!in) throw FormatError("cannot open config " + opts.config_file);
        in >> cfg;
    }
    if (opts.seed_set) cfg["seed"] = opts.seed;
    return cfg;
}

// Driver description shared by the lift/solve commands:
// {mode: strat|ito|fbm, grid_n, refinement, hurst, seed, depth}.
struct DriverSpec {
    std::string mode = "strat";
    int grid_n = 8;
    int refinement = 64;
    double hurst = 0.5;
    std::uint64_t seed = 0;
    int depth = 2;
    double alpha = 0.45;
};

DriverSpec driver_from_json(const json& cfg) {
    DriverSpec spec;
    spec.mode = cfg.value("mode", spec.mode);
    spec.grid_n = cfg.value("grid_n", spec.grid_n);
    spec.refinement = cfg.value("refinement", spec.refinement);
    spec.hurst = cfg.value("hurst", spec.hurst);
    spec.seed = cfg.value("seed", spec.seed);
    spec.depth = cfg.value("depth", spec.depth);
    spec.alpha = cfg.value("alpha", spec.alpha);
    return spec;
}

json driver_to_json(const DriverSpec& spec) {
    return json{{"mode", spec.mode},   {"grid_n", spec.grid_n}, {"refinement", spec.refinement},
                {"hurst", spec.hurst}, {"seed", spec.seed},     {"depth", spec.depth},
                {"alpha", spec.alpha}};
}

RoughPath build_driver(const DriverSpec& spec, int dim) {
    const Eigen::VectorXd grid = dyadic_times(spec.grid_n);
    if (spec.mode == "strat" || spec.mode == "ito") {
        RoughPath lift = brownian_lift(grid, spec.refinement,
                                       spec.mode == "ito" ? BrownianMode::ito : BrownianMode::strat,
                                       spec.seed, dim, spec.alpha);
        return spec.depth > 2 ? lyons_extend(lift, spec.depth) : lift;
    }
    if (spec.mode == "fbm") {
        GaussianSimConfig cfg;
        cfg.hurst = spec.hurst;
        cfg.grid = grid;
        cfg.seed = spec.seed;
        cfg.dim = dim;
        return canonical_lift(fbm_sample(cfg), spec.depth,
                              spec.alpha > 0 ? spec.alpha : spec.hurst - 0.05);
    }
    throw ParameterError("unknown driver mode '" + spec.mode + "'");
}

// Named 1-d coefficient fields for the solver commands.
VectorField sigma_preset(const std::string& name) {
    auto scalar_field = [](std::function<double(double)> s, std::function<double(double)> ds) {
        VectorField vf;
        vf.m = 1;
        vf.d = 1;
        vf.sigma = [s](const Eigen::VectorXd& y) {
            return Eigen::MatrixXd::Constant(1, 1, s(y(0)));
        };
        vf.dsigma = [ds](const Eigen::VectorXd& y) {
            return std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Constant(1, 1, ds(y(0)))};
        };
        return vf;
    };
    if (name == "zero") return scalar_field([](double) { return 0.0; }, [](double) { return 0.0; });
    if (name == "const") return scalar_field([](double) { return 1.0; }, [](double) { return 0.0; });
    if (name == "linear") return scalar_field([](double y) { return y; }, [](double) { return 1.0; });
    if (name == "sin")
        return scalar_field([](double y) { return std::sin(y); }, [](double y) { return std::cos(y); });
    if (name == "tanh")
        return scalar_field([](double y) { return std::tanh(y); },
                            [](double y) { return 1.0 - std::tanh(y) * std::tanh(y); });
    throw ParameterError("unknown sigma preset '" + name + "'");
}

OperatorPath read_operator_csv(const std::filesystem::path& file, int rows) {
    const SamplePath flat = read_path_csv(file);
    if (flat.dimension() % rows != 0)
        throw FormatError("operator CSV column count is not a multiple of --rows");
    const int cols = flat.dimension() / rows;
    std::vector<Eigen::MatrixXd> values(flat.size());
    for (Eigen::Index k = 0; k < flat.size(); ++k)
        values[k] = mat_rowmajor(flat.values.row(k).transpose(), rows, cols);
    return {flat.times, values};
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"roughkit: signatures, sewing, rough integrals and RDEs on sampled paths"};
    app.require_subcommand(1);

    // --- simulate-fbm ------------------------------------------------------
    CommonOpts fbm_opts;
    int fbm_grid = 8, fbm_dim = 1;
    double fbm_hurst = 0.5;
    auto* cmd_fbm = app.add_subcommand("simulate-fbm", "sample a fractional Brownian path");
    add_common(cmd_fbm, fbm_opts, true);
    cmd_fbm->add_option("--hurst", fbm_hurst, "Hurst parameter in (0,1)");
    cmd_fbm->add_option("--grid-level", fbm_grid, "dyadic grid level n (2^n cells)");
    cmd_fbm->add_option("--d", fbm_dim, "number of independent coordinates");

    // --- lift ---------------------------------------------------------------
    CommonOpts lift_opts;
    std::string lift_path;
    int lift_depth = 2, lift_dim = 1;
    double lift_alpha = 1.0;
    auto* cmd_lift = app.add_subcommand("lift", "canonical or Brownian rough-path lift");
    add_common(cmd_lift, lift_opts, false);
    cmd_lift->add_option("--path", lift_path, "path CSV to lift canonically");
    cmd_lift->add_option("--depth", lift_depth, "truncation depth");
    cmd_lift->add_option("--d", lift_dim, "driver dimension (config mode)");
    cmd_lift->add_option("--alpha", lift_alpha, "declared Hoelder exponent");

    // --- extend --------------------------------------------------------------
    CommonOpts ext_opts;
    std::string ext_input;
    int ext_depth = 3;
    double ext_alpha = 0.45;
    auto* cmd_ext = app.add_subcommand("extend", "Lyons extension of a rough path CSV");
    add_common(cmd_ext, ext_opts, false);
    cmd_ext->add_option("--input", ext_input, "rough path CSV")->required();
    cmd_ext->add_option("--to-depth", ext_depth, "target depth");
    cmd_ext->add_option("--alpha", ext_alpha, "declared Hoelder exponent of the input");

    // --- signature -------------------------------------------------------------
    CommonOpts sig_opts;
    std::string sig_path;
    int sig_depth = 4;
    auto* cmd_sig = app.add_subcommand("signature", "truncated signature of a path CSV");
    add_common(cmd_sig, sig_opts, false);
    cmd_sig->add_option("--path", sig_path, "path CSV")->required();
    cmd_sig->add_option("--depth", sig_depth, "truncation depth");

    // --- shuffle -----------------------------------------------------------------
    CommonOpts shuffle_opts;
    std::string shuffle_u, shuffle_v;
    auto* cmd_shuffle = app.add_subcommand("shuffle", "shuffle product of two words");
    add_common(cmd_shuffle, shuffle_opts, false);
    cmd_shuffle->add_option("--u", shuffle_u, "first word, e.g. 12")->required();
    cmd_shuffle->add_option("--v", shuffle_v, "second word, e.g. 3")->required();

    // --- young-int -----------------------------------------------------------
    CommonOpts young_opts;
    std::string young_f, young_g, young_quad = "left";
    int young_rows = 1;
    auto* cmd_young = app.add_subcommand("young-int", "Young integral of f against g");
    add_common(cmd_young, young_opts, false);
    cmd_young->add_option("--f", young_f, "integrand CSV (m*d columns, row-major)")->required();
    cmd_young->add_option("--g", young_g, "integrator path CSV")->required();
    cmd_young->add_option("--rows", young_rows, "integrand target dimension m");
    cmd_young->add_option("--quad", young_quad, "left | trapezoid");

    // --- rough-int ------------------------------------------------------------
    CommonOpts rough_opts;
    DriverSpec rough_spec;
    int rough_dim = 1;
    auto* cmd_rough = app.add_subcommand("rough-int", "rough integral of (X, Id) against a lift");
    add_common(cmd_rough, rough_opts, true);
    cmd_rough->add_option("--mode", rough_spec.mode, "strat | ito | fbm");
    cmd_rough->add_option("--grid-level", rough_spec.grid_n, "dyadic grid level");
    cmd_rough->add_option("--refinement", rough_spec.refinement, "per-cell refinement");
    cmd_rough->add_option("--d", rough_dim, "driver dimension");

    // --- solve-rde ---------------------------------------------------------------
    CommonOpts rde_opts_cli;
    DriverSpec rde_spec;
    std::string rde_sigma = "linear", rde_scheme = "davie";
    double rde_y0 = 1.0;
    auto* cmd_rde = app.add_subcommand("solve-rde", "solve dY = sigma(Y) dX");
    add_common(cmd_rde, rde_opts_cli, true);
    cmd_rde->add_option("--mode", rde_spec.mode, "strat | ito | fbm");
    cmd_rde->add_option("--grid-level", rde_spec.grid_n, "dyadic grid level");
    cmd_rde->add_option("--refinement", rde_spec.refinement, "per-cell refinement");
    cmd_rde->add_option("--hurst", rde_spec.hurst, "Hurst parameter (fbm mode)");
    cmd_rde->add_option("--sigma", rde_sigma, "zero | const | linear | sin | tanh");
    cmd_rde->add_option("--scheme", rde_scheme, "davie | picard");
    cmd_rde->add_option("--y0", rde_y0, "initial value");

    // --- linear-rde -----------------------------------------------------------------
    CommonOpts lin_opts;
    std::string lin_a = "[[[1.0]]]";
    std::string lin_y0 = "[1.0]";
    DriverSpec lin_spec;
    int lin_depth = 8;
    auto* cmd_lin = app.add_subcommand("linear-rde", "linear RDE power series");
    add_common(cmd_lin, lin_opts, true);
    cmd_lin->add_option("--a", lin_a, "coefficient matrices as JSON, one m x m block per coordinate");
    cmd_lin->add_option("--y0", lin_y0, "initial vector as JSON");
    cmd_lin->add_option("--mode", lin_spec.mode, "strat | ito | fbm");
    cmd_lin->add_option("--grid-level", lin_spec.grid_n, "dyadic grid level");
    cmd_lin->add_option("--depth", lin_depth, "series truncation depth");

    // --- wong-zakai ------------------------------------------------------------
    CommonOpts wz_opts;
    std::string wz_sigma = "linear";
    int wz_levels = 7, wz_seeds = 32, wz_master = 12;
    double wz_y0 = 1.0, wz_alpha = 0.4;
    auto* cmd_wz = app.add_subcommand("wong-zakai", "piecewise-linear driver convergence experiment");
    add_common(cmd_wz, wz_opts, true);
    cmd_wz->add_option("--sigma", wz_sigma, "coefficient preset");
    cmd_wz->add_option("--levels", wz_levels, "finest dyadic level");
    cmd_wz->add_option("--seeds", wz_seeds, "Monte-Carlo ensemble size");
    cmd_wz->add_option("--master-level", wz_master, "reference resolution");
    cmd_wz->add_option("--alpha", wz_alpha, "Hoelder exponent of the distance");
    cmd_wz->add_option("--y0", wz_y0, "initial value");

    // --- rogers-scan -------------------------------------------------------------
    CommonOpts rs_opts;
    double rs_hurst = 0.5, rs_p = 2.0;
    int rs_levels = 10, rs_seeds = 64;
    auto* cmd_rs = app.add_subcommand("rogers-scan", "dyadic p-variation scaling of fBm");
    add_common(cmd_rs, rs_opts, true);
    cmd_rs->add_option("--hurst", rs_hurst, "Hurst parameter");
    cmd_rs->add_option("--p", rs_p, "variation exponent");
    cmd_rs->add_option("--levels", rs_levels, "number of dyadic levels");
    cmd_rs->add_option("--seeds", rs_seeds, "ensemble size");

    // --- lyons-demo ------------------------------------------------------------------
    CommonOpts ld_opts;
    int ld_nmax = 10000;
    auto* cmd_ld = app.add_subcommand("lyons-demo", "divergent pairing series partial sums");
    add_common(cmd_ld, ld_opts, true);
    cmd_ld->add_option("--n-max", ld_nmax, "number of series terms");

    // --- neo-classical ---------------------------------------------------------------
    CommonOpts nc_opts;
    double nc_alpha = 0.5, nc_s = 1.0, nc_t = 1.0;
    int nc_n = 2, nc_sweep = 0;
    auto* cmd_nc = app.add_subcommand("neo-classical", "neo-classical inequality check");
    add_common(cmd_nc, nc_opts, false);
    cmd_nc->add_option("--alpha", nc_alpha, "exponent in (0,1]");
    cmd_nc->add_option("--n", nc_n, "level");
    cmd_nc->add_option("--s", nc_s, "first time");
    cmd_nc->add_option("--t", nc_t, "second time");
    cmd_nc->add_option("--sweep", nc_sweep, "random tuples to test (uses --seed)");

    // --- sewing-check ---------------------------------------------------------------
    CommonOpts sc_opts;
    std::string sc_germ = "young-smooth";
    double sc_beta = 2.0;
    int sc_grid = 7, sc_count = 1;
    auto* cmd_sc = app.add_subcommand("sewing-check", "maximal-inequality check on generated germs");
    add_common(cmd_sc, sc_opts, true);
    cmd_sc->add_option("--germ", sc_germ, "young-smooth | brownian-rough");
    cmd_sc->add_option("--beta", sc_beta, "inequality exponent (young-smooth)");
    cmd_sc->add_option("--grid-level", sc_grid, "dyadic grid level");
    cmd_sc->add_option("--count", sc_count, "number of instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Timer timer;
    try {
        if (cmd_fbm->parsed()) {
            const json cfg = load_config(fbm_opts);
            GaussianSimConfig sim;
            sim.hurst = cfg.value("hurst", fbm_hurst);
            sim.grid = dyadic_times(cfg.value("grid_n", fbm_grid));
            sim.seed = cfg.value("seed", fbm_opts.seed);
            sim.dim = cfg.value("dim", fbm_dim);
            write_path_csv(std::filesystem::path(fbm_opts.out) / "path.csv", fbm_sample(sim));
            write_manifest(fbm_opts.out, "simulate-fbm",
                           json{{"hurst", sim.hurst},
                                {"grid_n", cfg.value("grid_n", fbm_grid)},
                                {"dim", sim.dim}},
                           sim.seed, timer.seconds());
        } else if (cmd_lift->parsed()) {
            const json cfg = load_config(lift_opts);
            if (lift_path.empty() && !cfg.contains("seed")) {
                std::cerr << "lift: stochastic drivers need --seed or a config seed\n";
                return 2;
            }
            RoughPath lift = [&] {
                if (!lift_path.empty())
                    return canonical_lift(read_path_csv(lift_path), lift_depth, lift_alpha);
                DriverSpec spec = driver_from_json(cfg);
                if (cfg.contains("depth")) return build_driver(spec, lift_dim);
                spec.depth = lift_depth;
                return build_driver(spec, lift_dim);
            }();
            write_roughpath_csv(std::filesystem::path(lift_opts.out) / "roughpath.csv", lift);
            write_manifest(lift_opts.out, "lift",
                           lift_path.empty() ? driver_to_json(driver_from_json(cfg))
                                             : json{{"path", lift_path}, {"depth", lift_depth}},
                           lift_opts.seed, timer.seconds());
        } else if (cmd_ext->parsed()) {
            const RoughPath input = read_roughpath_csv(ext_input, ext_alpha);
            const RoughPath extended = lyons_extend(input, ext_depth);
            write_roughpath_csv(std::filesystem::path(ext_opts.out) / "roughpath.csv", extended);
            const DecayFit fit = extension_decay_fit(extended, ext_alpha);
            json decay{{"m", fit.m}, {"beta", fit.beta}, {"level_sups", fit.level_sups}};
            std::ofstream(std::filesystem::path(ext_opts.out) / "decay.json") << decay.dump(2) << "\n";
            write_manifest(ext_opts.out, "extend",
                           json{{"input", ext_input}, {"to_depth", ext_depth}, {"alpha", ext_alpha}},
                           ext_opts.seed, timer.seconds());
        } else if (cmd_sig->parsed()) {
            const SamplePath path = read_path_csv(sig_path);
            const RoughPath lift = canonical_lift(path, sig_depth);
            write_tensor_csv(std::filesystem::path(sig_opts.out) / "signature.csv",
                             lift.evaluate(path.t0(), path.t1()));
            write_manifest(sig_opts.out, "signature", json{{"path", sig_path}, {"depth", sig_depth}},
                           sig_opts.seed, timer.seconds());
        } else if (cmd_shuffle->parsed()) {
            const FormalWordSum result =
                shuffle(Word::from_string(shuffle_u), Word::from_string(shuffle_v));
            std::cout << result.str() << "\n";
            write_manifest(shuffle_opts.out, "shuffle", json{{"u", shuffle_u}, {"v", shuffle_v}},
                           shuffle_opts.seed, timer.seconds());
        } else if (cmd_young->parsed()) {
            const SamplePath g = read_path_csv(young_g);
            const OperatorPath f = read_operator_csv(young_f, young_rows);
            const YoungQuadrature quad =
                young_quad == "trapezoid" ? YoungQuadrature::trapezoid : YoungQuadrature::left;
            const SamplePath integral = young_integral(f, g, g.t0(), g.t1(), quad);
            write_path_csv(std::filesystem::path(young_opts.out) / "integral.csv", integral);
            write_manifest(young_opts.out, "young-int",
                           json{{"f", young_f}, {"g", young_g}, {"quad", young_quad}},
                           young_opts.seed, timer.seconds());
        } else if (cmd_rough->parsed()) {
            const json cfg = load_config(rough_opts);
            DriverSpec spec = driver_from_json(cfg);
            if (!cfg.contains("mode")) spec.mode = rough_spec.mode;
            if (!cfg.contains("grid_n")) spec.grid_n = rough_spec.grid_n;
            if (!cfg.contains("refinement")) spec.refinement = rough_spec.refinement;
            if (!cfg.contains("seed")) spec.seed = rough_opts.seed;
            auto lift = std::make_shared<const RoughPath>(build_driver(spec, rough_dim));
            const RoughIntegralResult r = rough_integral(self_integrand(lift));
            const SamplePath z = r.z.y_path();
            write_path_csv(std::filesystem::path(rough_opts.out) / "integral.csv", z);
            json info = driver_to_json(spec);
            info["cauchy_gap"] = r.cauchy_gap;
            write_manifest(rough_opts.out, "rough-int", info, spec.seed, timer.seconds());
        } else if (cmd_rde->parsed()) {
            const json cfg = load_config(rde_opts_cli);
            DriverSpec spec = driver_from_json(cfg);
            if (!cfg.contains("mode")) spec.mode = rde_spec.mode;
            if (!cfg.contains("grid_n")) spec.grid_n = rde_spec.grid_n;
            if (!cfg.contains("refinement")) spec.refinement = rde_spec.refinement;
            if (!cfg.contains("hurst")) spec.hurst = rde_spec.hurst;
            if (!cfg.contains("seed")) spec.seed = rde_opts_cli.seed;
            const VectorField vf = sigma_preset(cfg.value("sigma", rde_sigma));
            auto lift = std::make_shared<const RoughPath>(build_driver(spec, vf.d));
            const RdeScheme scheme =
                cfg.value("scheme", rde_scheme) == "picard" ? RdeScheme::picard : RdeScheme::davie;
            const RdeResult r =
                rde_solve(vf, lift, Eigen::VectorXd::Constant(1, cfg.value("y0", rde_y0)), scheme);
            write_path_csv(std::filesystem::path(rde_opts_cli.out) / "solution.csv",
                           r.solution.y_path());
            json info = driver_to_json(spec);
            info["sigma"] = cfg.value("sigma", rde_sigma);
            info["scheme"] = cfg.value("scheme", rde_scheme);
            info["y0"] = cfg.value("y0", rde_y0);
            write_manifest(rde_opts_cli.out, "solve-rde", info, spec.seed, timer.seconds());
        } else if (cmd_lin->parsed()) {
            const json cfg = load_config(lin_opts);
            DriverSpec spec = driver_from_json(cfg);
            if (!cfg.contains("seed")) spec.seed = lin_opts.seed;
            if (!cfg.contains("mode")) spec.mode = lin_spec.mode;
            if (!cfg.contains("grid_n")) spec.grid_n = lin_spec.grid_n;
            const json a_json = cfg.contains("a") ? cfg["a"] : json::parse(lin_a);
            const json y0_json = cfg.contains("y0") ? cfg["y0"] : json::parse(lin_y0);
            std::vector<Eigen::MatrixXd> mats;
            for (const auto& block : a_json) {
                Eigen::MatrixXd m(block.size(), block.empty() ? 0 : block[0].size());
                for (Eigen::Index r = 0; r < m.rows(); ++r)
                    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = block[r][c].get<double>();
                mats.push_back(std::move(m));
            }
            Eigen::VectorXd y0(y0_json.size());
            for (Eigen::Index i = 0; i < y0.size(); ++i) y0(i) = y0_json[i].get<double>();
            spec.depth = std::max(spec.depth, cfg.value("depth", lin_depth));
            const RoughPath driver = build_driver(spec, static_cast<int>(mats.size()));
            const LinearRdeResult r = linear_rde_series(mats, driver, y0, cfg.value("depth", lin_depth));
            write_path_csv(std::filesystem::path(lin_opts.out) / "solution.csv", r.y);
            json info = driver_to_json(spec);
            info["truncation"] = cfg.value("depth", lin_depth);
            info["tail_bound"] = r.tail_bound;
            info["matrix_norm"] = r.matrix_norm;
            write_manifest(lin_opts.out, "linear-rde", info, spec.seed, timer.seconds());
        } else if (cmd_wz->parsed()) {
            const json cfg = load_config(wz_opts);
            const VectorField vf = sigma_preset(cfg.value("sigma", wz_sigma));
            WongZakaiOptions opts;
            opts.master_level = cfg.value("master_level", wz_master);
            opts.alpha = cfg.value("alpha", wz_alpha);
            const int levels = cfg.value("levels", wz_levels);
            const int seeds = cfg.value("seeds", wz_seeds);
            const std::uint64_t base_seed = cfg.value("seed", wz_opts.seed);
            const Eigen::VectorXd y0 = Eigen::VectorXd::Constant(1, cfg.value("y0", wz_y0));

            std::vector<std::vector<WongZakaiRow>> all(seeds);
            for_each_task(seeds, [&](std::size_t s) {
                all[s] = wong_zakai_experiment(vf, y0, levels, base_seed + s, opts);
            });
            std::vector<std::vector<double>> rows;
            for (int s = 0; s < seeds; ++s)
                for (const auto& row : all[s])
                    rows.push_back({static_cast<double>(s), static_cast<double>(row.level),
                                    row.sup_dist, row.holder_dist, row.rho});
            write_table_csv(std::filesystem::path(wz_opts.out) / "errors.csv",
                            {"seed", "level", "sup", "holder", "rho"}, rows);
            std::vector<std::vector<double>> summary;
            for (std::size_t i = 0; i < all[0].size(); ++i) {
                std::vector<double> sup, holder, rho;
                for (int s = 0; s < seeds; ++s) {
                    sup.push_back(all[s][i].sup_dist);
                    holder.push_back(all[s][i].holder_dist);
                    rho.push_back(all[s][i].rho);
                }
                summary.push_back({static_cast<double>(all[0][i].level), median(sup), median(holder),
                                   median(rho)});
            }
            write_table_csv(std::filesystem::path(wz_opts.out) / "summary.csv",
                            {"level", "median_sup", "median_holder", "median_rho"}, summary);
            write_manifest(wz_opts.out, "wong-zakai",
                           json{{"sigma", cfg.value("sigma", wz_sigma)},
                                {"levels", levels},
                                {"seeds", seeds},
                                {"master_level", opts.master_level},
                                {"alpha", opts.alpha}},
                           base_seed, timer.seconds());
        } else if (cmd_rs->parsed()) {
            const json cfg = load_config(rs_opts);
            const double hurst = cfg.value("hurst", rs_hurst);
            const double p = cfg.value("p", rs_p);
            const int levels = cfg.value("levels", rs_levels);
            const int seeds = cfg.value("seeds", rs_seeds);
            const std::uint64_t base_seed = cfg.value("seed", rs_opts.seed);
            const RogersScanResult r = rogers_scan(hurst, p, levels, seeds, base_seed);
            std::vector<std::vector<double>> rows;
            for (int s = 0; s < seeds; ++s)
                for (int l = 0; l < levels; ++l)
                    rows.push_back({static_cast<double>(s), static_cast<double>(r.levels[l]),
                                    r.pvar_sums(s, l)});
            write_table_csv(std::filesystem::path(rs_opts.out) / "pvar.csv", {"seed", "level", "pvar"},
                            rows);
            std::vector<std::vector<double>> summary;
            for (int l = 0; l < levels; ++l)
                summary.push_back(
                    {static_cast<double>(r.levels[l]), r.medians(l), r.slope});
            write_table_csv(std::filesystem::path(rs_opts.out) / "summary.csv",
                            {"level", "median", "slope"}, summary);
            std::cout << "slope " << fmt17(r.slope) << "\n";
            write_manifest(rs_opts.out, "rogers-scan",
                           json{{"hurst", hurst}, {"p", p}, {"levels", levels}, {"seeds", seeds}},
                           base_seed, timer.seconds());
        } else if (cmd_ld->parsed()) {
            const json cfg = load_config(ld_opts);
            const int n_max = cfg.value("n_max", ld_nmax);
            const std::uint64_t seed = cfg.value("seed", ld_opts.seed);
            const Eigen::VectorXd sums = lyons_divergence_demo(n_max, seed);
            std::vector<std::vector<double>> rows;
            rows.reserve(n_max);
            for (int n = 1; n <= n_max; ++n)
                rows.push_back({static_cast<double>(n), sums(n - 1)});
            write_table_csv(std::filesystem::path(ld_opts.out) / "partial_sums.csv",
                            {"n", "partial_sum"}, rows);
            write_manifest(ld_opts.out, "lyons-demo", json{{"n_max", n_max}}, seed, timer.seconds());
        } else if (cmd_nc->parsed()) {
            const json cfg = load_config(nc_opts);
            std::vector<std::vector<double>> rows;
            if (nc_sweep > 0) {
                std::mt19937_64 rng(cfg.value("seed", nc_opts.seed));
                std::uniform_real_distribution<double> ua(1e-6, 1.0), us(1e-6, 10.0);
                std::uniform_int_distribution<int> un(0, 20);
                for (int rep = 0; rep < nc_sweep; ++rep) {
                    const double a = ua(rng), s = us(rng), t = us(rng);
                    const int n = un(rng);
                    const auto r = neo_classical_check(a, n, s, t);
                    rows.push_back({a, static_cast<double>(n), s, t, r.lhs, r.rhs,
                                    r.holds ? 1.0 : 0.0});
                }
            } else {
                const auto r = neo_classical_check(nc_alpha, nc_n, nc_s, nc_t);
                rows.push_back({nc_alpha, static_cast<double>(nc_n), nc_s, nc_t, r.lhs, r.rhs,
                                r.holds ? 1.0 : 0.0});
                std::cout << "lhs " << fmt17(r.lhs) << " rhs " << fmt17(r.rhs) << " holds "
                          << (r.holds ? 1 : 0) << "\n";
            }
            write_table_csv(std::filesystem::path(nc_opts.out) / "neo_classical.csv",
                            {"alpha", "n", "s", "t", "lhs", "rhs", "holds"}, rows);
            write_manifest(nc_opts.out, "neo-classical", json{{"sweep", nc_sweep}},
                           cfg.value("seed", nc_opts.seed), timer.seconds());
        } else if (cmd_sc->parsed()) {
            const json cfg = load_config(sc_opts);
            const std::uint64_t base_seed = cfg.value("seed", sc_opts.seed);
            const int count = cfg.value("count", sc_count);
            const int grid_level = cfg.value("grid_level", sc_grid);
            const std::string germ_kind = cfg.value("germ", sc_germ);
            std::vector<std::vector<double>> rows;
            for (int inst = 0; inst < count; ++inst) {
                std::mt19937_64 rng(base_seed + inst);
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                SewingBoundReport report;
                double beta = cfg.value("beta", sc_beta);
                if (germ_kind == "young-smooth") {
                    const Eigen::VectorXd t = dyadic_times(grid_level);
                    const double a1 = u(rng), a2 = u(rng), p1 = u(rng), p2 = u(rng);
                    const SamplePath f = sample_scalar_function(t, [&](double s) {
                        return a1 * std::sin(M_PI * s + p1) + 0.5 * std::cos(2 * s);
                    });
                    const SamplePath g = sample_scalar_function(t, [&](double s) {
                        return a2 * std::sin(2 * M_PI * s + p2) + s;
                    });
                    std::vector<Eigen::MatrixXd> fv(f.size());
                    for (Eigen::Index k = 0; k < f.size(); ++k)
                        fv[k] = f.values.row(k).transpose().eval();
                    report = sewing_bound_check(young_germ(OperatorPath(t, fv), g), beta, 0.0, 1.0);
                } else if (germ_kind == "brownian-rough") {
                    const double alpha = 0.45;
                    beta = 3 * alpha;
                    const RoughPath b = brownian_lift(dyadic_times(grid_level), 4,
                                                      BrownianMode::strat, base_seed + inst, 2, alpha);
                    auto lift = std::make_shared<const RoughPath>(b);
                    const SamplePath bp = b.level1_path();
                    const Eigen::Index n = bp.size();
                    std::vector<Eigen::MatrixXd> y(n), yp(n);
                    for (Eigen::Index k = 0; k < n; ++k) {
                        y[k] = Eigen::MatrixXd(1, 2);
                        y[k] << std::sin(bp.values(k, 0)), std::cos(bp.values(k, 1));
                        yp[k] = Eigen::MatrixXd::Zero(1, 4);
                        yp[k](0, 0) = std::cos(bp.values(k, 0));   // (i=1, j=1)
                        yp[k](0, 3) = -std::sin(bp.values(k, 1));  // (i=2, j=2)
                    }
                    report = sewing_bound_check(
                        rough_integral_germ(ControlledPath(lift, 1, 1, y, yp)), beta, 0.0, 1.0);
                } else {
                    throw ParameterError("unknown germ kind '" + germ_kind + "'");
                }
                rows.push_back({static_cast<double>(inst), beta, report.lhs, report.rhs,
                                report.delta_norm, report.constant, report.holds ? 1.0 : 0.0});
            }
            write_table_csv(std::filesystem::path(sc_opts.out) / "sewing_check.csv",
                            {"instance", "beta", "lhs", "rhs", "delta_norm", "constant", "holds"},
                            rows);
            write_manifest(sc_opts.out, "sewing-check",
                           json{{"germ", germ_kind}, {"count", count}, {"grid_level", grid_level}},
                           base_seed, timer.seconds());
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
