// floerlab: spectral-Galerkin toolkit CLI.
// Subcommands: spectrum, simulate, orbit, floer, verify, report.
// Exit codes: 0 success, 1 numerical non-convergence, 2 parse/usage error,
// 3 validation error (message names the offending config field).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floerlab/fredholm.hpp"
#include "floerlab/io.hpp"

namespace fs = std::filesystem;
using namespace floerlab;
using nlohmann::json;

namespace {

std::string default_out_root() {
    const char* env = std::getenv("FLOERLAB_OUT");
    return env ? env : "runs";
}

fs::path prepare_out_dir(const RunConfig& cfg, const std::string& flag_out) {
    fs::path dir = flag_out.empty() ? fs::path(cfg.out_dir) : fs::path(flag_out);
    fs::create_directories(dir);
    json resolved = cfg.resolved;
    resolved["meta"] = meta_json(cfg);
    write_json((dir / "resolved-config.json").string(), resolved);
    return dir;
}

OrbitContext context_from_config(const RunConfig& cfg) {
    return make_context(cfg.spec, cfg.n_max, cfg.m_max, cfg.coupling, cfg.sigma);
}

// Gate used by orbit/floer/verify: a resonant period invalidates the twisted
// basis, so it is a config error, not a numerical failure.
void require_admissible(const OrbitContext& ctx) {
    SpectrumReport rep = admissibility_profile(ctx.spec, ctx.modes, {});
    if (rep.resonant)
        throw ValidationError("T", "resonant period: some eps_n = 0 on this lattice; "
                                   "twisted loops are not defined");
}

json loop_container_header(const RunConfig& cfg, const std::string& kind, int dim) {
    json h = model_to_json(cfg.spec, cfg.n_max, cfg.m_max);
    h["meta"] = meta_json(cfg);
    h["kind"] = kind;
    h["dim"] = dim;
    return h;
}

Eigen::VectorXd read_loop_container(const std::string& path, const LoopBasis& b) {
    auto [header, data] = read_container(path);
    if (header.value("kind", "") != "loop")
        throw ValidationError("input", path + ": not a loop container");
    if (int(data.size()) != b.dim())
        throw ValidationError("input", path + ": dimension " + std::to_string(data.size()) +
                                           " != basis dim " + std::to_string(b.dim()));
    return Eigen::Map<const Eigen::VectorXd>(data.data(), Eigen::Index(data.size()));
}

Orbit solve_orbit(const OrbitContext& ctx, const RunConfig& cfg, const Eigen::VectorXd& init) {
    return newton_orbit(ctx, init, cfg.tol, cfg.max_iter, cfg.spec.k, cfg.spec.h_prime);
}

// ---- spectrum ---------------------------------------------------------------

int run_spectrum(const RunConfig& cfg, const std::string& out_flag) {
    fs::path dir = prepare_out_dir(cfg, out_flag);
    ModeSet modes = build_lattice(cfg.spec, cfg.n_max);
    SpectrumReport rep = admissibility_profile(cfg.spec, modes, cfg.h_values);
    json meta = meta_json(cfg);
    write_json((dir / "spectrum.json").string(), spectrum_to_json(rep, meta));
    write_spectrum_csv((dir / "spectrum.csv").string(), rep, cfg.spec.h, meta);
    std::cout << "spectrum: " << rep.shells.size() << " shells, fitted h0 = " << rep.fitted_h0
              << " (floor " << rep.h0_floor << "), "
              << (rep.resonant ? "RESONANT" : "no exact resonance") << "\n";
    return 0;
}

// ---- simulate ---------------------------------------------------------------

int run_simulate(const RunConfig& cfg, const std::string& out_flag, double t_final, double dt,
                 const std::string& output, int checkpoint_every) {
    fs::path dir = prepare_out_dir(cfg, out_flag);
    OrbitContext ctx = context_from_config(cfg);
    json meta = meta_json(cfg);

    // Deterministic initial state from the config seed: particle at rest-ish,
    // field a smooth random draw decaying like theta^{-(h+1)}.
    PhasePoint u;
    u.q = Eigen::VectorXd::Zero(cfg.spec.N);
    u.p = Eigen::VectorXd::Constant(cfg.spec.N, 0.2);
    u.field = FieldVector::zero(ctx.modes.size());
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < ctx.modes.size(); ++i) {
        double w = 0.1 * std::pow(ctx.modes.theta[i], -(cfg.spec.h + 1.0));
        u.field.a[Eigen::Index(i)] = w * gauss(rng);
        u.field.b[Eigen::Index(i)] = w * gauss(rng);
    }

    fs::path csv = output.empty() ? dir / "trajectory.csv" : fs::path(output);
    std::ofstream out(csv);
    if (!out) throw ValidationError("output", "cannot write " + csv.string());
    out << "# version=" << meta["version"].get<std::string>()
        << " config_hash=" << meta["config_hash"].get<std::string>() << "\n";
    out << "t";
    for (int c = 0; c < cfg.spec.N; ++c) out << ",q" << c;
    for (int c = 0; c < cfg.spec.N; ++c) out << ",p" << c;
    out << ",energy,field_h12_norm\n";
    out.precision(17);

    const auto row = [&](double t) {
        out << t;
        for (int c = 0; c < cfg.spec.N; ++c) out << "," << u.q[c];
        for (int c = 0; c < cfg.spec.N; ++c) out << "," << u.p[c];
        out << ","
            << hamiltonian(u, t, cfg.coupling, cfg.spec, ctx.modes, ctx.lambda, ctx.rho) << ","
            << scale_norm(u.field, 0.5, ctx.modes, ctx.lambda) << "\n";
    };

    int n_steps = int(std::ceil(t_final / dt));
    row(0.0);
    for (int s = 0; s < n_steps; ++s) {
        double t = s * dt;
        u = strang_step(u, t, dt, cfg.coupling, cfg.spec, ctx.modes, ctx.lambda, ctx.rho);
        row(t + dt);
        if (checkpoint_every > 0 && (s + 1) % checkpoint_every == 0) {
            std::vector<double> state;
            for (int c = 0; c < cfg.spec.N; ++c) state.push_back(u.q[c]);
            for (int c = 0; c < cfg.spec.N; ++c) state.push_back(u.p[c]);
            for (Eigen::Index i = 0; i < u.field.a.size(); ++i) state.push_back(u.field.a[i]);
            for (Eigen::Index i = 0; i < u.field.b.size(); ++i) state.push_back(u.field.b[i]);
            char name[64];
            std::snprintf(name, sizeof(name), "checkpoint_%06d.bin", s + 1);
            json h = loop_container_header(cfg, "state", int(state.size()));
            h["t"] = (s + 1) * dt;
            write_container((dir / name).string(), h, state);
        }
    }
    std::cout << "simulate: " << n_steps << " steps to t = " << n_steps * dt << ", trajectory "
              << csv.string() << "\n";
    return 0;
}

// ---- orbit ------------------------------------------------------------------

int run_orbit(const RunConfig& cfg, const std::string& out_flag, const std::string& init,
              bool sweep) {
    fs::path dir = prepare_out_dir(cfg, out_flag);
    OrbitContext ctx = context_from_config(cfg);
    require_admissible(ctx);
    json meta = meta_json(cfg);

    Eigen::VectorXd x0;
    if (init == "decoupled")
        x0 = Eigen::VectorXd::Zero(ctx.basis.dim());
    else
        x0 = read_loop_container(init, ctx.basis);

    Orbit orb = solve_orbit(ctx, cfg, x0);
    write_container((dir / "orbit.bin").string(),
                    loop_container_header(cfg, "loop", ctx.basis.dim()),
                    std::vector<double>(orb.x.data(), orb.x.data() + orb.x.size()));
    write_loop_csv((dir / "orbit_field.csv").string(), ctx.basis, orb.x, meta);

    std::vector<int> ells = sweep ? cfg.ell_sweep : std::vector<int>{cfg.ell};
    NondegeneracyReport nd =
        nondegeneracy_margin(ctx, orb, cfg.spec.k, cfg.spec.h_prime, ells, 1e-6);

    json j = meta;
    j["converged"] = orb.converged;
    j["residual_norm"] = orb.residual_norm;
    j["iterations"] = orb.iterations;
    j["sigma_min"] = nd.sigma_min;
    j["min_return_distance"] = nd.min_return_distance;
    j["symplectic_defect"] = nd.symplectic_defect;
    j["threshold"] = nd.threshold;
    j["verdict"] = nd.verdict;
    j["kh_variants"] = nd.kh_variants;
    j["ell_sweep"] = json::array();
    for (auto& [ell, sv] : nd.ell_sweep) j["ell_sweep"].push_back({{"ell", ell}, {"sigma_min", sv}});
    write_json((dir / "nondegeneracy.json").string(), j);

    {
        std::ofstream out(dir / "nondegeneracy.csv");
        out << "# version=" << meta["version"].get<std::string>()
            << " config_hash=" << meta["config_hash"].get<std::string>() << "\n";
        out << "ell,sigma_min\n";
        out.precision(17);
        for (auto& [ell, sv] : nd.ell_sweep) out << ell << "," << sv << "\n";
    }

    std::cout << "orbit: residual " << orb.residual_norm << " after " << orb.iterations
              << " iterations, sigma_min " << nd.sigma_min << ", "
              << (nd.verdict ? "nondegenerate" : "DEGENERATE") << "\n";
    if (!orb.converged) {
        std::cerr << "orbit: Newton did not reach tol " << cfg.tol << "\n";
        return 1;
    }
    return 0;
}

// ---- floer ------------------------------------------------------------------

int run_floer(const RunConfig& cfg, const std::string& out_flag, const std::string& minus_path,
              const std::string& plus_path, double s_half_width, double ds, double tol) {
    fs::path dir = prepare_out_dir(cfg, out_flag);
    OrbitContext ctx = context_from_config(cfg);
    require_admissible(ctx);
    json meta = meta_json(cfg);

    const auto load_end = [&](const std::string& p) -> Eigen::VectorXd {
        if (p == "decoupled") {
            Orbit o = solve_orbit(ctx, cfg, Eigen::VectorXd::Zero(ctx.basis.dim()));
            if (!o.converged) throw std::runtime_error("asymptotic orbit solve diverged");
            return o.x;
        }
        return read_loop_container(p, ctx.basis);
    };
    Eigen::VectorXd um = load_end(minus_path), up = load_end(plus_path);

    int half = std::max(1, int(std::lround(s_half_width / ds)));
    int ns = 2 * half + 1;
    FloerCurve init;
    init.u.s_half_width = s_half_width;
    init.u.slices.resize(ctx.basis.dim(), ns);
    for (int j = 0; j < ns; ++j) {
        double s = -s_half_width + j * (2.0 * s_half_width / (ns - 1));
        double w = 0.5 * (1.0 + std::tanh(s));
        init.u.slices.col(j) = (1.0 - w) * um + w * up;
    }
    init.u_minus = um;
    init.u_plus = up;

    FloerCurve curve =
        floer_newton(ctx, um, up, init, tol, cfg.max_iter, cfg.spec.k, cfg.spec.h_prime);

    {
        json h = loop_container_header(cfg, "strip", ctx.basis.dim());
        h["ns"] = curve.u.ns();
        h["s_half_width"] = s_half_width;
        std::vector<double> flat(curve.u.slices.data(),
                                 curve.u.slices.data() + curve.u.slices.size());
        write_container((dir / "floer_curve.bin").string(), h, flat);
    }
    {
        std::ofstream out(dir / "floer_slices.csv");
        out << "# version=" << meta["version"].get<std::string>()
            << " config_hash=" << meta["config_hash"].get<std::string>() << "\n";
        out << "s,dist_to_u_plus,dist_to_u_minus,energy_density\n";
        out.precision(17);
        double dss = curve.u.ds();
        for (int j = 0; j < curve.u.ns(); ++j) {
            double s = -s_half_width + j * dss;
            Eigen::VectorXd dplus = curve.u.slices.col(j) - up;
            Eigen::VectorXd dminus = curve.u.slices.col(j) - um;
            Eigen::VectorXd left = (j > 0) ? Eigen::VectorXd(curve.u.slices.col(j - 1)) : um;
            Eigen::VectorXd right =
                (j + 1 < curve.u.ns()) ? Eigen::VectorXd(curve.u.slices.col(j + 1)) : up;
            double dus = ((right - left) / (2.0 * dss)).norm();
            out << s << ","
                << loop_norm_standard(ctx.basis, dplus, 0, cfg.spec.h_prime) << ","
                << loop_norm_standard(ctx.basis, dminus, 0, cfg.spec.h_prime) << ","
                << 0.5 * dus * dus << "\n";
        }
    }

    std::cout << "floer: residual " << curve.residual_norm << " after " << curve.iterations
              << " iterations, kernel_dim " << curve.kernel_dim << "\n";
    if (!curve.converged) {
        std::cerr << "floer: Newton did not reach tol " << tol << "\n";
        return 1;
    }
    return 0;
}

// ---- verify -----------------------------------------------------------------

int run_verify(const RunConfig& cfg, const std::string& out_flag, const std::string& suite,
               unsigned long long seed) {
    fs::path dir = prepare_out_dir(cfg, out_flag);
    OrbitContext ctx = context_from_config(cfg);
    require_admissible(ctx);
    json meta = meta_json(cfg);
    const int k = cfg.spec.k;
    const double hp = cfg.spec.h_prime;

    const auto orbit_x = [&]() {
        Orbit o = solve_orbit(ctx, cfg, Eigen::VectorXd::Zero(ctx.basis.dim()));
        if (!o.converged) throw std::runtime_error("base orbit solve diverged");
        return o.x;
    };
    const auto constant_curve = [&](const Eigen::VectorXd& x) {
        FloerCurve c;
        int half = std::max(1, int(std::lround(cfg.s_half_width / cfg.ds)));
        c.u.s_half_width = cfg.s_half_width;
        c.u.slices = x.replicate(1, 2 * half + 1);
        c.u_minus = x;
        c.u_plus = x;
        return c;
    };

    VerificationReport rep;
    json extra;
    if (suite == "isometry") {
        rep = verify_isometry(ctx, k, hp, 1000, unsigned(seed));
    } else if (suite == "inclusions") {
        std::vector<double> hpp = {0.5, 1.0, std::max(0.5, cfg.spec.h - hp)};
        rep = verify_inclusions(ctx, k, cfg.spec.h, hp, hpp);
    } else if (suite == "tail") {
        rep = tail_decay_profile(ctx, orbit_x(), cfg.ell_sweep, cfg.spec.h, k, hp);
    } else if (suite == "stars") {
        rep = verify_star_inequalities(ctx, orbit_x(), cfg.ell_sweep, k, hp);
    } else if (suite == "semifredholm") {
        rep = semifredholm_constant(ctx, constant_curve(orbit_x()), cfg.ell, k, hp, 16,
                                    unsigned(seed));
    } else if (suite == "adjoint") {
        KernelReport kr = adjoint_kernel_dim(ctx, constant_curve(orbit_x()), k, hp);
        rep.suite = "adjoint";
        rep.norm_pair = "modified-k -> standard-(k-1)";
        rep.cases.push_back({"dim_ker", double(kr.dim_ker), 0.0, -double(kr.dim_ker),
                             kr.dim_ker == 0});
        rep.cases.push_back({"dim_coker", double(kr.dim_coker), 0.0, -double(kr.dim_coker),
                             kr.dim_coker == 0});
        rep.metrics.emplace_back("threshold", kr.threshold);
        rep.pass = kr.dim_ker == 0 && kr.dim_coker == 0;
        extra["method"] = kr.method;
        extra["smallest"] = kr.smallest;
    } else if (suite == "genericity") {
        rep = genericity_probe(ctx, 1e-2, 5, unsigned(seed), k, hp, 1e-8);
    } else {
        throw CLI::ValidationError("--suite", "unknown suite " + suite);
    }

    json j = verification_to_json(rep, meta);
    j["seed"] = seed;
    for (auto& [key, val] : extra.items()) j[key] = val;
    write_json((dir / ("verify_" + suite + ".json")).string(), j);
    write_trend_csv((dir / ("verify_" + suite + "_trend.csv")).string(), rep, meta);
    std::cout << "verify " << suite << ": " << (rep.pass ? "pass" : "FAIL") << " ("
              << rep.cases.size() << " cases)\n";
    return rep.pass ? 0 : 1;
}

// ---- report -----------------------------------------------------------------

int run_report(const std::string& dir_flag) {
    fs::path dir(dir_flag);
    if (!fs::is_directory(dir)) throw ValidationError("dir", dir_flag + " is not a directory");
    std::vector<fs::path> files;
    for (auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json" && e.path().filename() != "resolved-config.json")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::ostringstream md;
    md << "# Run summary\n\n";
    if (fs::exists(dir / "resolved-config.json")) {
        std::ifstream in(dir / "resolved-config.json");
        json cfg = json::parse(in);
        if (cfg.contains("meta"))
            md << "Toolkit " << cfg["meta"].value("version", "?") << ", config hash `"
               << cfg["meta"].value("config_hash", "?") << "`.\n\n";
        md << "Model: " << cfg.value("model", "?") << ", N=" << cfg.value("N", 0)
           << ", T=" << cfg.value("T", 0.0) << ", h=" << cfg.value("h", 0.0)
           << ", h'=" << cfg.value("h_prime", 0.0) << ", k=" << cfg.value("k", 0)
           << ", n_max=" << cfg.value("n_max", 0) << ", m_max=" << cfg.value("m_max", 0)
           << ".\n\n";
    }
    for (const auto& f : files) {
        std::ifstream in(f);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error&) {
            continue;
        }
        md << "## " << f.filename().string() << "\n\n";
        if (j.contains("suite")) {
            md << "Suite `" << j.value("suite", "") << "` ("
               << j.value("norm_pair", std::string("-")) << "): "
               << (j.value("pass", false) ? "**pass**" : "**FAIL**") << "\n\n";
            if (j.contains("cases") && !j["cases"].empty()) {
                md << "| case | value | bound | margin | pass |\n"
                   << "|---|---|---|---|---|\n";
                for (auto& c : j["cases"])
                    md << "| " << c.value("label", "") << " | " << c.value("value", 0.0)
                       << " | " << c.value("bound", 0.0) << " | " << c.value("margin", 0.0)
                       << " | " << (c.value("pass", false) ? "yes" : "no") << " |\n";
                md << "\n";
            }
            if (j.contains("trend"))
                md << "Trend slope " << j["trend"].value("slope", 0.0) << " (r² "
                   << j["trend"].value("r2", 0.0) << ").\n\n";
        } else {
            md << "| key | value |\n|---|---|\n";
            for (auto& [key, val] : j.items())
                if (val.is_number() || val.is_string() || val.is_boolean())
                    md << "| " << key << " | " << val.dump() << " |\n";
            md << "\n";
        }
    }
    write_json((dir / ".report-stamp.json").string(), json{{"files", files.size()}});
    std::ofstream out(dir / "report.md");
    out << md.str();
    std::cout << "report: " << files.size() << " reports summarized in "
              << (dir / "report.md").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"floerlab: spectral-Galerkin toolkit for twisted loops, small divisors, "
                 "Floer strips, and operator-estimate verification"};
    app.require_subcommand(1);

    std::string config_path, out_flag, init = "decoupled", suite = "isometry";
    std::string output, orbit_minus = "decoupled", orbit_plus = "decoupled", report_dir = ".";
    double t_final = 10.0, dt = 1e-2, s_half_width = -1.0, ds = -1.0, tol = -1.0;
    int checkpoint_every = 0;
    bool sweep = false;
    unsigned long long seed_flag = 0;
    bool seed_given = false;

    auto* sp = app.add_subcommand("spectrum", "admissibility profile of the truncated lattice");
    sp->add_option("--config", config_path)->required();
    sp->add_option("--out", out_flag);

    auto* sim = app.add_subcommand("simulate", "Strang-split coupled dynamics");
    sim->add_option("--config", config_path)->required();
    sim->add_option("--out", out_flag);
    sim->add_option("--t-final", t_final);
    sim->add_option("--dt", dt);
    sim->add_option("--output", output);
    sim->add_option("--checkpoint-every", checkpoint_every);

    auto* orb = app.add_subcommand("orbit", "twisted periodic orbit Newton solve");
    orb->add_option("--config", config_path)->required();
    orb->add_option("--out", out_flag);
    orb->add_option("--init", init, "loop container file or \"decoupled\"");
    orb->add_option("--tol", tol);
    orb->add_flag("--sweep", sweep, "run the configured ell sweep");

    auto* flo = app.add_subcommand("floer", "strip connecting two orbits");
    flo->add_option("--config", config_path)->required();
    flo->add_option("--out", out_flag);
    flo->add_option("--orbit-minus", orbit_minus);
    flo->add_option("--orbit-plus", orbit_plus);
    flo->add_option("--s-half-width", s_half_width);
    flo->add_option("--ds", ds);
    flo->add_option("--tol", tol);

    auto* ver = app.add_subcommand("verify", "operator-estimate verification suites");
    ver->add_option("--config", config_path)->required();
    ver->add_option("--out", out_flag);
    ver->add_option("--suite", suite)
        ->check(CLI::IsMember(
            {"isometry", "inclusions", "tail", "stars", "semifredholm", "adjoint", "genericity"}));
    ver->add_option("--seed", seed_flag)->each([&](const std::string&) { seed_given = true; });

    auto* repc = app.add_subcommand("report", "aggregate a run directory into markdown");
    repc->add_option("--dir", report_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (repc->parsed()) return run_report(report_dir);

        RunConfig cfg = load_config(config_path);
        if (tol > 0.0) cfg.tol = tol;
        if (seed_given) cfg.seed = seed_flag;
        cfg.resolved["tol"] = cfg.tol;  // flags participate in the config hash
        cfg.resolved["seed"] = cfg.seed;

        if (sp->parsed()) return run_spectrum(cfg, out_flag);
        if (sim->parsed())
            return run_simulate(cfg, out_flag, t_final, dt, output, checkpoint_every);
        if (orb->parsed()) return run_orbit(cfg, out_flag, init, sweep);
        if (flo->parsed())
            return run_floer(cfg, out_flag, orbit_minus, orbit_plus,
                             s_half_width > 0.0 ? s_half_width : cfg.s_half_width,
                             ds > 0.0 ? ds : cfg.ds, cfg.tol);
        if (ver->parsed()) return run_verify(cfg, out_flag, suite, cfg.seed);
    } catch (const json::parse_error& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
