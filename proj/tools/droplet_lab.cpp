// droplet-lab: weighted-polynomial kernels, Hele-Shaw equilibrium droplets,
// Fekete configurations, and Coulomb-gas MCMC, from one JSON run config.
//
// Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 acceptance failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "droplet/acceptance.hpp"
#include "droplet/basis.hpp"
#include "droplet/config.hpp"
#include "droplet/equilibrium.hpp"
#include "droplet/fekete.hpp"
#include "droplet/sampler.hpp"
#include "droplet/scaling.hpp"

namespace fs = std::filesystem;
using namespace droplet;

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

RunConfig load_config(const std::string& path) {
    if (path.empty())
        return RunConfig{};
    return parse_config(path);
}

double derive_beta(int N, double tau, double beta_override) {
    if (beta_override > 0)
        return beta_override;
    if (N < 2)
        throw ConfigError("N = 1 has no scaling-derived beta; pass --beta");
    return make_scaling_from_tau(N, tau).beta;
}

// ---- kernel ---------------------------------------------------------------

int cmd_kernel(const RunConfig& cfg, double beta_override,
               const std::string& out, const std::string& eval_csv) {
    double beta = derive_beta(cfg.N, cfg.tau, beta_override);
    WeightedBasis basis = build_basis(
        cfg.potential, beta, cfg.N,
        default_moment_grid(cfg.potential, beta, cfg.N, cfg.nodes));
    save_basis(out, basis);

    if (!eval_csv.empty()) {
        std::ifstream in(eval_csv);
        if (!in)
            throw ConfigError("cannot open points file: " + eval_csv);
        fs::path out_csv = fs::path(out).replace_extension(".eval.csv");
        std::ofstream os(out_csv);
        os << "re,im,K_diag,density_n1\n";
        std::string line;
        while (std::getline(in, line)) {
            double re, im;
            char comma;
            std::istringstream ls(line);
            if (!(ls >> re >> comma >> im))
                continue; // header or blank line
            Complex z(re, im);
            double kd = eval_kernel(basis, z, z).real();
            double dens = correlation_density(basis, {z});
            os << fmt(re) << ',' << fmt(im) << ',' << fmt(kd) << ','
               << fmt(dens) << '\n';
        }
        std::cerr << "wrote " << out_csv.string() << "\n";
    }
    std::cerr << "wrote " << out << "\n";
    return 0;
}

// ---- equilibrium ----------------------------------------------------------

int cmd_equilibrium(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    echo_effective_config(cfg);

    BoxGrid grid(cfg.box, cfg.nodes);
    PsorParams pp;
    pp.tol = cfg.psor_tol;
    pp.mass_rel_tol = cfg.mass_rel_tol;
    ObstacleSolution sol = solve_obstacle(cfg.potential, cfg.tau, grid, pp);
    Droplet drop = extract_droplet(cfg.potential, sol);
    DiscreteMeasure sigma = equilibrium_measure(cfg.potential, drop);
    EnergyResult en = energy(sigma, cfg.potential, 1.0 / (2.0 * cfg.tau));

    fs::path dir(cfg.output_dir);
    write_field((dir / "u.f64").string(), sol.u);
    ScalarField ind(grid);
    for (std::size_t i = 0; i < drop.indicator.size(); ++i)
        ind.values[i] = drop.indicator[i] ? 1.0 : 0.0;
    write_field((dir / "indicator.f64").string(), ind);
    ScalarField sf(grid);
    sf.values = sigma.weights;
    write_field((dir / "sigma.f64").string(), sf);

    nlohmann::json summary = {
        {"tau", cfg.tau},
        {"c", sol.boundary_constant},
        {"mass", drop.mass},
        {"iterations", sol.iterations},
        {"residual", complementarity_residual(cfg.potential, sol)},
        {"delta", 10.0 * sol.psor_tol},
        {"kappa", en.value},
        {"C_tau", en.C_tau},
    };
    std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
    std::cerr << "wrote " << (dir / "summary.json").string() << "\n";
    return 0;
}

// ---- fekete ---------------------------------------------------------------

int cmd_fekete(const RunConfig& cfg, const std::string& out) {
    double theta = make_scaling_from_tau(std::max(cfg.N, 2), cfg.tau).theta;
    FeketeParams fp;
    fp.restarts = cfg.restarts;
    FeketeResult res = optimize_fekete(cfg.potential, cfg.N, theta, cfg.seed, fp);

    std::ofstream os(out);
    if (!os)
        throw ConfigError("cannot write " + out);
    os << "idx,re,im\n";
    for (std::size_t j = 0; j < res.config.size(); ++j)
        os << j << ',' << fmt(res.config[j].real()) << ','
           << fmt(res.config[j].imag()) << '\n';

    nlohmann::json summary = {
        {"energy_sharp", res.energy_sharp},
        {"M_estimate", res.M_estimate},
        {"gradient_norm", res.gradient_norm},
        {"fd_deviation", res.fd_deviation},
        {"restarts_used", res.restarts_used},
    };
    fs::path sp = fs::path(out).parent_path() / "fekete_summary.json";
    std::ofstream(sp) << summary.dump(2) << "\n";
    std::cerr << "wrote " << out << " and " << sp.string() << "\n";
    return 0;
}

// ---- sample ---------------------------------------------------------------

int cmd_sample(const RunConfig& cfg, int threads) {
    fs::create_directories(cfg.output_dir);
    echo_effective_config(cfg);
    fs::path dir(cfg.output_dir);

    McmcParams mp;
    mp.burn_in = cfg.burn_in;
    const long burn_in = cfg.burn_in >= 0 ? cfg.burn_in : 200L * cfg.N;
    const long thin = cfg.N;

    std::vector<std::future<McmcResult>> futs;
    std::vector<McmcResult> chains(cfg.chains);
    std::vector<std::uint64_t> seeds(cfg.chains);
    for (int c = 0; c < cfg.chains; ++c)
        seeds[c] = cfg.seed + std::uint64_t(c);
    int cap = std::max(1, threads);
    for (int c = 0; c < cfg.chains; ++c) {
        while (int(futs.size()) >= cap) {
            futs.front().wait();
            for (std::size_t i = 0; i < futs.size(); ++i)
                if (futs[i].wait_for(std::chrono::seconds(0)) ==
                    std::future_status::ready) {
                    futs.erase(futs.begin() + long(i));
                    break;
                }
        }
        futs.push_back(std::async(
            std::launch::async, [&, c] {
                chains[std::size_t(c)] = mcmc_run(cfg.potential, cfg.N, cfg.tau,
                                                  cfg.steps, seeds[c], mp);
                return McmcResult{};
            }));
    }
    for (auto& f : futs)
        f.get();

    std::vector<Configuration> pooled;
    double acc = 0.0;
    for (int c = 0; c < cfg.chains; ++c) {
        const McmcResult& res = chains[std::size_t(c)];
        acc += res.acceptance_rate / cfg.chains;
        std::ofstream os(dir / ("chain-" + std::to_string(seeds[c]) + ".csv"));
        os << "step,particle,re,im\n";
        for (std::size_t s = 0; s < res.samples.size(); ++s) {
            long step = burn_in + long(s + 1) * thin - 1;
            for (std::size_t p = 0; p < res.samples[s].size(); ++p)
                os << step << ',' << p << ','
                   << fmt(res.samples[s][p].real()) << ','
                   << fmt(res.samples[s][p].imag()) << '\n';
        }
        pooled.insert(pooled.end(), res.samples.begin(), res.samples.end());
    }

    BoxGrid grid(cfg.box, cfg.nodes);
    MarginalHistogram hist = marginal_histogram(pooled, grid);
    ScalarField mf(grid);
    mf.values = hist.measure.weights;
    write_field((dir / "marginal.f64").string(), mf);

    // total variation against the equilibrium measure on 16x16 coarse bins
    PsorParams pp;
    pp.tol = cfg.psor_tol;
    pp.mass_rel_tol = cfg.mass_rel_tol;
    ObstacleSolution sol = solve_obstacle(cfg.potential, cfg.tau, grid, pp);
    DiscreteMeasure sigma = equilibrium_measure(
        cfg.potential, extract_droplet(cfg.potential, sol));
    const int nb = 16;
    const double L = cfg.box, bw = 2.0 * L / nb;
    std::vector<double> p(nb * nb, 0.0), q(nb * nb, 0.0);
    std::size_t total = 0;
    for (const Configuration& cc : pooled)
        for (Complex z : cc) {
            ++total;
            int ix = int(std::floor((z.real() + L) / bw));
            int iy = int(std::floor((z.imag() + L) / bw));
            if (ix >= 0 && iy >= 0 && ix < nb && iy < nb)
                p[std::size_t(iy) * nb + ix] += 1.0;
        }
    for (double& v : p)
        v /= double(total);
    const double h2 = grid.spacing() * grid.spacing();
    for (std::size_t i = 0; i < sigma.weights.size(); ++i)
        if (sigma.weights[i] != 0.0) {
            Complex z = grid.node(i);
            int ix = int(std::floor((z.real() + L) / bw));
            int iy = int(std::floor((z.imag() + L) / bw));
            if (ix >= 0 && iy >= 0 && ix < nb && iy < nb)
                q[std::size_t(iy) * nb + ix] += sigma.weights[i] * h2;
        }
    double tv = hist.overflow_mass;
    for (int i = 0; i < nb * nb; ++i)
        tv += std::abs(p[i] - q[i]);
    tv *= 0.5;

    double beta = derive_beta(cfg.N, cfg.tau, -1.0);
    WeightedBasis basis = build_basis(
        cfg.potential, beta, cfg.N,
        default_moment_grid(cfg.potential, beta, cfg.N, cfg.nodes));
    KernelCrosscheck kc = kernel_crosscheck(basis, pooled, 2.0);

    nlohmann::json diag = {
        {"acceptance", acc},
        {"overflow_mass", hist.overflow_mass},
        {"tv_to_sigma_hat", tv},
        {"diagonality_stat", kc.diagonality_stat},
        {"kernel_max_bin_deviation", kc.max_bin_deviation},
    };
    std::ofstream(dir / "diagnostics.json") << diag.dump(2) << "\n";
    std::cerr << "wrote " << (dir / "diagnostics.json").string() << "\n";
    return 0;
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& only,
               int threads) {
    fs::create_directories(cfg.output_dir);
    AcceptanceOptions opts;
    opts.only = only;
    opts.threads = threads;
    opts.log = &std::cout;
    AcceptanceReport report = run_acceptance(opts);
    fs::path rp = fs::path(cfg.output_dir) / "verify_report.json";
    std::ofstream(rp) << report.to_json();
    std::cout << "report: " << rp.string() << "\n";
    return report.all_pass() ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"droplet-lab: determinantal kernels, equilibrium droplets, "
                 "Fekete points, and Coulomb-gas sampling"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;
    app.add_option("--config", config_path, "JSON run configuration")
        ->envname("DROPLET_LAB_CONFIG");
    app.add_option("--threads", threads,
                   "worker-thread cap (default: DROPLET_LAB_THREADS or all cores)");

    // per-command overrides of the config file
    double tau = -1, box = -1, beta = -1;
    int N = -1, nodes = -1, chainsv = -1, restarts = -1;
    long steps = -1, burn_in = -2;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out, eval_csv;
    std::vector<std::string> only;

    auto* kernel = app.add_subcommand("kernel", "build and cache a weighted basis");
    kernel->add_option("--N", N, "basis dimension");
    kernel->add_option("--tau", tau, "scaling parameter (beta = (N-1)/tau)");
    kernel->add_option("--beta", beta, "explicit inverse temperature");
    kernel->add_option("--out", out, "basis cache path (JSON)")->required();
    kernel->add_option("--eval", eval_csv,
                       "points CSV (re,im) -> <out>.eval.csv with columns "
                       "re,im,K_diag,density_n1");

    auto* equilibrium =
        app.add_subcommand("equilibrium", "solve the obstacle problem");
    equilibrium->add_option("--tau", tau, "total mass parameter");
    equilibrium->add_option("--grid", nodes, "grid nodes per side");
    equilibrium->add_option("--box", box, "grid half-width");
    equilibrium->add_option("--out", out, "output directory");

    auto* fekete = app.add_subcommand("fekete", "optimize a Fekete configuration");
    fekete->add_option("--N", N, "number of points");
    fekete->add_option("--tau", tau, "scaling parameter");
    fekete->add_option("--restarts", restarts, "multistart count");
    fekete->add_option("--seed", seed, "RNG seed");
    fekete->add_option("--out", out, "CSV path (idx,re,im)")->required();

    auto* sample = app.add_subcommand("sample", "MCMC eigenvalue sampling");
    sample->add_option("--N", N, "number of particles");
    sample->add_option("--tau", tau, "scaling parameter");
    sample->add_option("--steps", steps, "proposals per chain");
    sample->add_option("--burn-in", burn_in, "burn-in proposals");
    sample->add_option("--seed", seed, "base RNG seed")
        ->each([&](const std::string&) { seed_set = true; });
    sample->add_option("--chains", chainsv, "independent chains");
    sample->add_option("--out", out, "output directory");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--only", only,
                       "criterion names or ids to run (subset filter)");
    verify->add_option("--out", out, "report directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (threads <= 0) {
        if (const char* env = std::getenv("DROPLET_LAB_THREADS"))
            threads = std::atoi(env);
        if (threads <= 0)
            threads = int(std::thread::hardware_concurrency());
        if (threads <= 0)
            threads = 1;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (tau > 0)
            cfg.tau = tau;
        if (N > 0)
            cfg.N = N;
        if (nodes > 0)
            cfg.nodes = nodes;
        if (box > 0)
            cfg.box = box;
        if (steps > 0)
            cfg.steps = steps;
        if (burn_in >= -1)
            cfg.burn_in = burn_in;
        if (seed_set || seed != 0)
            cfg.seed = seed;
        if (chainsv > 0)
            cfg.chains = chainsv;
        if (restarts > 0)
            cfg.restarts = restarts;
        if (!out.empty() &&
            (equilibrium->parsed() || sample->parsed() || verify->parsed()))
            cfg.output_dir = out;

        if (kernel->parsed())
            return cmd_kernel(cfg, beta, out, eval_csv);
        if (equilibrium->parsed())
            return cmd_equilibrium(cfg);
        if (fekete->parsed())
            return cmd_fekete(cfg, out);
        if (sample->parsed())
            return cmd_sample(cfg, threads);
        if (verify->parsed())
            return cmd_verify(cfg, only, threads);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
