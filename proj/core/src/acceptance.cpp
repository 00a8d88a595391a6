#include "droplet/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <ostream>
#include <random>

#include <Eigen/Dense>

#include "json.hpp"

#include "droplet/basis.hpp"
#include "droplet/equilibrium.hpp"
#include "droplet/fekete.hpp"
#include "droplet/sampler.hpp"

namespace droplet {

bool AcceptanceReport::all_pass() const {
    for (const CriterionResult& r : results)
        if (!r.pass)
            return false;
    return true;
}

std::string AcceptanceReport::to_json() const {
    nlohmann::json j;
    j["pass"] = all_pass();
    j["criteria"] = nlohmann::json::array();
    for (const CriterionResult& r : results) {
        nlohmann::json c;
        c["id"] = r.id;
        c["name"] = r.name;
        c["description"] = r.description;
        c["pass"] = r.pass;
        c["wall_seconds"] = r.wall_seconds;
        if (!r.error.empty())
            c["error"] = r.error;
        c["checks"] = nlohmann::json::array();
        for (const SubCheck& s : r.checks)
            c["checks"].push_back({{"name", s.name},
                                   {"value", s.value},
                                   {"bound", s.bound},
                                   {"pass", s.pass}});
        j["criteria"].push_back(c);
    }
    return j.dump(2) + "\n";
}

namespace {

constexpr double PI = 3.14159265358979323846;

struct Cached {
    ObstacleSolution sol;
    Droplet droplet;
    DiscreteMeasure measure;
    Cached(ObstacleSolution s, Droplet d, DiscreteMeasure m)
        : sol(std::move(s)), droplet(std::move(d)), measure(std::move(m)) {}
};

class Suite {
  public:
    explicit Suite(int threads) : threads_(std::max(1, threads)) {}

    const Cached& solved(const Potential& pot, double tau) {
        std::string key = pot.descriptor() + "#" + std::to_string(tau);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        BoxGrid grid(4.0, 512);
        ObstacleSolution sol = solve_obstacle(pot, tau, grid);
        Droplet drop = extract_droplet(pot, sol);
        DiscreteMeasure meas = equilibrium_measure(pot, drop);
        return cache_.emplace(key, Cached(std::move(sol), std::move(drop),
                                          std::move(meas)))
            .first->second;
    }

    int threads() const { return threads_; }

  private:
    int threads_;
    std::map<std::string, Cached> cache_;
};

void add(CriterionResult& r, const std::string& name, double value,
         double bound) {
    r.checks.push_back({name, value, bound, value <= bound});
}

// ---- criterion 1: gaussian kernel closed form -----------------------------

void crit_gaussian_kernel(Suite&, CriterionResult& r) {
    Potential pot = Potential::gaussian();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const int Nmax = 20;
    double worst = 0.0;
    for (double beta : {1.0, 4.0, 15.0, 40.0}) {
        WeightedBasis basis =
            build_basis(pot, beta, Nmax, default_moment_grid(pot, beta, Nmax));
        for (int pair = 0; pair < 10; ++pair) {
            Complex z, w;
            do {
                z = {u(rng), u(rng)};
            } while (std::abs(z) > 2.0);
            do {
                w = {u(rng), u(rng)};
            } while (std::abs(w) > 2.0);
            // prefix sums over degrees give every N in one pass
            Complex computed = 0.0, closed = 0.0;
            Complex t = beta / PI; // (beta z wbar)^j / j! term, times beta/pi
            Complex bzw = beta * z * std::conj(w);
            double scale = (beta / PI) * std::exp(beta * std::abs(z) * std::abs(w));
            for (int N = 1; N <= Nmax; ++N) {
                computed += basis.eval_phi_j(N - 1, z) *
                            std::conj(basis.eval_phi_j(N - 1, w));
                closed += t;
                t *= bzw / double(N);
                worst = std::max(worst, std::abs(computed - closed) / scale);
            }
        }
    }
    add(r, "max kernel deviation / (beta/pi) e^{beta|z||w|}", worst, 1e-6);
}

// ---- criterion 2: gaussian droplet geometry -------------------------------

void crit_gaussian_droplet(Suite& suite, CriterionResult& r) {
    Potential pot = Potential::gaussian();
    for (double tau : {0.5, 1.0, 2.0}) {
        const Cached& c = suite.solved(pot, tau);
        const BoxGrid& g = c.droplet.grid;
        const double h = g.spacing(), rt = std::sqrt(tau);
        std::size_t mismatch = 0;
        for (std::size_t i = 0; i < g.node_count(); ++i)
            if (c.droplet.indicator[i] != (std::abs(g.node(i)) <= rt))
                ++mismatch;
        std::string tag = " (tau=" + std::to_string(tau) + ")";
        add(r, "symmetric-difference area" + tag, double(mismatch) * h * h,
            8.0 * h * rt * 2.0 * PI);
        add(r, "|c - tau(log tau - 1)|" + tag,
            std::abs(c.sol.boundary_constant - tau * (std::log(tau) - 1.0)),
            0.02);
    }
}

// ---- criterion 3: equilibrium density and mass ----------------------------

void crit_equilibrium_density(Suite& suite, CriterionResult& r) {
    Potential pot = Potential::gaussian();
    for (double tau : {0.5, 1.0, 2.0}) {
        const Cached& c = suite.solved(pot, tau);
        double worst = 0.0;
        for (std::size_t i = 0; i < c.measure.weights.size(); ++i)
            if (c.droplet.fraction[i] == 1.0) // away from the free boundary
                worst = std::max(
                    worst, std::abs(c.measure.weights[i] - 1.0 / (PI * tau)));
        std::string tag = " (tau=" + std::to_string(tau) + ")";
        add(r, "max |density - 1/(pi tau)|" + tag, worst, 1e-6);
        add(r, "|mass - 1|" + tag, std::abs(c.measure.total() - 1.0), 1e-3);
    }
}

// ---- criterion 4: Elbau-Felder ellipse ------------------------------------

void crit_ellipse(Suite& suite, CriterionResult& r) {
    Potential pot = Potential::elbau_felder(0.5);
    const double tau = 1.0;
    const Cached& c = suite.solved(pot, tau);
    const BoxGrid& g = c.droplet.grid;
    const int M = g.nodes_per_side();
    const double h = g.spacing();

    // boundary nodes: in the coincidence set with an outside 4-neighbour
    std::vector<Complex> boundary;
    auto ind = [&](int ix, int iy) {
        return c.droplet.indicator[g.index(ix, iy)];
    };
    for (int iy = 1; iy + 1 < M; ++iy)
        for (int ix = 1; ix + 1 < M; ++ix)
            if (ind(ix, iy) && (!ind(ix + 1, iy) || !ind(ix - 1, iy) ||
                                !ind(ix, iy + 1) || !ind(ix, iy - 1)))
                boundary.push_back(g.node(ix, iy));

    // least-squares centered axis-aligned ellipse: alpha x^2 + beta y^2 = 1
    double suu = 0, suv = 0, svv = 0, su = 0, sv = 0;
    for (Complex z : boundary) {
        double uu = z.real() * z.real(), vv = z.imag() * z.imag();
        suu += uu * uu;
        suv += uu * vv;
        svv += vv * vv;
        su += uu;
        sv += vv;
    }
    double det = suu * svv - suv * suv;
    double alpha = (su * svv - sv * suv) / det;
    double beta = (sv * suu - su * suv) / det;
    double A = 1.0 / std::sqrt(alpha), B = 1.0 / std::sqrt(beta);

    double worst = 0.0;
    for (Complex z : boundary) {
        double t = std::arg(z);
        double re = A * B /
                    std::hypot(B * std::cos(t), A * std::sin(t));
        worst = std::max(worst, std::abs(std::abs(z) - re));
    }
    add(r, "max radial residual to fitted ellipse", worst, 2.0 * h);

    std::size_t inside = 0;
    for (bool b : c.droplet.indicator)
        inside += b;
    add(r, "|area - pi tau| / (pi tau)",
        std::abs(double(inside) * h * h - PI * tau) / (PI * tau), 0.03);
}

// ---- criterion 5: potential-theory identity -------------------------------

void crit_potential_identity(Suite& suite, CriterionResult& r) {
    Potential pot = Potential::gaussian();
    for (double tau : {1.0, 4.0}) {
        const Cached& c = suite.solved(pot, tau);
        std::string tag = " (tau=" + std::to_string(tau) + ")";
        if (tau == 1.0) {
            ScalarField lfield = log_potential_field(c.measure);
            const BoxGrid& g = c.sol.grid;
            double mean = 0.0, m2 = 0.0;
            std::size_t n = g.node_count();
            std::vector<double> d(n);
            for (std::size_t i = 0; i < n; ++i) {
                double vhat = c.sol.u.values[i] - pot.phi(g.node(i));
                d[i] = lfield.values[i] - vhat / (2.0 * tau);
                mean += d[i];
            }
            mean /= double(n);
            for (std::size_t i = 0; i < n; ++i)
                m2 += (d[i] - mean) * (d[i] - mean);
            add(r, "stddev(L[sigma] - Vhat/(2 tau))" + tag,
                std::sqrt(m2 / double(n)), 1e-2);
        }
        EnergyResult e = energy(c.measure, pot, 1.0 / (2.0 * tau));
        add(r, "|kappa - (3/4 - log(tau)/2)|" + tag,
            std::abs(e.value - (0.75 - 0.5 * std::log(tau))), 1e-2);
    }
}

// ---- criterion 6: monotonicity suites -------------------------------------

void crit_monotonicity(Suite& suite, CriterionResult& r) {
    Potential pot = Potential::gaussian();
    const double beta = 1.0;
    const int Ntop = 11;
    BoxGrid grid = default_moment_grid(pot, beta, Ntop);
    std::vector<WeightedBasis> bases;
    for (int N = 2; N <= Ntop; ++N)
        bases.push_back(build_basis(pot, beta, N, grid));

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::uniform_int_distribution<int> size_pick(1, 3);
    long violations = 0;
    for (int set = 0; set < 50; ++set) {
        int n = size_pick(rng);
        std::vector<Complex> zs(n);
        for (Complex& z : zs)
            z = {u(rng), u(rng)};
        for (int N = std::max(2, n); N <= 10; ++N)
            if (!check_monotone_growth(bases[N - 2], bases[N - 1], zs))
                ++violations;
    }
    add(r, "kernel-determinant growth violations", double(violations), 0.0);

    std::normal_distribution<double> gauss(0.0, 1.0);
    long psd_violations = 0;
    for (int rep = 0; rep < 200; ++rep) {
        int n = 2 + int(rng() % 5);
        auto random_psd = [&] {
            Eigen::MatrixXcd G(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    G(i, j) = Complex(gauss(rng), gauss(rng));
            return Eigen::MatrixXcd(G * G.adjoint());
        };
        Eigen::MatrixXcd A = random_psd(), B = random_psd();
        double da = A.determinant().real(), db = B.determinant().real();
        double dab = (A + B).determinant().real();
        if (dab < std::max(da, db) * (1.0 - 1e-10))
            ++psd_violations;
    }
    add(r, "det(A+B) >= max(det A, det B) violations", double(psd_violations),
        0.0);

    std::vector<Droplet> chain;
    for (double tau : {0.5, 1.0, 2.0})
        chain.push_back(suite.solved(pot, tau).droplet);
    add(r, "nested coincidence-set chain (0 = nested)",
        monotone_tau_check(chain) ? 0.0 : 1.0, 0.0);
}

// ---- criterion 7: Fekete configurations -----------------------------------

void crit_fekete(Suite&, CriterionResult& r) {
    Potential pot = Potential::gaussian();
    const double theta = 0.5; // tau = 1
    std::vector<FeketeResult> res;
    for (int N = 2; N <= 8; ++N)
        res.push_back(optimize_fekete(pot, N, theta, 7));

    double rdev = 0.0;
    for (Complex z : res[0].config)
        rdev = std::max(rdev, std::abs(std::abs(z) - std::sqrt(0.5)));
    add(r, "N=2 radius deviation from sqrt(1/2)", rdev, 1e-5);

    const Configuration& tri = res[1].config;
    double dmin = 1e300, dmax = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int k = j + 1; k < 3; ++k) {
            double d = std::abs(tri[j] - tri[k]);
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
    add(r, "N=3 pairwise-distance spread", dmax - dmin, 1e-5);

    double worst_increase = 0.0;
    for (std::size_t i = 1; i < res.size(); ++i)
        worst_increase = std::max(worst_increase,
                                  res[i].M_estimate - res[i - 1].M_estimate);
    add(r, "max increase of M estimate over N=2..8", worst_increase, 1e-6);

    double worst_fd = 0.0;
    for (const FeketeResult& f : res)
        worst_fd = std::max(worst_fd, f.fd_deviation);
    add(r, "max gradient-vs-finite-difference deviation", worst_fd, 1e-4);
}

// ---- criterion 8: harmonic moments ----------------------------------------

void crit_harmonic_moments(Suite& suite, CriterionResult& r) {
    Potential pot = Potential::gaussian();
    const Droplet& d1 = suite.solved(pot, 1.0).droplet;
    const Droplet& d2 = suite.solved(pot, 2.0).droplet;
    add(r, "h = 1 defect / (4 pi (tau2 - tau1))",
        harmonic_moment_check(pot, d1, d2, HarmonicTest::one) / (4.0 * PI),
        0.03);
    add(r, "h = Re(1/z) absolute defect",
        harmonic_moment_check(pot, d1, d2, HarmonicTest::re_inv_pow, 1), 3e-2);
}

// ---- criterion 9: condensation (finite-N MCMC proxy) ----------------------

void crit_condensation(Suite& suite, CriterionResult& r) {
    Potential pot = Potential::gaussian();
    const int N = 64;
    const double tau = 1.0;
    const long steps = 2'000'000, burn_in = 200'000;

    McmcParams mp;
    mp.burn_in = burn_in;
    std::vector<std::future<McmcResult>> futs;
    std::vector<McmcResult> chains;
    const int nchains = 4;
    int in_flight_cap = std::max(1, suite.threads());
    for (int c = 0; c < nchains; ++c) {
        if (int(futs.size()) >= in_flight_cap) {
            chains.push_back(futs.front().get());
            futs.erase(futs.begin());
        }
        futs.push_back(std::async(std::launch::async, [&, c] {
            return mcmc_run(pot, N, tau, steps, 11 + std::uint64_t(c), mp);
        }));
    }
    for (auto& f : futs)
        chains.push_back(f.get());

    std::vector<Configuration> pooled;
    for (const McmcResult& c : chains)
        pooled.insert(pooled.end(), c.samples.begin(), c.samples.end());

    // total variation against sigma-hat on 16x16 bins of [-2,2]^2
    const int nb = 16;
    const double Lb = 2.0, bw = 2.0 * Lb / nb;
    std::vector<double> p(nb * nb, 0.0), q(nb * nb, 0.0);
    std::size_t total = 0, outside = 0, within_15 = 0;
    for (const Configuration& cfg : pooled)
        for (Complex z : cfg) {
            ++total;
            if (std::abs(z) <= 1.5)
                ++within_15;
            int ix = int(std::floor((z.real() + Lb) / bw));
            int iy = int(std::floor((z.imag() + Lb) / bw));
            if (ix < 0 || iy < 0 || ix >= nb || iy >= nb) {
                ++outside;
                continue;
            }
            p[std::size_t(iy) * nb + ix] += 1.0;
        }
    for (double& v : p)
        v /= double(total);

    const Cached& eq = suite.solved(pot, tau);
    const BoxGrid& g = eq.measure.grid;
    const double h2 = g.spacing() * g.spacing();
    for (std::size_t i = 0; i < eq.measure.weights.size(); ++i) {
        if (eq.measure.weights[i] == 0.0)
            continue;
        Complex z = g.node(i);
        int ix = int(std::floor((z.real() + Lb) / bw));
        int iy = int(std::floor((z.imag() + Lb) / bw));
        if (ix < 0 || iy < 0 || ix >= nb || iy >= nb)
            continue;
        q[std::size_t(iy) * nb + ix] += eq.measure.weights[i] * h2;
    }
    double tv = double(outside) / double(total);
    for (int i = 0; i < nb * nb; ++i)
        tv += std::abs(p[i] - q[i]);
    tv *= 0.5;
    add(r, "total variation to sigma-hat (16x16 bins)", tv, 0.05);

    double beta = double(N - 1) / tau;
    WeightedBasis basis =
        build_basis(pot, beta, N, default_moment_grid(pot, beta, N));
    KernelCrosscheck kc = kernel_crosscheck(basis, pooled, Lb, nb, 8);
    add(r, "max bin deviation to kernel density", kc.max_bin_deviation, 0.05);
    add(r, "1 - fraction of particles with |z| <= 1.5",
        1.0 - double(within_15) / double(total), 0.01);
}

// ---- criterion 10: partition-function consistency -------------------------

void crit_partition(Suite& suite, CriterionResult& r) {
    Potential pot = Potential::gaussian();
    {
        WeightedBasis b1 =
            build_basis(pot, 1.0, 1, default_moment_grid(pot, 1.0, 1));
        add(r, "|Z_1 - pi| / pi", std::abs(compute_Z(b1) - PI) / PI, 1e-4);
        WeightedBasis b2 =
            build_basis(pot, 1.0, 2, default_moment_grid(pot, 1.0, 2));
        add(r, "|Z_2 - 2 pi^2| / (2 pi^2)",
            std::abs(compute_Z(b2) - 2.0 * PI * PI) / (2.0 * PI * PI), 1e-3);
    }

    // lower bound log Z_N >= -N(N-1) E[sigma](theta) - N int log S dsigma,
    // with sigma the computed equilibrium measure at tau = 1
    const Cached& eq = suite.solved(pot, 1.0);
    const double h2 =
        eq.measure.grid.spacing() * eq.measure.grid.spacing();
    double int_log_S = 0.0;
    for (double w : eq.measure.weights)
        if (w > 0.0)
            int_log_S += w * std::log(w) * h2;
    double E = energy(eq.measure, pot, 0.5).value;

    double worst_margin_violation = 0.0;
    for (int N = 2; N <= 8; ++N) {
        double beta = double(N - 1);
        WeightedBasis b =
            build_basis(pot, beta, N, default_moment_grid(pot, beta, N));
        double lhs = compute_log_Z(b);
        double rhs = -double(N) * (N - 1) * E - double(N) * int_log_S;
        worst_margin_violation =
            std::max(worst_margin_violation, rhs - lhs);
    }
    add(r, "max violation of the log Z_N lower bound",
        worst_margin_violation, 0.0);
}

} // namespace

AcceptanceReport run_acceptance(const AcceptanceOptions& opts) {
    struct Entry {
        int id;
        const char* name;
        const char* description;
        void (*fn)(Suite&, CriterionResult&);
    };
    static const Entry entries[] = {
        {1, "kernel-closed-form",
         "gaussian reproducing kernel matches the closed form", crit_gaussian_kernel},
        {2, "equilibrium-gaussian-droplet",
         "gaussian coincidence set is the disk of radius sqrt(tau)",
         crit_gaussian_droplet},
        {3, "equilibrium-density-mass",
         "equilibrium density is 1/(pi tau) with unit mass",
         crit_equilibrium_density},
        {4, "equilibrium-ellipse",
         "anisotropic quadratic potential yields an elliptic droplet",
         crit_ellipse},
        {5, "potential-identity",
         "log potential of sigma-hat matches the envelope identity",
         crit_potential_identity},
        {6, "monotonicity",
         "determinant growth, PSD superadditivity, nested droplets",
         crit_monotonicity},
        {7, "fekete", "Fekete configurations match small-N closed forms",
         crit_fekete},
        {8, "harmonic-moments",
         "harmonic moments of the droplet increment", crit_harmonic_moments},
        {9, "sample-condensation",
         "MCMC marginal condenses onto sigma-hat and the kernel density",
         crit_condensation},
        {10, "partition-function",
         "Z_N closed forms and the Jensen lower bound", crit_partition},
    };

    auto selected = [&](const Entry& e) {
        if (opts.only.empty())
            return true;
        for (const std::string& s : opts.only) {
            if (std::string(e.name).find(s) != std::string::npos)
                return true;
            try {
                if (std::stoi(s) == e.id)
                    return true;
            } catch (...) {
            }
        }
        return false;
    };

    Suite suite(opts.threads);
    AcceptanceReport report;
    for (const Entry& e : entries) {
        if (!selected(e))
            continue;
        CriterionResult r;
        r.id = e.id;
        r.name = e.name;
        r.description = e.description;
        auto t0 = std::chrono::steady_clock::now();
        try {
            e.fn(suite, r);
            r.pass = true;
            for (const SubCheck& s : r.checks)
                r.pass = r.pass && s.pass;
        } catch (const std::exception& ex) {
            r.pass = false;
            r.error = ex.what();
        }
        r.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (opts.log)
            *opts.log << "criterion " << r.id << " (" << r.name << "): "
                      << (r.pass ? "PASS" : "FAIL") << "  ["
                      << r.wall_seconds << " s]" << std::endl;
        report.results.push_back(std::move(r));
    }
    return report;
}

} // namespace droplet
