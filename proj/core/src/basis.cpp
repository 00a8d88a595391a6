#include "droplet/basis.hpp"

#include <cmath>
#include <fstream>

#include <Eigen/Dense>

#include "json.hpp"

namespace droplet {

Complex WeightedBasis::eval_phi_j(int j, Complex z) const {
    Complex acc = coeffs(j, j);
    for (int m = j - 1; m >= 0; --m)
        acc = acc * z + coeffs(j, m);
    return acc;
}

WeightedBasis build_basis(const Potential& pot, double beta, int N,
                          const BoxGrid& grid, bool force_generic) {
    if (N < 1)
        throw ArgumentError("build_basis: N must be >= 1");
    Eigen::MatrixXcd G = gram_matrix(grid, pot, beta, N, force_generic);

    // diagonal scaling separates genuine ill-conditioning from the
    // (expected) wild dynamic range of raw moments
    Eigen::VectorXd s(N);
    for (int j = 0; j < N; ++j) {
        double d = G(j, j).real();
        if (!(d > 0.0) || !std::isfinite(d))
            throw NumericError("build_basis: nonpositive moment at pivot " +
                               std::to_string(j));
        s(j) = std::sqrt(d);
    }
    Eigen::MatrixXcd Gs = G;
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
            Gs(j, k) /= s(j) * s(k);

    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gs,
                                                           Eigen::EigenvaluesOnly);
        double emin = es.eigenvalues().minCoeff();
        double emax = es.eigenvalues().maxCoeff();
        if (!(emin > 0.0) || emax / emin > 1e12)
            throw NumericError("build_basis: Gram condition number exceeds 1e12");
    }

    // in-place Cholesky Gs = L L^*; report the pivot on breakdown
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        Complex sum = Gs(k, k);
        for (int m = 0; m < k; ++m)
            sum -= L(k, m) * std::conj(L(k, m));
        double d = sum.real();
        if (!(d > 0.0))
            throw NumericError("build_basis: ill-conditioned moments at pivot " +
                               std::to_string(k));
        L(k, k) = std::sqrt(d);
        for (int i = k + 1; i < N; ++i) {
            Complex v = Gs(i, k);
            for (int m = 0; m < k; ++m)
                v -= L(i, m) * std::conj(L(k, m));
            L(i, k) = v / L(k, k);
        }
    }

    // C = (S Lhat)^{-1}: forward substitution on the unscaled factor
    Eigen::MatrixXcd Lfull = L;
    for (int i = 0; i < N; ++i)
        for (int k = 0; k <= i; ++k)
            Lfull(i, k) *= s(i);

    WeightedBasis basis{pot};
    basis.beta = beta;
    basis.N = N;
    basis.coeffs = Eigen::MatrixXcd::Zero(N, N);
    basis.norms.resize(N);
    for (int k = 0; k < N; ++k)
        basis.norms[k] = Lfull(k, k).real();
    // invert the lower triangular factor row by row
    for (int i = 0; i < N; ++i) {
        basis.coeffs(i, i) = 1.0 / Lfull(i, i);
        for (int k = i - 1; k >= 0; --k) {
            Complex sum = 0.0;
            for (int m = k; m < i; ++m)
                sum += Lfull(i, m) * basis.coeffs(m, k);
            basis.coeffs(i, k) = -sum / Lfull(i, i);
        }
    }

    // re-verify orthonormality against the Gram matrix
    Eigen::MatrixXcd R =
        basis.coeffs * G * basis.coeffs.adjoint() -
        Eigen::MatrixXcd::Identity(N, N);
    double dev = R.cwiseAbs().maxCoeff();
    if (dev > 1e-8)
        throw NumericError("build_basis: orthonormality residual " +
                           std::to_string(dev) + " exceeds 1e-8");
    return basis;
}

Complex eval_kernel(const WeightedBasis& basis, Complex z, Complex w) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        !std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw ArgumentError("eval_kernel: non-finite input");
    // shared power recurrence beats per-row Horner for the full sum
    const int N = basis.N;
    Complex acc = 0.0;
    std::vector<Complex> pz(N), pw(N);
    Complex a = 1.0, b = 1.0;
    for (int m = 0; m < N; ++m) {
        pz[m] = a;
        pw[m] = b;
        a *= z;
        b *= w;
    }
    for (int j = 0; j < N; ++j) {
        Complex fz = 0.0, fw = 0.0;
        for (int m = 0; m <= j; ++m) {
            fz += basis.coeffs(j, m) * pz[m];
            fw += basis.coeffs(j, m) * pw[m];
        }
        acc += fz * std::conj(fw);
    }
    return acc;
}

Eigen::MatrixXcd kernel_matrix(const WeightedBasis& basis,
                               const std::vector<Complex>& zs,
                               const std::vector<Complex>& ws) {
    if (zs.empty() || ws.empty() || zs.size() != ws.size())
        throw ArgumentError("kernel_matrix: point lists must be equal-sized and nonempty");
    const int n = int(zs.size());
    Eigen::MatrixXcd K(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            K(j, k) = eval_kernel(basis, zs[j], ws[k]);
    return K;
}

namespace {

// det via pivoted LU, carried as sign * exp(log-magnitude)
std::pair<Complex, double> logdet(Eigen::MatrixXcd A) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    Complex phase = double(lu.permutationP().determinant());
    double logmag = 0.0;
    for (int i = 0; i < A.rows(); ++i) {
        Complex d = lu.matrixLU()(i, i);
        double m = std::abs(d);
        if (m == 0.0)
            return {0.0, -std::numeric_limits<double>::infinity()};
        phase *= d / m;
        logmag += std::log(m);
    }
    return {phase, logmag};
}

} // namespace

double correlation_density(const WeightedBasis& basis,
                           const std::vector<Complex>& zs) {
    const int n = int(zs.size());
    if (n < 1)
        throw ArgumentError("correlation_density: empty configuration");
    if (n > basis.N)
        throw ArgumentError("correlation_density: n exceeds N");
    auto [phase, logmag] = logdet(kernel_matrix(basis, zs, zs));
    if (logmag == -std::numeric_limits<double>::infinity())
        return 0.0;
    double logw = 0.0;
    for (Complex z : zs)
        logw -= basis.beta * basis.pot.phi(z);
    return phase.real() * std::exp(logmag + logw);
}

double compute_Z(const WeightedBasis& basis) {
    return std::exp(compute_log_Z(basis));
}

double compute_log_Z(const WeightedBasis& basis) {
    double s = std::lgamma(basis.N + 1.0);
    for (double nrm : basis.norms)
        s += 2.0 * std::log(nrm);
    return s;
}

bool check_monotone_growth(const WeightedBasis& basis_N,
                           const WeightedBasis& basis_N1,
                           const std::vector<Complex>& zs) {
    if (!(basis_N.pot == basis_N1.pot) || basis_N.beta != basis_N1.beta)
        throw ArgumentError("check_monotone_growth: mismatched potential or beta");
    if (basis_N1.N != basis_N.N + 1)
        throw ArgumentError("check_monotone_growth: bases must have consecutive N");
    auto det_of = [&](const WeightedBasis& b) {
        auto [phase, logmag] = logdet(kernel_matrix(b, zs, zs));
        if (logmag == -std::numeric_limits<double>::infinity())
            return 0.0;
        return phase.real() * std::exp(logmag);
    };
    double dN = det_of(basis_N);
    double dN1 = det_of(basis_N1);
    double scale = std::max({std::abs(dN), std::abs(dN1), 1.0});
    return dN <= dN1 + 1e-10 * scale;
}

void save_basis(const std::string& path, const WeightedBasis& basis) {
    nlohmann::json j;
    j["N"] = basis.N;
    j["beta"] = basis.beta;
    j["potential"] = nlohmann::json::parse(basis.pot.descriptor());
    j["norms"] = basis.norms;
    auto coeffs = nlohmann::json::array();
    for (int r = 0; r < basis.N; ++r)
        for (int c = 0; c <= r; ++c)
            coeffs.push_back({basis.coeffs(r, c).real(), basis.coeffs(r, c).imag()});
    j["coeffs"] = coeffs;
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

WeightedBasis load_basis(const std::string& path, const Potential& pot) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    WeightedBasis basis{pot};
    basis.beta = j.at("beta").get<double>();
    basis.N = j.at("N").get<int>();
    basis.norms = j.at("norms").get<std::vector<double>>();
    basis.coeffs = Eigen::MatrixXcd::Zero(basis.N, basis.N);
    const auto& coeffs = j.at("coeffs");
    std::size_t idx = 0;
    for (int r = 0; r < basis.N; ++r)
        for (int c = 0; c <= r; ++c, ++idx)
            basis.coeffs(r, c) = Complex(coeffs.at(idx).at(0).get<double>(),
                                         coeffs.at(idx).at(1).get<double>());
    return basis;
}

} // namespace droplet
