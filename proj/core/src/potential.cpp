#include "droplet/potential.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

namespace droplet {

namespace {

void check_finite(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ArgumentError("non-finite point");
}

} // namespace

Potential Potential::gaussian() {
    Potential p;
    p.family_ = PotentialFamily::gaussian;
    return p;
}

Potential Potential::elbau_felder(double a) {
    if (!(a > -1.0 && a < 1.0))
        throw ArgumentError("elbau_felder: parameter must satisfy -1 < a < 1");
    Potential p;
    p.family_ = PotentialFamily::elbau_felder;
    p.a_ = a;
    return p;
}

Potential Potential::radial_monomial(int pexp) {
    if (pexp < 1)
        throw ArgumentError("radial_monomial: exponent must be >= 1");
    Potential p;
    p.family_ = PotentialFamily::radial_monomial;
    p.p_ = pexp;
    return p;
}

Potential Potential::tabulated(const ScalarField& phi, const ScalarField& lap) {
    if (!(phi.grid == lap.grid))
        throw ArgumentError("tabulated: value and Laplacian grids differ");
    for (double v : phi.values)
        if (!std::isfinite(v))
            throw ArgumentError("tabulated: non-finite value");
    for (double v : lap.values)
        if (!std::isfinite(v))
            throw ArgumentError("tabulated: non-finite Laplacian value");
    Potential p;
    p.family_ = PotentialFamily::tabulated;
    p.tab_phi_ = std::make_shared<ScalarField>(phi);
    p.tab_lap_ = std::make_shared<ScalarField>(lap);
    return p;
}

double Potential::interpolate(const ScalarField& f, Complex z) const {
    const BoxGrid& g = f.grid;
    if (!g.contains(z))
        throw DomainError("tabulated potential queried outside its grid");
    double h = g.spacing();
    // bilinear between the four surrounding cell centers, clamped at edges
    double fx = (z.real() + g.half_width()) / h - 0.5;
    double fy = (z.imag() + g.half_width()) / h - 0.5;
    int ix = std::min(std::max(int(std::floor(fx)), 0), g.nodes_per_side() - 2);
    int iy = std::min(std::max(int(std::floor(fy)), 0), g.nodes_per_side() - 2);
    double tx = std::min(std::max(fx - ix, 0.0), 1.0);
    double ty = std::min(std::max(fy - iy, 0.0), 1.0);
    double v00 = f.at(ix, iy), v10 = f.at(ix + 1, iy);
    double v01 = f.at(ix, iy + 1), v11 = f.at(ix + 1, iy + 1);
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 +
           (1 - tx) * ty * v01 + tx * ty * v11;
}

double Potential::phi(Complex z) const {
    check_finite(z);
    switch (family_) {
    case PotentialFamily::gaussian:
        return std::norm(z);
    case PotentialFamily::elbau_felder:
        return std::norm(z) + a_ * (z.real() * z.real() - z.imag() * z.imag());
    case PotentialFamily::radial_monomial:
        return std::pow(std::norm(z), p_);
    case PotentialFamily::tabulated:
        return interpolate(*tab_phi_, z);
    }
    throw Error("unreachable");
}

double Potential::laplacian(Complex z) const {
    check_finite(z);
    switch (family_) {
    case PotentialFamily::gaussian:
        return 4.0;
    case PotentialFamily::elbau_felder:
        return 4.0; // Re(z^2) is harmonic
    case PotentialFamily::radial_monomial:
        // Delta |z|^(2p) = 4 p^2 |z|^(2p-2)
        return 4.0 * p_ * p_ * std::pow(std::norm(z), p_ - 1);
    case PotentialFamily::tabulated:
        return interpolate(*tab_lap_, z);
    }
    throw Error("unreachable");
}

Complex Potential::gradient(Complex z) const {
    check_finite(z);
    switch (family_) {
    case PotentialFamily::gaussian:
        return 2.0 * z;
    case PotentialFamily::elbau_felder:
        return {2.0 * (1.0 + a_) * z.real(), 2.0 * (1.0 - a_) * z.imag()};
    case PotentialFamily::radial_monomial: {
        double r2 = std::norm(z);
        return 2.0 * p_ * std::pow(r2, p_ - 1) * z;
    }
    case PotentialFamily::tabulated: {
        double h = tab_phi_->grid.spacing();
        double dx = (phi(z + Complex(h, 0)) - phi(z - Complex(h, 0))) / (2 * h);
        double dy = (phi(z + Complex(0, h)) - phi(z - Complex(0, h))) / (2 * h);
        return {dx, dy};
    }
    }
    throw Error("unreachable");
}

bool Potential::radial() const {
    return family_ == PotentialFamily::gaussian ||
           family_ == PotentialFamily::radial_monomial;
}

double Potential::pair_energy(Complex z, Complex w, double theta) const {
    if (!(theta > 0))
        throw ArgumentError("pair_energy: theta must be positive");
    double d = std::abs(z - w);
    if (d == 0.0)
        return 0.0;
    return d * std::exp(-theta * (phi(z) + phi(w)));
}

double Potential::truncation_radius(double theta, double slack, double cap) const {
    if (!(theta > 0) || !(slack > 0))
        throw ArgumentError("truncation_radius: theta and slack must be positive");

    // certificate: theta Phi - (1+slack) log(1+r) >= 0 on dense ring samples
    // between R and 4R (built-ins are eventually radially monotone)
    auto certified = [&](double R) {
        const int n_radii = 33, n_angles = 64;
        for (int i = 0; i < n_radii; ++i) {
            double r = R * (1.0 + 3.0 * i / (n_radii - 1));
            for (int k = 0; k < n_angles; ++k) {
                double ang = 2.0 * M_PI * k / n_angles;
                Complex z = std::polar(r, ang);
                double g;
                try {
                    g = theta * phi(z) - (1.0 + slack) * std::log1p(r);
                } catch (const DomainError&) {
                    return false; // tabulated data ends before the certificate
                }
                if (!(g >= 0.0))
                    return false;
            }
        }
        return true;
    };

    double R = 1.0;
    while (!certified(R)) {
        R *= 2.0;
        if (R > cap)
            throw GrowthConditionError(
                "growth condition not certifiable below radius cap");
    }
    // tighten: smallest certified radius in [R/2, R]
    double lo = R / 2.0, hi = R;
    for (int it = 0; it < 20; ++it) {
        double mid = 0.5 * (lo + hi);
        (certified(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::string Potential::descriptor() const {
    nlohmann::json j;
    switch (family_) {
    case PotentialFamily::gaussian:
        j = {{"family", "gaussian"}};
        break;
    case PotentialFamily::elbau_felder:
        j = {{"family", "elbau_felder"}, {"a", a_}};
        break;
    case PotentialFamily::radial_monomial:
        j = {{"family", "radial_monomial"}, {"p", p_}};
        break;
    case PotentialFamily::tabulated:
        j = {{"family", "tabulated"}};
        break;
    }
    return j.dump();
}

bool Potential::operator==(const Potential& o) const {
    if (family_ != o.family_)
        return false;
    switch (family_) {
    case PotentialFamily::gaussian:
        return true;
    case PotentialFamily::elbau_felder:
        return a_ == o.a_;
    case PotentialFamily::radial_monomial:
        return p_ == o.p_;
    case PotentialFamily::tabulated:
        return tab_phi_ == o.tab_phi_ && tab_lap_ == o.tab_lap_;
    }
    return false;
}

double droplet_radius_estimate(const Potential& pot, double theta) {
    double rmax = pot.truncation_radius(theta, 1.0);
    double best_r = rmax;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 200; ++i) {
        double r = rmax * i / 200.0;
        double phibar = 0.0;
        for (int k = 0; k < 16; ++k)
            phibar += pot.phi(std::polar(r, 2.0 * M_PI * k / 16));
        phibar /= 16.0;
        double v = theta * phibar - std::log(r);
        if (v < best_v) {
            best_v = v;
            best_r = r;
        }
    }
    return best_r;
}

} // namespace droplet
