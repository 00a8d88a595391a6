#pragma once

#include <memory>
#include <optional>
#include <string>

#include "droplet/grid.hpp"

namespace droplet {

enum class PotentialFamily { gaussian, elbau_felder, radial_monomial, tabulated };

/// Confining external field Phi with its Laplacian and gradient.
///
/// Built-in families:
///   gaussian          Phi(z) = |z|^2
///   elbau_felder(a)   Phi(z) = |z|^2 + a Re(z^2),  -1 < a < 1
///   radial_monomial(p) Phi(z) = |z|^(2p),  integer p >= 1
///   tabulated         bilinear interpolation of user-supplied values;
///                     Laplacian values must be supplied as well.
///
/// Immutable after construction; safe to share across threads.
class Potential {
  public:
    static Potential gaussian();
    static Potential elbau_felder(double a);
    static Potential radial_monomial(int p);
    static Potential tabulated(const ScalarField& phi, const ScalarField& laplacian);

    double phi(Complex z) const;
    double laplacian(Complex z) const;

    /// Gradient of Phi; analytic for built-in families, central differences
    /// for tabulated data.
    Complex gradient(Complex z) const;

    PotentialFamily family() const { return family_; }
    double param_a() const { return a_; }
    int param_p() const { return p_; }

    /// True when Phi depends on |z| only (gaussian, radial_monomial).
    bool radial() const;

    /// E_Phi(z, w; theta) = |z-w| exp(-theta [Phi(z) + Phi(w)]).
    /// Returns 0 at z == w; log-energy callers must treat that as +inf.
    double pair_energy(Complex z, Complex w, double theta) const;

    /// Smallest ring-certified R such that
    ///   theta Phi(z) - (1 + slack) log(1 + |z|) >= 0  on |z| >= R,
    /// found by doubling then bisection on dense ring samples. Throws
    /// GrowthConditionError when no certificate exists below the cap.
    double truncation_radius(double theta, double slack, double cap = 1e6) const;

    /// JSON descriptor matching the run-config schema, e.g.
    /// {"family":"elbau_felder","a":0.5}.
    std::string descriptor() const;

    bool operator==(const Potential& o) const;

  private:
    Potential() = default;

    PotentialFamily family_ = PotentialFamily::gaussian;
    double a_ = 0.0; // elbau_felder parameter
    int p_ = 1;      // radial_monomial exponent
    std::shared_ptr<const ScalarField> tab_phi_;
    std::shared_ptr<const ScalarField> tab_lap_;

    double interpolate(const ScalarField& f, Complex z) const;
};

/// Radius minimizing the one-point effective potential
/// theta * ring-mean(Phi)(r) - log r; a proxy for the droplet edge used to
/// seed optimizers and samplers.
double droplet_radius_estimate(const Potential& pot, double theta);

} // namespace droplet
