#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyw {

/// Element of the vector group N = R^dim_N (written additively).
using NVector = std::vector<double>;

/// Parameter omega of the character chi_omega(n) = exp(2 pi i <omega, n>) of N.
using CharacterParam = std::vector<double>;

/// g = n alpha(h), stored as (n, h). h is the native H value (a > 0 for ax+b,
/// x in R for Heisenberg), not the grid coordinate.
struct GroupElement {
    NVector n;
    double h = 0.0;
};

/// The extension 1 -> N -> G -> H -> 1 with N abelian, realized through a
/// cross-section alpha : H -> G.
struct GroupExtensionModel {
    std::string name;
    int dim_N = 0;
    int dim_G = 0;
    /// Maximal coadjoint orbit dimension d*(G); only meaningful when nilpotent.
    int max_orbit_dim_G = 0;
    int max_orbit_dim_N = 0;
    bool nilpotent = false;
    bool unimodular = false;

    /// Coordinate t on the grid <-> native h. Haar measure of H is dt.
    std::function<double(double)> h_from_coordinate;
    std::function<double(double)> coordinate_from_h;
    std::function<double(double, double)> h_multiply;
    std::function<double(double)> h_inverse;
    double h_identity = 0.0;

    /// alpha(h) n alpha(h)^-1.
    std::function<NVector(double, const NVector&)> conjugation_action;
    /// alpha(h1) alpha(h2) alpha(h1 h2)^-1, the defect of the cross-section.
    std::function<NVector(double, double)> section_defect;
    /// Delta_G on H; throws InputError outside H.
    std::function<double(double)> modular_on_H;
    /// (h . chi)(n) = chi(alpha(h)^-1 n alpha(h)) expressed on parameters.
    std::function<CharacterParam(double, const CharacterParam&)> dual_action_fn;
    /// Closed-form Lambda(gamma, xi); cross-checked against the defining formula.
    std::function<NVector(double, double)> cocycle_fn;
    /// cocycle_fn is identically zero; kernels skip the sigma0(Lambda) factor.
    bool cocycle_trivial = false;

    bool same_as(const GroupExtensionModel& other) const { return name == other.name; }
};

/// One sample of the transversal U_0 with its Plancherel weight.
struct TransversalPoint {
    CharacterParam chi;
    double weight = 0.0;
};

struct TransversalOptions {
    /// Number of samples of a continuous transversal (ignored for atoms).
    std::size_t n_points = 64;
    /// Largest |parameter| sampled (Heisenberg: lambda_max).
    double max_parameter = 2.0;
    /// Radius of the excluded neighbourhood of the non-free locus.
    double exclusion_radius = 0.0;
};

/// Plancherel data of the dual orbit picture: transversal, nu_G and psi.
struct DualOrbitModel {
    std::string description;
    bool atomic = false;
    /// Transversal sample with nu_G quadrature weights.
    std::function<std::vector<TransversalPoint>(const TransversalOptions&)> transversal;
    /// Interval of grid coordinates t for which (h(t) . sigma0) stays inside the band
    /// |omega_d| <= band[d] and outside the excluded neighbourhood.
    std::function<std::pair<double, double>(const CharacterParam&, const std::vector<double>&, double)>
        orbit_window;
    /// Non-free locus exclusion acts on the window (ax+b) or on the transversal (Heisenberg).
    bool exclusion_in_window = false;
};

GroupExtensionModel make_axb_model();
GroupExtensionModel make_heisenberg_model();
DualOrbitModel make_axb_dual();
DualOrbitModel make_heisenberg_dual();

/// "axb" or "heisenberg"; throws InputError otherwise.
GroupExtensionModel model_by_name(std::string_view name);
DualOrbitModel dual_by_name(std::string_view name);

GroupElement identity(const GroupExtensionModel& model);
GroupElement section(const GroupExtensionModel& model, double h);

GroupElement multiply(const GroupExtensionModel& model, const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupExtensionModel& model, const GroupElement& g);

double modular(const GroupExtensionModel& model, double h);

CharacterParam dual_action(const GroupExtensionModel& model, double h, const CharacterParam& chi);

/// Lambda(gamma, xi) = alpha(xi)^-1 alpha(gamma) alpha(alpha(gamma)^-1 xi), evaluated
/// through multiply/inverse. Returns the N component.
NVector cocycle(const GroupExtensionModel& model, double gamma, double xi);

/// Density of mu_G(n, h) relative to dn dt in grid coordinates.
double haar_weight(const GroupExtensionModel& model, const NVector& n, double h);

/// psi(h) = Delta_G(h), the density in d nu_N = psi d mu_H d nu_G.
double disintegration_weight(const GroupExtensionModel& model, double h);

/// chi_omega(n) = exp(2 pi i <omega, n>).
std::complex<double> character_value(const CharacterParam& omega, const NVector& n);

}  // namespace hyw
