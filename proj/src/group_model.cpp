#include "hyw/group_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hyw/error.hpp"

namespace hyw {

namespace {

void require_dim(const NVector& n, int dim, const char* what) {
    if (static_cast<int>(n.size()) != dim) {
        throw InputError(std::string(what) + ": N-component has wrong dimension");
    }
}

void require_positive_a(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw InputError("ax+b: H-component a must be positive, got " + std::to_string(a));
    }
}

}  // namespace

// G = R x| R_+, (b, a)(b', a') = (b + a b', a a'), alpha(a) = (0, a).
GroupExtensionModel make_axb_model() {
    GroupExtensionModel m;
    m.name = "axb";
    m.dim_N = 1;
    m.dim_G = 2;
    m.nilpotent = false;
    m.unimodular = false;
    m.h_from_coordinate = [](double t) { return std::exp(t); };
    m.coordinate_from_h = [](double a) {
        require_positive_a(a);
        return std::log(a);
    };
    m.h_multiply = [](double a1, double a2) { return a1 * a2; };
    m.h_inverse = [](double a) {
        require_positive_a(a);
        return 1.0 / a;
    };
    m.h_identity = 1.0;
    m.conjugation_action = [](double a, const NVector& n) {
        require_positive_a(a);
        return NVector{a * n.at(0)};
    };
    m.section_defect = [](double, double) { return NVector{0.0}; };
    m.modular_on_H = [](double a) {
        require_positive_a(a);
        return 1.0 / a;
    };
    m.dual_action_fn = [](double a, const CharacterParam& chi) {
        require_positive_a(a);
        return CharacterParam{chi.at(0) / a};
    };
    m.cocycle_fn = [](double, double) { return NVector{0.0}; };
    m.cocycle_trivial = true;
    return m;
}

// Coordinates (x, y, z) with (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y').
// N = {(0,y,z)}, alpha(x) = (x,0,0); n alpha(h) = (x, y, z).
GroupExtensionModel make_heisenberg_model() {
    GroupExtensionModel m;
    m.name = "heisenberg";
    m.dim_N = 2;
    m.dim_G = 3;
    m.max_orbit_dim_G = 2;
    m.max_orbit_dim_N = 0;
    m.nilpotent = true;
    m.unimodular = true;
    m.h_from_coordinate = [](double t) { return t; };
    m.coordinate_from_h = [](double x) { return x; };
    m.h_multiply = [](double x1, double x2) { return x1 + x2; };
    m.h_inverse = [](double x) { return -x; };
    m.h_identity = 0.0;
    m.conjugation_action = [](double x, const NVector& n) { return NVector{n.at(0), n.at(1) + x * n.at(0)}; };
    m.section_defect = [](double, double) { return NVector{0.0, 0.0}; };
    m.modular_on_H = [](double) { return 1.0; };
    m.dual_action_fn = [](double x, const CharacterParam& chi) {
        return CharacterParam{chi.at(0) - chi.at(1) * x, chi.at(1)};
    };
    m.cocycle_fn = [](double, double) { return NVector{0.0, 0.0}; };
    m.cocycle_trivial = true;
    return m;
}

DualOrbitModel make_axb_dual() {
    DualOrbitModel d;
    d.description = "two open orbits omega > 0 and omega < 0, transversal {+1, -1}, unit atoms";
    d.atomic = true;
    d.exclusion_in_window = true;
    d.transversal = [](const TransversalOptions&) {
        return std::vector<TransversalPoint>{{{1.0}, 1.0}, {{-1.0}, 1.0}};
    };
    // h(t) . eps = eps e^{-t}; |omega| <= band  <=>  t >= -log(band),
    // |omega| >= r  <=>  t <= -log(r).
    d.orbit_window = [](const CharacterParam& sigma0, const std::vector<double>& band, double exclusion) {
        const double base = std::abs(sigma0.at(0));
        const double lo = std::log(base / band.at(0));
        const double hi = exclusion > 0.0 ? std::log(base / exclusion) : std::numeric_limits<double>::infinity();
        return std::pair<double, double>{lo, hi};
    };
    return d;
}

DualOrbitModel make_heisenberg_dual() {
    DualOrbitModel d;
    d.description = "orbits {(mu, lambda) : mu in R}, lambda != 0; transversal mu = 0, nu_G = |lambda| d lambda";
    d.atomic = false;
    d.exclusion_in_window = false;
    d.transversal = [](const TransversalOptions& opt) {
        if (opt.n_points < 2 || opt.n_points % 2 != 0) {
            throw InputError("Heisenberg transversal: need an even number of lambda points");
        }
        if (!(opt.max_parameter > opt.exclusion_radius) || opt.exclusion_radius < 0.0) {
            throw InputError("Heisenberg transversal: need 0 <= exclusion < lambda_max");
        }
        const std::size_t half = opt.n_points / 2;
        const double dl = (opt.max_parameter - opt.exclusion_radius) / static_cast<double>(half);
        std::vector<TransversalPoint> pts;
        pts.reserve(opt.n_points);
        for (std::size_t i = half; i-- > 0;) {
            const double lam = opt.exclusion_radius + (static_cast<double>(i) + 0.5) * dl;
            pts.push_back({{0.0, -lam}, lam * dl});
        }
        for (std::size_t i = 0; i < half; ++i) {
            const double lam = opt.exclusion_radius + (static_cast<double>(i) + 0.5) * dl;
            pts.push_back({{0.0, lam}, lam * dl});
        }
        return pts;
    };
    // h(x) . (0, lambda) = (-lambda x, lambda): |lambda x| <= band_mu.
    d.orbit_window = [](const CharacterParam& sigma0, const std::vector<double>& band, double) {
        const double lam = std::abs(sigma0.at(1));
        if (lam == 0.0 || lam > band.at(1)) {
            return std::pair<double, double>{0.0, -1.0};
        }
        const double r = (band.at(0) - std::abs(sigma0.at(0))) / lam;
        return std::pair<double, double>{-r, r};
    };
    return d;
}

GroupExtensionModel model_by_name(std::string_view name) {
    if (name == "axb") {
        return make_axb_model();
    }
    if (name == "heisenberg") {
        return make_heisenberg_model();
    }
    throw InputError("unknown group model '" + std::string(name) + "' (valid: axb, heisenberg)");
}

DualOrbitModel dual_by_name(std::string_view name) {
    if (name == "axb") {
        return make_axb_dual();
    }
    if (name == "heisenberg") {
        return make_heisenberg_dual();
    }
    throw InputError("unknown group model '" + std::string(name) + "' (valid: axb, heisenberg)");
}

GroupElement identity(const GroupExtensionModel& model) {
    return {NVector(static_cast<std::size_t>(model.dim_N), 0.0), model.h_identity};
}

GroupElement section(const GroupExtensionModel& model, double h) {
    return {NVector(static_cast<std::size_t>(model.dim_N), 0.0), h};
}

// n1 alpha(h1) n2 alpha(h2) = n1 [alpha(h1) n2 alpha(h1)^-1] [alpha(h1) alpha(h2) alpha(h1 h2)^-1] alpha(h1 h2)
GroupElement multiply(const GroupExtensionModel& model, const GroupElement& a, const GroupElement& b) {
    require_dim(a.n, model.dim_N, "multiply");
    require_dim(b.n, model.dim_N, "multiply");
    const NVector conj = model.conjugation_action(a.h, b.n);
    const NVector defect = model.section_defect(a.h, b.h);
    GroupElement out;
    out.n.resize(a.n.size());
    for (std::size_t i = 0; i < a.n.size(); ++i) {
        out.n[i] = a.n[i] + conj[i] + defect[i];
    }
    out.h = model.h_multiply(a.h, b.h);
    return out;
}

// With d = alpha(h^-1) alpha(h) in N: (n alpha(h))^-1 = d^-1 [alpha(h^-1) n^-1 alpha(h^-1)^-1] alpha(h^-1).
GroupElement inverse(const GroupExtensionModel& model, const GroupElement& g) {
    require_dim(g.n, model.dim_N, "inverse");
    const double hinv = model.h_inverse(g.h);
    NVector minus_n(g.n.size());
    for (std::size_t i = 0; i < g.n.size(); ++i) {
        minus_n[i] = -g.n[i];
    }
    const NVector conj = model.conjugation_action(hinv, minus_n);
    const NVector defect = model.section_defect(hinv, g.h);
    GroupElement out;
    out.n.resize(g.n.size());
    for (std::size_t i = 0; i < g.n.size(); ++i) {
        out.n[i] = conj[i] - defect[i];
    }
    out.h = hinv;
    return out;
}

double modular(const GroupExtensionModel& model, double h) { return model.modular_on_H(h); }

CharacterParam dual_action(const GroupExtensionModel& model, double h, const CharacterParam& chi) {
    if (static_cast<int>(chi.size()) != model.dim_N) {
        throw InputError("dual_action: character parameter has wrong dimension");
    }
    return model.dual_action_fn(h, chi);
}

NVector cocycle(const GroupExtensionModel& model, double gamma, double xi) {
    const double inner = model.h_multiply(model.h_inverse(gamma), xi);
    const GroupElement prod = multiply(model, inverse(model, section(model, xi)),
                                       multiply(model, section(model, gamma), section(model, inner)));
    return prod.n;
}

double haar_weight(const GroupExtensionModel& model, const NVector& n, double h) {
    require_dim(n, model.dim_N, "haar_weight");
    return model.modular_on_H(h);
}

double disintegration_weight(const GroupExtensionModel& model, double h) { return model.modular_on_H(h); }

std::complex<double> character_value(const CharacterParam& omega, const NVector& n) {
    if (omega.size() != n.size()) {
        throw InputError("character_value: dimension mismatch");
    }
    double phase = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        phase += omega[i] * n[i];
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * phase);
}

}  // namespace hyw
