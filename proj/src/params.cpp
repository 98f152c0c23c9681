#include "params.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace qst {

void check_params(const ModelParams& p)
{
    auto bad = [](const std::string& m) { fail(ErrorCode::argument, m); };
    if (p.lattice_length < 4 || p.lattice_length % 2 != 0) bad("lattice_length must be even and >= 4");
    if (!(p.hopping > 0)) bad("hopping must be positive");
    if (!(p.force_constant > 0)) bad("force_constant must be positive");
    if (!(p.mass > 0)) bad("mass must be positive");
    if (!(p.temperature >= 0)) bad("temperature must be >= 0");
    if (!(p.chi_pn >= 0)) bad("chi must be >= 0");
    if (!(p.epsilon >= 0)) bad("epsilon must be >= 0");
    if (p.cutoff_override && !(*p.cutoff_override > 0)) bad("cutoff override must be positive");
    if (!std::isfinite(p.omega0)) bad("omega0 must be finite");
}

double bose_occupation(double beta_omega)
{
    if (std::isinf(beta_omega)) return 0.0;
    return 1.0 / std::expm1(beta_omega);
}

DerivedParams derive(const ModelParams& p)
{
    check_params(p);
    using namespace phys;
    DerivedParams d;
    d.L = p.lattice_length;
    d.N = d.L - 1;
    d.hopping = p.hopping;

    double chi = p.chi_pn * 1e-12;  // N
    d.binding = chi * chi / p.force_constant / (planck * light_cm);
    d.cutoff = p.cutoff_override ? *p.cutoff_override
                                 : std::sqrt(4.0 * p.force_constant / p.mass) / (2.0 * pi * light_cm);
    double ratio = std::sin(pi / (2.0 * d.L));
    d.omega = d.cutoff * ratio;
    d.eta = std::sqrt(d.binding * d.omega / d.L * (1.0 - ratio * ratio));

    d.phi_s = p.epsilon * p.hopping;
    d.g = d.phi_s * std::sqrt(2.0 / d.L);
    d.delta_n = (d.N % 4 == 1) ? 1 : -1;
    d.g_prime = d.g * d.delta_n;
    d.e_bar = 2.0 * p.hopping / std::sqrt(double(d.L));
    d.delta_omega = std::abs(2.0 * p.hopping * std::cos((d.L / 2 - 1) * pi / d.L));

    const double inf = std::numeric_limits<double>::infinity();
    if (p.temperature > 0) {
        d.beta_omega = d.omega / (boltzmann_cm * p.temperature);
        d.n_bar = bose_occupation(d.beta_omega);
    } else {
        d.beta_omega = inf;
        d.n_bar = 0.0;
    }
    d.delta_n_sq = d.n_bar * (d.n_bar + 1.0);

    if (d.binding > 0 && p.temperature > 0)
        d.l_star = 0.2 * d.cutoff * d.cutoff / (d.binding * boltzmann_cm * p.temperature);
    else
        d.l_star = inf;
    return d;
}

std::vector<ValidityCheck> validity_report(const DerivedParams& d, const ModelParams& p)
{
    std::vector<ValidityCheck> out;
    out.push_back({"nonadiabatic", 4.0 * d.hopping < d.cutoff, 4.0 * d.hopping, d.cutoff});
    double eps_max = 0.1 * phys::pi * std::sqrt(2.0 / d.L);
    out.push_back({"small_epsilon", p.epsilon < eps_max, p.epsilon, eps_max});
    out.push_back({"pt_size", double(d.L) < d.l_star, double(d.L), d.l_star});
    return out;
}

}  // namespace qst
