#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qst {

namespace phys {
inline constexpr double planck = 6.62607e-34;       // J s
inline constexpr double light_cm = 2.99792458e10;   // cm/s
inline constexpr double boltzmann_cm = 0.6950348;   // cm^-1 / K
inline constexpr double pi = 3.14159265358979323846;
}  // namespace phys

struct ModelParams {
    double omega0 = 1660.0;          // cm^-1
    double force_constant = 15.0;    // N/m
    double mass = 1.8e-25;           // kg
    double hopping = 7.8;            // cm^-1
    double chi_pn = 10.0;            // pN
    double epsilon = 0.013;
    int lattice_length = 10;         // L = N + 1
    double temperature = 300.0;      // K
    std::optional<double> cutoff_override = 96.86;  // cm^-1
};

struct DerivedParams {
    int L = 0;
    int N = 0;
    double hopping = 0;      // Phi
    double binding = 0;      // E_B
    double cutoff = 0;       // Omega_c
    double omega = 0;        // Omega (lowest mode)
    double eta = 0;
    double phi_s = 0;        // eps * Phi
    double g = 0;
    double g_prime = 0;
    int delta_n = 1;         // sin(N pi / 2)
    double e_bar = 0;        // 2 Phi / sqrt(L)
    double delta_omega = 0;  // |w_{L/2} - w_{L/2 +- 1}|
    double beta_omega = 0;   // +inf at T = 0
    double n_bar = 0;
    double delta_n_sq = 0;   // n(n+1)
    double l_star = 0;       // +inf when chi = 0 or T = 0
};

void check_params(const ModelParams& p);
DerivedParams derive(const ModelParams& p);

double bose_occupation(double beta_omega);

struct ValidityCheck {
    std::string name;
    bool passed;
    double value;
    double threshold;
};

std::vector<ValidityCheck> validity_report(const DerivedParams& d, const ModelParams& p);

}  // namespace qst
