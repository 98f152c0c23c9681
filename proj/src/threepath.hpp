#pragma once

#include <string>
#include <vector>

#include "params.hpp"
#include "propagator.hpp"

namespace qst {

struct ThreePathModel {
    double epsilon = 0;
    std::vector<double> e_r;
    bool series_converged = true;

    double dw_plus = 0, dw_minus = 0;  // second-order shifts of the bare hybrids
    double v_pm = 0;
    double delta = 0;                  // bare splitting 2 Ebar eps
    double disc = 0;                   // discriminant
    double cos2t = 0, sin2t = 0, theta = 0;
    double w_hat_plus = 0, w_hat_minus = 0;  // relative to omega0
    double d_om_plus = 0, d_om_minus = 0;
    double w_plus = 0, w_minus = 0, w_s = 0, w_f = 0, alpha = 0;
    double t_f = 0, t_s = 0, t_plus = 0, t_minus = 0;  // units of 1/Phi
};

std::vector<double> taylor_coefficients(const DerivedParams& d, int r_max);

// Fills dw_plus/minus, v_pm, delta, disc, theta, w_hat_plus/minus. Requires e_r.
void hybridize(const DerivedParams& d, ThreePathModel& m);

// Fills d_om_plus/minus. Requires theta.
void phonon_shift_pm(ThreePathModel& m);

ThreePathModel three_path_model(const DerivedParams& d, double epsilon, int r_max = 12);

// |F| of the exact decoherence factor, or its closed approximate form when simplified.
double decoherence_modulus(const DerivedParams& d, double d_omega, double t, bool simplified);

PropagatorSeries three_path_propagator(const ThreePathModel& m, const DerivedParams& d,
                                       const std::vector<double>& times_phi, bool simplified_modulus = false);

// |G|^2 written with slow and fast frequencies for equal moduli and no mixing angle.
double interference_modulus_sq(double f, double w_s, double w_f, double t);

double epsilon_star(const DerivedParams& d, int r_max = 12);

struct GmStar {
    double epsilon;
    double n0;
    double dn;
    double gm;
    double t0_kelvin;
};

GmStar gm_star(const DerivedParams& d, double eps_star, int r_max = 12);

struct ResonanceMatch {
    std::string type;  // "destructive", "constructive" or "none"
    int p = -1;
    int q = -1;
    double value = 0;
};

ResonanceMatch resonance_condition(double alpha, double window = 0.01, int max_order = 4);

}  // namespace qst
