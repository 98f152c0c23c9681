#pragma once

#include "exciton.hpp"
#include "propagator.hpp"

namespace qst {

struct PTOperators {
    Mat z, a, b, e;
};

PTOperators build_pt_operators(const ExcitonEigensystem& exc, const Mat& m, double omega);

struct DeltaMatrices {
    Mat dh;      // exciton energy correction
    Mat domega;  // phonon frequency correction
};

// Explicit second-order sums, independent of the operator route.
DeltaMatrices delta_matrices(const ExcitonEigensystem& exc, const Mat& m, double omega);

struct DressedSystem {
    Vec energies;        // hat omega_nu, relative to omega0
    Mat chi;             // columns in the psi basis
    Vec d_omega;         // delta Omega_nu
    Vec d_omega_mu;      // diagonal of the energy correction
    std::vector<MuLabel> labels;
    double v_pm = 0;     // <psi_+|dH|psi_->

    int index(StateTag t) const;
};

DressedSystem dress(const ExcitonEigensystem& exc, const Mat& dh, const Mat& domega);

struct PtLevel {
    double energy;
    int nu;
    int n;
};

std::vector<PtLevel> pt_spectrum(const DressedSystem& dr, double omega, int n_max);

// (1 - e^{-bW}) / (1 - e^{-bW - i dW t}); identically 1 at T = 0.
cplx decoherence_factor(double beta_omega, double d_omega, double t);

PropagatorSeries pt_propagator(const ExcitonEigensystem& exc, const DressedSystem& dr, const PTOperators& ops,
                               const DerivedParams& d, const std::vector<double>& times_phi);

PropagatorSeries diagonal_propagator(const ExcitonEigensystem& exc, const DressedSystem& dr, const DerivedParams& d,
                                     const std::vector<double>& times_phi);

}  // namespace qst
