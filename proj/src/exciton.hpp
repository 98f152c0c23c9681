#pragma once

#include <string>
#include <vector>

#include "linalg.hpp"
#include "params.hpp"

namespace qst {

// How the quantum-computer end groups couple to the chain.
//   full:     site bonds |0><1| and |L><N| with strength eps*Phi
//   resonant: the same bonds projected onto the band-centre wave only
enum class QcCoupling { full, resonant };

enum class StateTag { stationary, plus, o, minus };
enum class Provenance { numeric, analytic };

struct MuLabel {
    int mu;
    StateTag tag;
    int k;  // wave index for stationary states, L/2 for the triplet
};

const char* tag_name(StateTag t);
MuLabel mu_label(int mu, int L);

struct StationaryWaves {
    Vec wavevector;  // k pi / L, k = 1..N
    Vec energy;      // omega0 + 2 Phi cos(K)
    Mat coeff;       // coeff(x-1, k-1) = sqrt(2/L) sin(K x)
};

StationaryWaves stationary_waves(int N, double omega0, double hopping);

// Waves embedded in the (N+2) site basis, column k-1 for wave k.
Mat embedded_waves(int L);

Mat build_h_a(const ModelParams& p, const DerivedParams& d, QcCoupling c = QcCoupling::full);

struct Triplet {
    Vec plus, minus, o;                 // site basis
    double w_plus, w_minus, w_o;        // relative to omega0
};

Triplet analytic_triplet(const ModelParams& p, const DerivedParams& d);

struct ExcitonEigensystem {
    Vec energies;   // relative to omega0, in mu order
    Mat vectors;    // site-basis columns, in mu order
    std::vector<MuLabel> labels;
    Provenance provenance = Provenance::numeric;
    int L = 0;

    int index(StateTag t) const;  // mu of plus / o / minus
    int size() const { return static_cast<int>(energies.size()); }
};

// Reference states of the resonant-subspace picture: stationary waves k != L/2
// plus the analytic triplet, all in mu order.
ExcitonEigensystem resonant_eigensystem(const ModelParams& p, const DerivedParams& d);

// h is relative to omega0 or absolute; pass the offset that was put on the diagonal.
ExcitonEigensystem diagonalize_h_a(const Mat& h, const ModelParams& p, const DerivedParams& d,
                                   double offset);

// Convenience: build and diagonalize with the given coupling, energies relative to omega0.
ExcitonEigensystem exciton_eigensystem(const ModelParams& p, const DerivedParams& d, QcCoupling c);

}  // namespace qst
