#pragma once

#include "fockspace.hpp"
#include "propagator.hpp"

namespace qst {

struct SpectralBlock {
    std::vector<int> index;  // global basis indices, ascending
    Vec values;
    Mat vectors;
};

struct SpectralDecomposition {
    int n_exc = 0;
    int n_max = 0;
    Vec energies;                               // ascending, relative to omega0
    std::vector<std::pair<int, int>> location;  // (block, column) of each sorted eigenvalue
    std::vector<SpectralBlock> blocks;
    double worst_residual = 0;                  // max ||H v - E v||
    double h_norm = 0;                          // max |H_ij|

    int dim() const { return static_cast<int>(energies.size()); }
    Vec eigenvector(int i) const;
};

// H splits into independent blocks (phonon parity sectors, isolated ladders);
// each block is solved densely.
SpectralDecomposition eigendecompose(const CoupledHamiltonian& h);

// Same result without materialising the full matrix.
SpectralDecomposition eigendecompose(const ExcitonEigensystem& exc, const Mat& m, const DerivedParams& d,
                                     int n_max);

struct ExactTerms {
    std::vector<double> freq;    // E_i - n Omega
    std::vector<double> weight;  // p_n c_i^(n)
};

ExactTerms exact_terms(const SpectralDecomposition& dec, const ExcitonEigensystem& exc,
                       const FockTruncation& trunc, const DerivedParams& d, double drop = 1e-14);

// sum_k w_k exp(-i f_k t / Phi) on the given grid; deterministic for any thread count.
std::vector<cplx> spectral_sum(const std::vector<double>& freq, const std::vector<double>& weight,
                               const std::vector<double>& times_phi, double hopping, int threads = 0);

PropagatorSeries exact_propagator(const SpectralDecomposition& dec, const ExcitonEigensystem& exc,
                                  const FockTruncation& trunc, const DerivedParams& d,
                                  const std::vector<double>& times_phi, double tail_tol = 1e-5);

// <L| exp(-i H_A t) |0> from the exciton eigensystem alone.
PropagatorSeries bare_propagator(const ExcitonEigensystem& exc, const DerivedParams& d,
                                 const std::vector<double>& times_phi);

}  // namespace qst
