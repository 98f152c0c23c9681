#pragma once

#include <functional>
#include <optional>

#include "exciton.hpp"

namespace qst {

// Coupling operator M in the exciton eigenbasis.
Mat m_operator(const ExcitonEigensystem& exc, const DerivedParams& d);

struct FockTruncation {
    int n_max = 0;
    Vec weights;       // thermal p_n, n = 0..n_max
    double tail_mass = 0;
};

FockTruncation make_truncation(const DerivedParams& d, int n_max);

// Returns |G| at a probe time for a trial n_max; used for the convergence check.
using NmaxProbe = std::function<double(int)>;

FockTruncation choose_nmax(const DerivedParams& d, double tol, int cap = 512,
                           const std::optional<NmaxProbe>& probe = std::nullopt);

struct CoupledHamiltonian {
    int n_exc = 0;   // L + 1
    int n_max = 0;
    Mat h;           // index mu * (n_max + 1) + n

    int dim() const { return static_cast<int>(h.rows()); }
    int index(int mu, int n) const { return mu * (n_max + 1) + n; }
};

CoupledHamiltonian build_full_h(const ExcitonEigensystem& exc, const Mat& m, const DerivedParams& d,
                                const FockTruncation& trunc);

// Separate blocks on the same basis.
Mat h0_block(const ExcitonEigensystem& exc, const DerivedParams& d, int n_max);
Mat v_block(const Mat& m, int n_max);

}  // namespace qst
