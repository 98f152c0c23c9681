#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exact.hpp"
#include "pt.hpp"
#include "table.hpp"
#include "threepath.hpp"

namespace qst {

struct EngineOptions {
    QcCoupling basis = QcCoupling::resonant;
    int n_max = -1;  // < 0: chosen from the thermal tail
    bool probe_nmax = true;  // then grown until max |G| settles
    double tail_tol = 1e-5;
    int n_max_cap = 512;
    double t_max_phi = 2000.0;
    int time_points = 20001;
    bool simplified_modulus = false;
    double double_max_gap = 0.06;
    int threads = 0;
};

struct ExcitonStage {
    DerivedParams d;
    ExcitonEigensystem exc;
    Mat m;
};

ExcitonStage exciton_stage(const ModelParams& p, QcCoupling basis);

struct PtStage {
    PTOperators ops;
    DressedSystem dr;
};

PtStage pt_stage(const ExcitonStage& s);

int resolve_nmax(const DerivedParams& d, const EngineOptions& o);

// Diagonalises once; the thermal average can then be taken at any temperature
// whose tail fits the truncation.
class ExactSolver {
public:
    ExactSolver(const ModelParams& p, QcCoupling basis, int n_max);
    PropagatorSeries propagate(double temperature, const std::vector<double>& times_phi, double tail_tol = 1e-5,
                               int threads = 0) const;
    const SpectralDecomposition& decomposition() const { return dec_; }
    const ExcitonStage& stage() const { return st_; }
    int n_max() const { return dec_.n_max; }

private:
    ModelParams p_;
    ExcitonStage st_;
    SpectralDecomposition dec_;
};

// Solver whose truncation covers every listed temperature. With probe_nmax the tail
// choice is raised in steps of 10 until max |G| on a coarse grid moves by < 1e-4.
std::unique_ptr<ExactSolver> exact_solver(const ModelParams& p, const std::vector<double>& temperatures,
                                          const EngineOptions& o);

PropagatorSeries propagate(const ModelParams& p, Engine e, const EngineOptions& o,
                           const std::vector<double>& times_phi);
PropagatorSeries propagate(const ModelParams& p, Engine e, const EngineOptions& o);

struct Extremum {
    double t;
    double value;
};

struct MaxReport {
    double gm = 0;
    double tm = 0;
    std::vector<Extremum> local_maxima;  // above 0.5, prominence >= 0.1
    bool double_max = false;
    double refinement = 0;  // shift of the refined peak from the grid value
    double window = 0;
};

MaxReport find_max(const PropagatorSeries& s, double double_max_gap = 0.06);

struct SweepRow {
    double epsilon = 0;
    double temperature = 0;
    double chi = 0;
    int lattice_length = 0;
    int n_max = -1;
    MaxReport report;
    double alpha = std::nan("");
    double tm_over_tf = std::nan("");
    std::string error;
};

struct SweepTable {
    std::string axis;
    Engine engine = Engine::exact;
    double window = 0;
    std::vector<SweepRow> rows;
};

SweepTable sweep_epsilon(const ModelParams& p, const std::vector<double>& eps_grid,
                         const std::vector<double>& temperatures, Engine e, const EngineOptions& o);

SweepTable sweep_temperature(const ModelParams& p, const std::vector<double>& eps_list,
                             const std::vector<double>& t_grid, Engine e, const EngineOptions& o);

// G_M ~ 1 - (T/T0)^2, least squares in 1/T0^2 over rows with lo <= T <= hi.
double fit_t0(const std::vector<double>& t, const std::vector<double>& gm, double lo, double hi);

// Lowest temperature at which T_M has settled within rel_tol of its smallest value:
// from there on the earliest transfer window carries the maximum.
double knee_temperature(const std::vector<double>& t, const std::vector<double>& tm, double rel_tol = 0.1);

// Point of largest |second difference| of G_M against log T.
double knee_curvature(const std::vector<double>& t, const std::vector<double>& gm);

struct SpectrumPair {
    double e_exact;
    double e_pt;
    int nu;
    int n;
    double spacing;  // distance to the nearest other exact level
    bool flagged;    // |dE| above half the spacing
};

std::vector<SpectrumPair> spectrum_compare(const Vec& exact, const std::vector<PtLevel>& pt);

// Table with exact and PT levels near the band centre for each coupling.
Table crossing_scan(const ModelParams& p, const std::vector<double>& chi_grid, const EngineOptions& o,
                    double window_omega = 3.0);

Table shift_scan(const ModelParams& p, const std::vector<double>& eps_grid, const EngineOptions& o);

cplx qubit_coherence(cplx g, cplx sigma0);

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

std::vector<CheckResult> validate(const ModelParams& p, const EngineOptions& o);

Table sweep_to_table(const SweepTable& s);

}  // namespace qst
