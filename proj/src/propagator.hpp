#pragma once

#include <complex>
#include <string>
#include <vector>

namespace qst {

using cplx = std::complex<double>;

enum class Engine { exact, pt_full, pt_diagonal, threepath };

const char* engine_name(Engine e);
Engine parse_engine(const std::string& s);

struct PropagatorSeries {
    std::vector<double> times_phi;  // units of 1/Phi
    std::vector<cplx> values;       // G_L0 with exp(-i omega0 t) removed
    Engine engine = Engine::exact;
    std::vector<std::string> warnings;
    int n_max = -1;  // phonon truncation, exact engine only
};

// n + 1 points on [0, t_max]
std::vector<double> uniform_times(double t_max, int points);

}  // namespace qst
