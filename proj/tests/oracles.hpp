#pragma once
// Reference implementations used only by tests. Nothing here calls into the library's solvers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

struct Eig {
    std::vector<double> values;  // ascending
    Dense vectors;               // vectors[i][k]: component i of eigenvector k
};

// Cyclic Jacobi rotations on a small dense symmetric matrix.
inline Eig jacobi(Dense a)
{
    const size_t n = a.size();
    Dense v(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return a[x][x] < a[y][y]; });
    Eig e;
    e.vectors.assign(n, std::vector<double>(n));
    for (size_t k = 0; k < n; ++k) {
        e.values.push_back(a[order[k]][order[k]]);
        for (size_t i = 0; i < n; ++i) e.vectors[i][k] = v[i][order[k]];
    }
    return e;
}

// <b| exp(-i H t) |a> for a small real symmetric H.
inline std::complex<double> evolve(const Dense& h, size_t a, size_t b, double t)
{
    Eig e = jacobi(h);
    std::complex<double> g = 0;
    for (size_t k = 0; k < h.size(); ++k)
        g += e.vectors[b][k] * e.vectors[a][k] * std::exp(std::complex<double>(0, -e.values[k] * t));
    return g;
}

// Hand-written unit arithmetic for the lattice parameters.
struct Hand {
    double eb, omega, eta, nbar;
};

inline Hand hand_params(double chi_pn, double w_force, double cutoff, int L, double T)
{
    const double h = 6.62607e-34, c = 2.99792458e10, kb = 0.6950348;
    const double chi = chi_pn * 1e-12;
    Hand r;
    r.eb = chi * chi / w_force / (h * c);
    r.omega = cutoff * std::sin(3.14159265358979323846 / (2.0 * L));
    r.eta = std::sqrt(r.eb * r.omega / L * (1 - std::pow(r.omega / cutoff, 2)));
    r.nbar = T > 0 ? 1.0 / (std::exp(r.omega / (kb * T)) - 1.0) : 0.0;
    return r;
}

}  // namespace oracle
