#include "fockspace.hpp"

#include <cmath>

#include "error.hpp"

namespace qst {

Mat m_operator(const ExcitonEigensystem& exc, const DerivedParams& d)
{
    const int N = d.N;
    Mat mk = Mat::Zero(N, N);
    for (int k = 0; k + 1 < N; ++k) mk(k, k + 1) = mk(k + 1, k) = d.eta;
    Mat waves = embedded_waves(d.L);
    Mat site = waves * mk * waves.transpose();
    Mat m = exc.vectors.transpose() * site * exc.vectors;
    m = (0.5 * (m + m.transpose())).eval();
    const double cut = 1e-12 * max_abs(m);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (std::abs(m.data()[i]) < cut) m.data()[i] = 0.0;
    return m;
}

FockTruncation make_truncation(const DerivedParams& d, int n_max)
{
    if (n_max < 0) fail(ErrorCode::argument, "n_max must be >= 0");
    FockTruncation t;
    t.n_max = n_max;
    t.weights = Vec::Zero(n_max + 1);
    if (std::isinf(d.beta_omega)) {
        t.weights(0) = 1.0;
        t.tail_mass = 0.0;
        return t;
    }
    const double b = d.beta_omega;
    const double norm = -std::expm1(-b);
    for (int n = 0; n <= n_max; ++n) t.weights(n) = std::exp(-b * n) * norm;
    t.tail_mass = std::exp(-b * (n_max + 1));
    return t;
}

FockTruncation choose_nmax(const DerivedParams& d, double tol, int cap, const std::optional<NmaxProbe>& probe)
{
    if (!(tol > 0 && tol < 1e-2)) fail(ErrorCode::argument, "tail tolerance must lie in (0, 1e-2)");
    int n;
    if (std::isinf(d.beta_omega)) {
        n = 10;
    } else {
        // smallest n with exp(-b (n+1)) < tol
        n = std::max(0, static_cast<int>(std::ceil(std::log(1.0 / tol) / d.beta_omega)) - 1);
        while (std::exp(-d.beta_omega * (n + 1)) >= tol) ++n;
        // virtual phonons still need room above the occupied levels
        n = std::max(n, 10);
    }
    if (n > cap) fail(ErrorCode::numerical, "n_max " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
    if (probe) {
        double prev = (*probe)(n);
        for (;;) {
            if (n + 10 > cap) fail(ErrorCode::numerical, "n_max probe did not converge below cap");
            double next = (*probe)(n + 10);
            if (std::abs(next - prev) < 1e-4) break;
            n += 10;
            prev = next;
        }
    }
    return make_truncation(d, n);
}

Mat h0_block(const ExcitonEigensystem& exc, const DerivedParams& d, int n_max)
{
    const int ne = exc.size(), nb = n_max + 1;
    Mat h = Mat::Zero(ne * nb, ne * nb);
    for (int mu = 0; mu < ne; ++mu)
        for (int n = 0; n < nb; ++n) h(mu * nb + n, mu * nb + n) = exc.energies(mu) + n * d.omega;
    return h;
}

Mat v_block(const Mat& m, int n_max)
{
    const int ne = static_cast<int>(m.rows()), nb = n_max + 1;
    Mat v = Mat::Zero(ne * nb, ne * nb);
    for (int a = 0; a < ne; ++a)
        for (int b = 0; b < ne; ++b) {
            if (m(a, b) == 0.0) continue;
            for (int n = 0; n + 1 < nb; ++n) {
                double s = m(a, b) * std::sqrt(double(n + 1));
                v(a * nb + n + 1, b * nb + n) = s;  // a^dagger
                v(a * nb + n, b * nb + n + 1) = s;  // a
            }
        }
    return v;
}

CoupledHamiltonian build_full_h(const ExcitonEigensystem& exc, const Mat& m, const DerivedParams& d,
                                const FockTruncation& trunc)
{
    if (m.rows() != exc.size()) fail(ErrorCode::argument, "build_full_h: M has wrong size");
    CoupledHamiltonian c;
    c.n_exc = exc.size();
    c.n_max = trunc.n_max;
    const int ne = c.n_exc, nb = trunc.n_max + 1;
    c.h = Mat::Zero(ne * nb, ne * nb);
    for (int a = 0; a < ne; ++a) {
        for (int n = 0; n < nb; ++n) c.h(a * nb + n, a * nb + n) = exc.energies(a) + n * d.omega;
        for (int b = 0; b < ne; ++b) {
            if (m(a, b) == 0.0) continue;
            for (int n = 0; n + 1 < nb; ++n) {
                double s = m(a, b) * std::sqrt(double(n + 1));
                c.h(a * nb + n + 1, b * nb + n) = s;
                c.h(a * nb + n, b * nb + n + 1) = s;
            }
        }
    }
    return c;
}

}  // namespace qst
