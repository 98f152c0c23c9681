#include "pt.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace qst {

namespace {

void check_denominator(double den, int a, int b, const char* what)
{
    if (std::abs(den) < 1e-6)
        fail(ErrorCode::numerical, std::string("PT breakdown: small ") + what + " denominator at (mu, mu') = (" +
                                       std::to_string(a) + ", " + std::to_string(b) + ")");
}

}  // namespace

PTOperators build_pt_operators(const ExcitonEigensystem& exc, const Mat& m, double omega)
{
    const int n = exc.size();
    const Vec& w = exc.energies;
    PTOperators op;
    op.z = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (m(a, b) == 0.0) continue;
            double den = w(a) - w(b) + omega;
            check_denominator(den, a, b, "one-phonon");
            op.z(a, b) = m(a, b) / den;
        }
    op.a = -0.5 * (op.z.transpose() * m + m * op.z);
    op.b = 0.5 * (op.z * m - m * op.z);
    op.e = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (op.b(a, b) == 0.0) continue;
            double den = w(a) - w(b) + 2.0 * omega;
            check_denominator(den, a, b, "two-phonon");
            op.e(a, b) = op.b(a, b) / den;
        }
    return op;
}

DeltaMatrices delta_matrices(const ExcitonEigensystem& exc, const Mat& m, double omega)
{
    const int n = exc.size();
    const Vec& w = exc.energies;
    DeltaMatrices r;
    r.dh = Mat::Zero(n, n);
    r.domega = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double s_minus = 0, s_plus = 0;
            for (int mu = 0; mu < n; ++mu) {
                double p1 = m(b, mu) * m(mu, a), p2 = m(a, mu) * m(mu, b);
                if (p1 != 0.0) {
                    check_denominator(w(a) - w(mu) - omega, a, mu, "one-phonon");
                    check_denominator(w(a) - w(mu) + omega, a, mu, "one-phonon");
                    s_minus += p1 / (w(a) - w(mu) - omega);
                    s_plus += p1 / (w(a) - w(mu) + omega);
                }
                if (p2 != 0.0) {
                    check_denominator(w(b) - w(mu) - omega, b, mu, "one-phonon");
                    check_denominator(w(b) - w(mu) + omega, b, mu, "one-phonon");
                    s_minus += p2 / (w(b) - w(mu) - omega);
                    s_plus += p2 / (w(b) - w(mu) + omega);
                }
            }
            r.dh(a, b) = 0.5 * s_minus;
            r.domega(a, b) = 0.5 * s_minus + 0.5 * s_plus;
        }
    return r;
}

int DressedSystem::index(StateTag t) const
{
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i].tag == t) return static_cast<int>(i);
    fail(ErrorCode::internal, std::string("no dressed state tagged ") + tag_name(t));
}

DressedSystem dress(const ExcitonEigensystem& exc, const Mat& dh, const Mat& domega)
{
    const int n = exc.size();
    Mat h = dh;
    for (int i = 0; i < n; ++i) h(i, i) += exc.energies(i);
    h = (0.5 * (h + h.transpose())).eval();

    // Decoupled states (the o state in particular) are solved on their own so that
    // an accidental degeneracy cannot mix them into the hybrid pair.
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v)
                if (comp[v] < 0 && v != u && h(u, v) != 0.0) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        ++ncomp;
    }
    Mat vecs = Mat::Zero(n, n);
    Vec vals(n);
    int col = 0;
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (comp[i] == c) idx.push_back(i);
        Mat hb(idx.size(), idx.size());
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j) hb(i, j) = h(idx[i], idx[j]);
        SymEig es = sym_eig(hb);
        for (size_t j = 0; j < idx.size(); ++j, ++col) {
            vals(col) = es.values(j);
            for (size_t i = 0; i < idx.size(); ++i) vecs(idx[i], col) = es.vectors(i, j);
        }
    }

    // label by largest overlap with the bare states
    const int ip = exc.index(StateTag::plus), im = exc.index(StateTag::minus);
    Mat ov = vecs.cwiseAbs();
    struct Pair { double o; int mu, j; };
    std::vector<Pair> pairs;
    for (int mu = 0; mu < n; ++mu)
        for (int j = 0; j < n; ++j) pairs.push_back({ov(mu, j), mu, j});
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.o > b.o; });
    std::vector<int> of_mu(n, -1), of_j(n, -1);
    for (const auto& p : pairs) {
        if (of_mu[p.mu] >= 0 || of_j[p.j] >= 0) continue;
        of_mu[p.mu] = p.j;
        of_j[p.j] = p.mu;
    }
    for (int mu = 0; mu < n; ++mu) {
        if (mu == ip || mu == im) continue;
        int j = of_mu[mu];
        for (int k = 0; k < n; ++k)
            if (k != j && ov(mu, j) > 0.5 && std::abs(ov(mu, k) - ov(mu, j)) < 1e-6)
                fail(ErrorCode::numerical, "dress: ambiguous label for mu=" + std::to_string(mu));
    }
    // the hybrid pair is ordered by energy: plus above minus
    if (vals(of_mu[ip]) < vals(of_mu[im])) std::swap(of_mu[ip], of_mu[im]);

    DressedSystem dr;
    dr.labels = exc.labels;
    dr.energies.resize(n);
    dr.chi.resize(n, n);
    for (int mu = 0; mu < n; ++mu) {
        dr.energies(mu) = vals(of_mu[mu]);
        dr.chi.col(mu) = vecs.col(of_mu[mu]);
    }
    fix_signs(dr.chi, 1e-12);
    dr.d_omega.resize(n);
    for (int nu = 0; nu < n; ++nu) dr.d_omega(nu) = dr.chi.col(nu).dot(domega * dr.chi.col(nu));
    dr.d_omega_mu = dh.diagonal();
    dr.v_pm = dh(ip, im);
    return dr;
}

std::vector<PtLevel> pt_spectrum(const DressedSystem& dr, double omega, int n_max)
{
    std::vector<PtLevel> out;
    for (int nu = 0; nu < dr.energies.size(); ++nu)
        for (int n = 0; n <= n_max; ++n) out.push_back({dr.energies(nu) + n * (omega + dr.d_omega(nu)), nu, n});
    std::stable_sort(out.begin(), out.end(), [](const PtLevel& a, const PtLevel& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.nu != b.nu) return a.nu < b.nu;
        return a.n < b.n;
    });
    return out;
}

cplx decoherence_factor(double beta_omega, double d_omega, double t)
{
    if (std::isinf(beta_omega) || d_omega == 0.0) return 1.0;
    const double q = std::exp(-beta_omega);
    const cplx den = 1.0 - q * std::exp(cplx(0.0, -d_omega * t));
    if (std::abs(den) < 1e-12) fail(ErrorCode::numerical, "decoherence factor denominator collapsed");
    return -std::expm1(-beta_omega) / den;
}

namespace {

// n^(nu)(t) = 1 / (exp(bW + i dW t) - 1)
cplx occupation(double beta_omega, double d_omega, double t)
{
    if (std::isinf(beta_omega)) return 0.0;
    const cplx den = std::exp(cplx(beta_omega, d_omega * t)) - 1.0;
    if (std::abs(den) < 1e-12) fail(ErrorCode::numerical, "occupation denominator collapsed");
    return 1.0 / den;
}

struct EndWeights {
    Vec l, o;  // <L|psi_mu>, <0|psi_mu>
};

EndWeights end_weights(const ExcitonEigensystem& exc)
{
    const int last = static_cast<int>(exc.vectors.rows()) - 1;
    return {exc.vectors.row(last).transpose(), exc.vectors.row(0).transpose()};
}

}  // namespace

PropagatorSeries pt_propagator(const ExcitonEigensystem& exc, const DressedSystem& dr, const PTOperators& ops,
                               const DerivedParams& d, const std::vector<double>& times_phi)
{
    const int n = exc.size();
    const auto [lv, ov] = end_weights(exc);
    const Mat& z = ops.z;
    const Mat zzt = z * z.transpose(), ztz = z.transpose() * z;

    struct Coef { double a, b, c, d1, d2, d3, d4; };
    std::vector<Coef> coef(n);
    for (int nu = 0; nu < n; ++nu) {
        const Vec ch = dr.chi.col(nu);
        const double lc = lv.dot(ch), co = ch.dot(ov);
        coef[nu].a = lc * co;
        coef[nu].b = lv.dot(z * ch) * ch.dot(z.transpose() * ov);
        coef[nu].c = lv.dot(z.transpose() * ch) * ch.dot(z * ov);
        coef[nu].d1 = lv.dot(zzt * ch) * co;
        coef[nu].d2 = lv.dot(ztz * ch) * co;
        coef[nu].d3 = lc * ch.dot(zzt * ov);
        coef[nu].d4 = lc * ch.dot(ztz * ov);
    }

    PropagatorSeries s;
    s.engine = Engine::pt_full;
    s.times_phi = times_phi;
    s.values.resize(times_phi.size());
    for (size_t i = 0; i < times_phi.size(); ++i) {
        const double t = times_phi[i] / d.hopping;
        cplx g = 0;
        for (int nu = 0; nu < n; ++nu) {
            const Coef& k = coef[nu];
            if (k.a == 0 && k.b == 0 && k.c == 0 && k.d1 == 0 && k.d2 == 0 && k.d3 == 0 && k.d4 == 0) continue;
            const double dw = dr.d_omega(nu);
            const cplx occ = occupation(d.beta_omega, dw, t);
            const cplx ph = std::exp(cplx(0.0, (d.omega + dw) * t));
            cplx br = k.a + k.b * occ * ph + k.c * (occ + 1.0) / ph - 0.5 * k.d1 * occ - 0.5 * k.d2 * (occ + 1.0) -
                      0.5 * k.d3 * occ - 0.5 * k.d4 * (occ + 1.0);
            g += decoherence_factor(d.beta_omega, dw, t) * std::exp(cplx(0.0, -dr.energies(nu) * t)) * br;
        }
        s.values[i] = g;
    }
    return s;
}

PropagatorSeries diagonal_propagator(const ExcitonEigensystem& exc, const DressedSystem& dr, const DerivedParams& d,
                                     const std::vector<double>& times_phi)
{
    const int n = exc.size();
    const auto [lv, ov] = end_weights(exc);
    std::vector<double> w(n);
    for (int nu = 0; nu < n; ++nu) w[nu] = lv.dot(dr.chi.col(nu)) * dr.chi.col(nu).dot(ov);
    PropagatorSeries s;
    s.engine = Engine::pt_diagonal;
    s.times_phi = times_phi;
    s.values.resize(times_phi.size());
    for (size_t i = 0; i < times_phi.size(); ++i) {
        const double t = times_phi[i] / d.hopping;
        cplx g = 0;
        for (int nu = 0; nu < n; ++nu) {
            if (w[nu] == 0.0) continue;
            g += decoherence_factor(d.beta_omega, dr.d_omega(nu), t) * std::exp(cplx(0.0, -dr.energies(nu) * t)) *
                 w[nu];
        }
        s.values[i] = g;
    }
    return s;
}

}  // namespace qst
