#include "exciton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace qst {

const char* tag_name(StateTag t)
{
    switch (t) {
        case StateTag::stationary: return "stationary";
        case StateTag::plus: return "plus";
        case StateTag::o: return "o";
        case StateTag::minus: return "minus";
    }
    return "?";
}

MuLabel mu_label(int mu, int L)
{
    const int h = L / 2;
    if (mu <= h - 2) return {mu, StateTag::stationary, mu + 1};
    if (mu == h - 1) return {mu, StateTag::plus, h};
    if (mu == h) return {mu, StateTag::o, h};
    if (mu == h + 1) return {mu, StateTag::minus, h};
    return {mu, StateTag::stationary, mu - 1};
}

int ExcitonEigensystem::index(StateTag t) const
{
    for (const auto& l : labels)
        if (l.tag == t) return l.mu;
    fail(ErrorCode::internal, std::string("no state tagged ") + tag_name(t));
}

StationaryWaves stationary_waves(int N, double omega0, double hopping)
{
    if (N < 3 || N % 2 == 0) fail(ErrorCode::argument, "stationary_waves: N must be odd and >= 3");
    const int L = N + 1;
    StationaryWaves s;
    s.wavevector.resize(N);
    s.energy.resize(N);
    s.coeff.resize(N, N);
    const double norm = std::sqrt(2.0 / L);
    for (int k = 1; k <= N; ++k) {
        double K = k * phys::pi / L;
        s.wavevector(k - 1) = K;
        s.energy(k - 1) = omega0 + (2 * k == L ? 0.0 : 2.0 * hopping * std::cos(K));
        for (int x = 1; x <= N; ++x) s.coeff(x - 1, k - 1) = norm * std::sin(K * x);
    }
    return s;
}

Mat embedded_waves(int L)
{
    const int N = L - 1;
    auto s = stationary_waves(N, 0.0, 1.0);
    Mat w = Mat::Zero(N + 2, N);
    w.block(1, 0, N, N) = s.coeff;
    return w;
}

Mat build_h_a(const ModelParams& p, const DerivedParams& d, QcCoupling c)
{
    const int N = d.N, dim = N + 2;
    Mat h = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) h(i, i) = p.omega0;
    for (int x = 1; x < N; ++x) h(x, x + 1) = h(x + 1, x) = p.hopping;
    if (c == QcCoupling::full) {
        h(0, 1) = h(1, 0) = d.phi_s;
        h(N, N + 1) = h(N + 1, N) = d.phi_s;
    } else {
        // bonds projected on the band-centre wave: g |0><phi| + g' |L><phi| + h.c.
        Vec phi = embedded_waves(d.L).col(d.L / 2 - 1);
        for (int x = 1; x <= N; ++x) {
            h(0, x) = h(x, 0) = d.phi_s * phi(1) * phi(x);
            h(N + 1, x) = h(x, N + 1) = d.phi_s * phi(N) * phi(x);
        }
    }
    return h;
}

Triplet analytic_triplet(const ModelParams& p, const DerivedParams& d)
{
    const int N = d.N, dim = N + 2;
    Vec phi = embedded_waves(d.L).col(d.L / 2 - 1);
    Vec e0 = Vec::Zero(dim), eL = Vec::Zero(dim);
    e0(0) = 1.0;
    eL(N + 1) = 1.0;
    const double dn = d.delta_n, r2 = std::sqrt(2.0);
    Triplet t;
    t.plus = 0.5 * e0 + phi / r2 + 0.5 * dn * eL;
    t.minus = 0.5 * e0 - phi / r2 + 0.5 * dn * eL;
    t.o = (e0 - dn * eL) / r2;
    t.w_plus = 2.0 * p.epsilon * p.hopping / std::sqrt(double(d.L));
    t.w_minus = -t.w_plus;
    t.w_o = 0.0;
    return t;
}

ExcitonEigensystem resonant_eigensystem(const ModelParams& p, const DerivedParams& d)
{
    const int L = d.L, dim = L + 1;
    Mat waves = embedded_waves(L);
    Triplet t = analytic_triplet(p, d);
    ExcitonEigensystem e;
    e.L = L;
    e.provenance = Provenance::analytic;
    e.energies.resize(dim);
    e.vectors.resize(dim, dim);
    for (int mu = 0; mu < dim; ++mu) {
        MuLabel lab = mu_label(mu, L);
        e.labels.push_back(lab);
        switch (lab.tag) {
            case StateTag::stationary:
                e.vectors.col(mu) = waves.col(lab.k - 1);
                e.energies(mu) = 2.0 * p.hopping * std::cos(lab.k * phys::pi / L);
                break;
            case StateTag::plus:
                e.vectors.col(mu) = t.plus;
                e.energies(mu) = t.w_plus;
                break;
            case StateTag::o:
                e.vectors.col(mu) = t.o;
                e.energies(mu) = t.w_o;
                break;
            case StateTag::minus:
                e.vectors.col(mu) = t.minus;
                e.energies(mu) = t.w_minus;
                break;
        }
    }
    return e;
}

namespace {

// Inside a degenerate cluster the solver's basis is arbitrary. Replace it by the
// projections of the best-matching references, orthonormalised symmetrically.
void align_cluster(Mat& v, int first, int count, const Mat& refs)
{
    Mat s = v.middleCols(first, count);
    Vec weight = (s.transpose() * refs).colwise().norm();
    std::vector<int> order(refs.cols());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight(a) > weight(b); });
    std::vector<int> chosen(order.begin(), order.begin() + count);
    std::sort(chosen.begin(), chosen.end());
    Mat x(s.rows(), count);
    for (int j = 0; j < count; ++j) x.col(j) = s * (s.transpose() * refs.col(chosen[j]));
    Eigen::SelfAdjointEigenSolver<Mat> es(x.transpose() * x);
    if (es.eigenvalues().minCoeff() < 1e-12)
        fail(ErrorCode::numerical, "diagonalize_h_a: degenerate cluster cannot be aligned with references");
    Mat inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                   es.eigenvectors().transpose();
    v.middleCols(first, count) = x * inv_sqrt;
}

}  // namespace

ExcitonEigensystem diagonalize_h_a(const Mat& h, const ModelParams& p, const DerivedParams& d, double offset)
{
    const int dim = static_cast<int>(h.rows());
    if (dim != d.N + 2) fail(ErrorCode::argument, "diagonalize_h_a: dimension mismatch");
    Mat hr = h - offset * Mat::Identity(dim, dim);
    SymEig es = sym_eig(hr);
    const double scale = std::max(1.0, max_abs(hr));

    ExcitonEigensystem ref = resonant_eigensystem(p, d);

    for (int i = 0; i < dim;) {
        int j = i + 1;
        while (j < dim && es.values(j) - es.values(j - 1) < 1e-9 * scale) ++j;
        if (j - i > 1) align_cluster(es.vectors, i, j - i, ref.vectors);
        i = j;
    }

    Mat ov = (ref.vectors.transpose() * es.vectors).cwiseAbs();
    struct Pair { double o; int mu, j; };
    std::vector<Pair> pairs;
    for (int mu = 0; mu < dim; ++mu)
        for (int j = 0; j < dim; ++j) pairs.push_back({ov(mu, j), mu, j});
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.o != b.o) return a.o > b.o;
        return a.j < b.j;  // ascending energy on exact ties
    });
    std::vector<int> of_mu(dim, -1), of_j(dim, -1);
    for (const auto& pr : pairs) {
        if (of_mu[pr.mu] >= 0 || of_j[pr.j] >= 0) continue;
        of_mu[pr.mu] = pr.j;
        of_j[pr.j] = pr.mu;
    }
    for (int mu = 0; mu < dim; ++mu) {
        int j = of_mu[mu];
        for (int k = 0; k < dim; ++k) {
            if (k == j) continue;
            if (std::abs(ov(mu, k) - ov(mu, j)) < 1e-6 && ov(mu, j) > 0.5)
                fail(ErrorCode::numerical, "diagonalize_h_a: ambiguous overlap for mu=" + std::to_string(mu));
        }
    }

    ExcitonEigensystem e;
    e.L = d.L;
    e.provenance = Provenance::numeric;
    e.labels = ref.labels;
    e.energies.resize(dim);
    e.vectors.resize(dim, dim);
    for (int mu = 0; mu < dim; ++mu) {
        e.energies(mu) = es.values(of_mu[mu]);
        e.vectors.col(mu) = es.vectors.col(of_mu[mu]);
    }
    fix_signs(e.vectors);

    double worst = 0;
    for (int mu = 0; mu < dim; ++mu)
        worst = std::max(worst, (hr * e.vectors.col(mu) - e.energies(mu) * e.vectors.col(mu)).norm());
    if (worst > 1e-10 * std::max(1.0, max_abs(h)))
        fail(ErrorCode::numerical, "diagonalize_h_a: residual " + std::to_string(worst));
    return e;
}

ExcitonEigensystem exciton_eigensystem(const ModelParams& p, const DerivedParams& d, QcCoupling c)
{
    ModelParams rel = p;
    rel.omega0 = 0.0;
    return diagonalize_h_a(build_h_a(rel, d, c), p, d, 0.0);
}

}  // namespace qst
