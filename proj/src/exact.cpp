#include "exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "error.hpp"

namespace qst {

const char* engine_name(Engine e)
{
    switch (e) {
        case Engine::exact: return "exact";
        case Engine::pt_full: return "pt_full";
        case Engine::pt_diagonal: return "pt_diagonal";
        case Engine::threepath: return "threepath";
    }
    return "?";
}

Engine parse_engine(const std::string& s)
{
    if (s == "exact") return Engine::exact;
    if (s == "pt_full" || s == "pt") return Engine::pt_full;
    if (s == "pt_diagonal") return Engine::pt_diagonal;
    if (s == "threepath") return Engine::threepath;
    fail(ErrorCode::config, "unknown engine '" + s + "'");
}

std::vector<double> uniform_times(double t_max, int points)
{
    if (points < 2 || !(t_max > 0)) fail(ErrorCode::argument, "time grid needs >= 2 points and t_max > 0");
    std::vector<double> t(points);
    for (int i = 0; i < points; ++i) t[i] = t_max * i / (points - 1);
    return t;
}

Vec SpectralDecomposition::eigenvector(int i) const
{
    Vec v = Vec::Zero((n_max + 1) * n_exc);
    auto [b, c] = location.at(i);
    const auto& blk = blocks[b];
    for (size_t r = 0; r < blk.index.size(); ++r) v(blk.index[r]) = blk.vectors(r, c);
    return v;
}

namespace {

using Adjacency = std::vector<std::vector<int>>;

std::vector<std::vector<int>> components(const Adjacency& adj)
{
    const int n = static_cast<int>(adj.size());
    std::vector<int> seen(n, 0);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<int> comp{s}, stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    comp.push_back(v);
                    stack.push_back(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

template <class Entry>
SpectralDecomposition solve_blocks(const std::vector<std::vector<int>>& comps, Entry entry, int n_exc, int n_max,
                                   double h_norm)
{
    SpectralDecomposition dec;
    dec.n_exc = n_exc;
    dec.n_max = n_max;
    dec.h_norm = h_norm;
    struct Item { double e; int b, c; };
    std::vector<Item> items;
    for (const auto& comp : comps) {
        const int m = static_cast<int>(comp.size());
        Mat hb(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) hb(i, j) = entry(comp[i], comp[j]);
        SymEig es = sym_eig(hb);
        fix_signs(es.vectors, 1e-12);
        Mat r = hb * es.vectors - es.vectors * es.values.asDiagonal();
        for (int j = 0; j < m; ++j) dec.worst_residual = std::max(dec.worst_residual, r.col(j).norm());
        const int b = static_cast<int>(dec.blocks.size());
        for (int j = 0; j < m; ++j) items.push_back({es.values(j), b, j});
        dec.blocks.push_back({comp, es.values, std::move(es.vectors)});
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.e != b.e) return a.e < b.e;
        return a.b < b.b;
    });
    dec.energies.resize(items.size());
    for (size_t i = 0; i < items.size(); ++i) {
        dec.energies(i) = items[i].e;
        dec.location.push_back({items[i].b, items[i].c});
    }
    if (dec.worst_residual > 1e-10 * std::max(1.0, h_norm))
        fail(ErrorCode::numerical, "eigendecompose: worst residual " + std::to_string(dec.worst_residual));
    return dec;
}

}  // namespace

SpectralDecomposition eigendecompose(const CoupledHamiltonian& h)
{
    const int n = h.dim();
    if ((h.h - h.h.transpose()).cwiseAbs().maxCoeff() != 0.0)
        fail(ErrorCode::argument, "eigendecompose: matrix not symmetric");
    Adjacency adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && h.h(i, j) != 0.0) adj[i].push_back(j);
    auto comps = components(adj);
    return solve_blocks(comps, [&](int i, int j) { return h.h(i, j); }, h.n_exc, h.n_max, max_abs(h.h));
}

SpectralDecomposition eigendecompose(const ExcitonEigensystem& exc, const Mat& m, const DerivedParams& d, int n_max)
{
    const int ne = exc.size(), nb = n_max + 1, n = ne * nb;
    Adjacency adj(n);
    for (int a = 0; a < ne; ++a)
        for (int b = 0; b < ne; ++b) {
            if (m(a, b) == 0.0) continue;
            for (int k = 0; k + 1 < nb; ++k) {
                adj[a * nb + k + 1].push_back(b * nb + k);
                adj[b * nb + k].push_back(a * nb + k + 1);
            }
        }
    auto comps = components(adj);
    auto entry = [&](int i, int j) {
        const int a = i / nb, k = i % nb, b = j / nb, l = j % nb;
        if (i == j) return exc.energies(a) + k * d.omega;
        if (k == l + 1) return m(a, b) * std::sqrt(double(k));
        if (l == k + 1) return m(a, b) * std::sqrt(double(l));
        return 0.0;
    };
    double h_norm = std::max(max_abs(exc.energies) + n_max * d.omega, max_abs(m) * std::sqrt(double(n_max)));
    return solve_blocks(comps, entry, ne, n_max, h_norm);
}

ExactTerms exact_terms(const SpectralDecomposition& dec, const ExcitonEigensystem& exc, const FockTruncation& trunc,
                       const DerivedParams& d, double drop)
{
    const int nb = dec.n_max + 1;
    if (trunc.n_max != dec.n_max) fail(ErrorCode::argument, "exact_terms: truncation mismatch");
    const int last = exc.size() > 0 ? static_cast<int>(exc.vectors.rows()) - 1 : 0;
    ExactTerms t;
    for (const auto& blk : dec.blocks) {
        const int cols = static_cast<int>(blk.values.size());
        Mat a0 = Mat::Zero(nb, cols), aL = Mat::Zero(nb, cols);
        for (size_t r = 0; r < blk.index.size(); ++r) {
            const int mu = blk.index[r] / nb, n = blk.index[r] % nb;
            const double v0 = exc.vectors(0, mu), vL = exc.vectors(last, mu);
            if (v0 == 0.0 && vL == 0.0) continue;
            a0.row(n) += v0 * blk.vectors.row(r);
            aL.row(n) += vL * blk.vectors.row(r);
        }
        for (int j = 0; j < cols; ++j)
            for (int n = 0; n < nb; ++n) {
                double c = aL(n, j) * a0(n, j);
                if (std::abs(c) < drop) continue;
                t.freq.push_back(blk.values(j) - n * d.omega);
                t.weight.push_back(trunc.weights(n) * c);
            }
    }
    return t;
}

namespace {

bool is_uniform(const std::vector<double>& t)
{
    if (t.size() < 3) return false;
    const double h = t[1] - t[0];
    if (!(h > 0)) return false;
    for (size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[0]) - h * i) > 1e-9 * std::max(1.0, std::abs(t.back()))) return false;
    return true;
}

constexpr int chunk = 256;

}  // namespace

std::vector<cplx> spectral_sum(const std::vector<double>& freq, const std::vector<double>& weight,
                               const std::vector<double>& times_phi, double hopping, int threads)
{
    const size_t nt = times_phi.size(), nk = freq.size();
    std::vector<cplx> out(nt, cplx(0, 0));
    if (nt == 0) return out;
    for (size_t i = 1; i < nt; ++i)
        if (times_phi[i] < times_phi[i - 1]) fail(ErrorCode::argument, "time grid must be ascending");
    if (times_phi[0] < 0) fail(ErrorCode::argument, "times must be nonnegative");

    const bool uniform = is_uniform(times_phi);
    const double dt = uniform ? (times_phi[1] - times_phi[0]) / hopping : 0.0;
    const size_t nchunks = (nt + chunk - 1) / chunk;

    auto work = [&](size_t c) {
        const size_t lo = c * chunk, hi = std::min(nt, lo + chunk);
        if (!uniform) {
            for (size_t i = lo; i < hi; ++i) {
                const double t = times_phi[i] / hopping;
                double re = 0, im = 0;
                for (size_t k = 0; k < nk; ++k) {
                    re += weight[k] * std::cos(freq[k] * t);
                    im -= weight[k] * std::sin(freq[k] * t);
                }
                out[i] = cplx(re, im);
            }
            return;
        }
        // z_k = w_k exp(-i f_k t), advanced by r_k = exp(-i f_k dt)
        std::vector<double> zr(nk), zi(nk), rr(nk), ri(nk);
        const double t0 = times_phi[0] / hopping + dt * lo;
        for (size_t k = 0; k < nk; ++k) {
            zr[k] = weight[k] * std::cos(freq[k] * t0);
            zi[k] = -weight[k] * std::sin(freq[k] * t0);
            rr[k] = std::cos(freq[k] * dt);
            ri[k] = -std::sin(freq[k] * dt);
        }
        for (size_t i = lo; i < hi; ++i) {
            double re = 0, im = 0;
            for (size_t k = 0; k < nk; ++k) {
                re += zr[k];
                im += zi[k];
                const double a = zr[k] * rr[k] - zi[k] * ri[k];
                zi[k] = zr[k] * ri[k] + zi[k] * rr[k];
                zr[k] = a;
            }
            out[i] = cplx(re, im);
        }
    };

    unsigned nthreads = threads > 0 ? unsigned(threads) : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(nchunks));
    if (nthreads <= 1) {
        for (size_t c = 0; c < nchunks; ++c) work(c);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nthreads; ++w)
        pool.emplace_back([&, w] {
            for (size_t c = w; c < nchunks; c += nthreads) work(c);
        });
    for (auto& th : pool) th.join();
    return out;
}

PropagatorSeries exact_propagator(const SpectralDecomposition& dec, const ExcitonEigensystem& exc,
                                  const FockTruncation& trunc, const DerivedParams& d,
                                  const std::vector<double>& times_phi, double tail_tol)
{
    ExactTerms terms = exact_terms(dec, exc, trunc, d);
    PropagatorSeries s;
    s.engine = Engine::exact;
    s.times_phi = times_phi;
    s.values = spectral_sum(terms.freq, terms.weight, times_phi, d.hopping);
    if (trunc.tail_mass > tail_tol)
        s.warnings.push_back("thermal tail mass " + std::to_string(trunc.tail_mass) + " above tolerance");
    return s;
}

PropagatorSeries bare_propagator(const ExcitonEigensystem& exc, const DerivedParams& d,
                                 const std::vector<double>& times_phi)
{
    const int last = static_cast<int>(exc.vectors.rows()) - 1;
    std::vector<double> f, w;
    for (int mu = 0; mu < exc.size(); ++mu) {
        f.push_back(exc.energies(mu));
        w.push_back(exc.vectors(last, mu) * exc.vectors(0, mu));
    }
    PropagatorSeries s;
    s.engine = Engine::exact;
    s.times_phi = times_phi;
    s.values = spectral_sum(f, w, times_phi, d.hopping);
    return s;
}

}  // namespace qst
