#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "error.hpp"

namespace qst {

ExcitonStage exciton_stage(const ModelParams& p, QcCoupling basis)
{
    ExcitonStage s;
    s.d = derive(p);
    s.exc = exciton_eigensystem(p, s.d, basis);
    s.m = m_operator(s.exc, s.d);
    return s;
}

PtStage pt_stage(const ExcitonStage& s)
{
    PtStage r;
    r.ops = build_pt_operators(s.exc, s.m, s.d.omega);
    r.dr = dress(s.exc, r.ops.a, r.ops.b + r.ops.b.transpose());
    return r;
}

int resolve_nmax(const DerivedParams& d, const EngineOptions& o)
{
    if (o.n_max >= 0) return o.n_max;
    return choose_nmax(d, o.tail_tol, o.n_max_cap).n_max;
}

std::unique_ptr<ExactSolver> exact_solver(const ModelParams& p, const std::vector<double>& temperatures,
                                          const EngineOptions& o)
{
    if (temperatures.empty()) fail(ErrorCode::argument, "exact_solver: no temperatures");
    double hot = temperatures.front();
    for (double T : temperatures) hot = std::max(hot, T);
    ModelParams q = p;
    q.temperature = hot;
    const DerivedParams d = derive(q);
    if (o.n_max >= 0 || !o.probe_nmax) return std::make_unique<ExactSolver>(p, o.basis, resolve_nmax(d, o));

    const auto coarse = uniform_times(o.t_max_phi, 501);
    std::map<int, std::unique_ptr<ExactSolver>> built;
    NmaxProbe probe = [&](int n) {
        auto s = std::make_unique<ExactSolver>(p, o.basis, n);
        double top = 0;
        for (const auto& v : s->propagate(hot, coarse, 1.0, o.threads).values) top = std::max(top, std::abs(v));
        built.erase(n - 20);  // keep only the two newest
        built[n] = std::move(s);
        return top;
    };
    FockTruncation t = choose_nmax(d, o.tail_tol, o.n_max_cap, probe);
    return std::move(built.at(t.n_max));
}

ExactSolver::ExactSolver(const ModelParams& p, QcCoupling basis, int n_max) : p_(p)
{
    st_ = exciton_stage(p, basis);
    dec_ = eigendecompose(st_.exc, st_.m, st_.d, n_max);
}

PropagatorSeries ExactSolver::propagate(double temperature, const std::vector<double>& times_phi, double tail_tol,
                                        int threads) const
{
    ModelParams p = p_;
    p.temperature = temperature;
    DerivedParams d = derive(p);
    FockTruncation trunc = make_truncation(d, dec_.n_max);
    ExactTerms terms = exact_terms(dec_, st_.exc, trunc, d);
    PropagatorSeries s;
    s.engine = Engine::exact;
    s.n_max = dec_.n_max;
    s.times_phi = times_phi;
    s.values = spectral_sum(terms.freq, terms.weight, times_phi, d.hopping, threads);
    if (trunc.tail_mass > tail_tol)
        s.warnings.push_back("thermal tail mass " + format_number(trunc.tail_mass) + " above tolerance");
    return s;
}

PropagatorSeries propagate(const ModelParams& p, Engine e, const EngineOptions& o, const std::vector<double>& times)
{
    switch (e) {
        case Engine::exact:
            return exact_solver(p, {p.temperature}, o)->propagate(p.temperature, times, o.tail_tol, o.threads);
        case Engine::pt_full: {
            ExcitonStage st = exciton_stage(p, o.basis);
            PtStage pt = pt_stage(st);
            return pt_propagator(st.exc, pt.dr, pt.ops, st.d, times);
        }
        case Engine::pt_diagonal: {
            ExcitonStage st = exciton_stage(p, o.basis);
            PtStage pt = pt_stage(st);
            return diagonal_propagator(st.exc, pt.dr, st.d, times);
        }
        case Engine::threepath: {
            DerivedParams d = derive(p);
            return three_path_propagator(three_path_model(d, p.epsilon), d, times, o.simplified_modulus);
        }
    }
    fail(ErrorCode::internal, "unknown engine");
}

PropagatorSeries propagate(const ModelParams& p, Engine e, const EngineOptions& o)
{
    return propagate(p, e, o, uniform_times(o.t_max_phi, o.time_points));
}

namespace {

// vertex of the parabola through (i-1, i, i+1) on |G|^2
Extremum refine(const std::vector<double>& t, const std::vector<double>& g, size_t i, double* shift = nullptr)
{
    if (i == 0 || i + 1 >= g.size()) {
        if (shift) *shift = 0;
        return {t[i], g[i]};
    }
    const double ym = g[i - 1] * g[i - 1], y0 = g[i] * g[i], yp = g[i + 1] * g[i + 1];
    const double den = ym - 2 * y0 + yp;
    if (!(den < 0)) {
        if (shift) *shift = 0;
        return {t[i], g[i]};
    }
    double delta = 0.5 * (ym - yp) / den;
    delta = std::clamp(delta, -0.5, 0.5);
    const double h = delta >= 0 ? t[i + 1] - t[i] : t[i] - t[i - 1];
    const double y = y0 - 0.25 * (ym - yp) * delta;
    if (shift) *shift = std::abs(delta * h);
    return {t[i] + delta * h, std::sqrt(std::max(y, y0))};
}

}  // namespace

MaxReport find_max(const PropagatorSeries& s, double double_max_gap)
{
    const size_t n = s.values.size();
    if (n < 3 || s.times_phi.size() != n) fail(ErrorCode::argument, "find_max: need at least 3 points");
    std::vector<double> g(n);
    for (size_t i = 0; i < n; ++i) g[i] = std::abs(s.values[i]);

    MaxReport r;
    r.window = s.times_phi.back();
    size_t imax = 0;
    for (size_t i = 1; i < n; ++i)
        if (g[i] > g[imax]) imax = i;
    Extremum top = refine(s.times_phi, g, imax, &r.refinement);
    r.gm = top.value;
    r.tm = top.t;

    for (size_t i = 1; i + 1 < n; ++i) {
        if (!(g[i] > g[i - 1] && g[i] >= g[i + 1] && g[i] > 0.5)) continue;
        double left = g[i], right = g[i];
        for (size_t j = i; j-- > 0;) {
            if (g[j] > g[i]) break;
            left = std::min(left, g[j]);
        }
        for (size_t j = i + 1; j < n; ++j) {
            if (g[j] > g[i]) break;
            right = std::min(right, g[j]);
        }
        if (g[i] - std::max(left, right) < 0.1) continue;
        r.local_maxima.push_back(refine(s.times_phi, g, i));
    }
    for (const auto& m : r.local_maxima) {
        if (std::abs(m.t - r.tm) < 1e-9 * std::max(1.0, r.window)) continue;
        if (r.gm - m.value < double_max_gap) r.double_max = true;
    }
    return r;
}

namespace {

void annotate(SweepRow& row, const DerivedParams& d)
{
    if (row.epsilon <= 0) return;
    ThreePathModel m = three_path_model(d, row.epsilon);
    row.alpha = m.alpha;
    if (m.t_f > 0) row.tm_over_tf = row.report.tm / m.t_f;
}

std::vector<SweepRow> run_point(const ModelParams& base, double eps, const std::vector<double>& temps, Engine e,
                                const EngineOptions& o, const std::vector<double>& times)
{
    std::vector<SweepRow> out;
    ModelParams p = base;
    p.epsilon = eps;
    std::unique_ptr<ExactSolver> solver;
    std::string solver_error;
    if (e == Engine::exact) {
        try {
            solver = exact_solver(p, temps, o);
        } catch (const Error& err) {
            solver_error = err.what();
        }
    }
    for (double T : temps) {
        SweepRow row;
        row.epsilon = eps;
        row.temperature = T;
        row.chi = p.chi_pn;
        row.lattice_length = p.lattice_length;
        try {
            ModelParams q = p;
            q.temperature = T;
            if (e == Engine::exact) {
                if (!solver) fail(ErrorCode::numerical, solver_error);
                row.n_max = solver->n_max();
                row.report = find_max(solver->propagate(T, times, o.tail_tol, o.threads), o.double_max_gap);
            } else {
                row.report = find_max(propagate(q, e, o, times), o.double_max_gap);
            }
            annotate(row, derive(q));
        } catch (const Error& err) {
            row.error = err.what();
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace

SweepTable sweep_epsilon(const ModelParams& p, const std::vector<double>& eps_grid,
                         const std::vector<double>& temperatures, Engine e, const EngineOptions& o)
{
    SweepTable t;
    t.axis = "epsilon";
    t.engine = e;
    t.window = o.t_max_phi;
    auto times = uniform_times(o.t_max_phi, o.time_points);
    std::vector<double> grid = eps_grid;
    std::sort(grid.begin(), grid.end());
    for (double eps : grid) {
        auto rows = run_point(p, eps, temperatures, e, o, times);
        t.rows.insert(t.rows.end(), rows.begin(), rows.end());
    }
    return t;
}

SweepTable sweep_temperature(const ModelParams& p, const std::vector<double>& eps_list,
                             const std::vector<double>& t_grid, Engine e, const EngineOptions& o)
{
    SweepTable t;
    t.axis = "temperature";
    t.engine = e;
    t.window = o.t_max_phi;
    auto times = uniform_times(o.t_max_phi, o.time_points);
    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());
    for (double eps : eps_list) {
        auto rows = run_point(p, eps, grid, e, o, times);
        t.rows.insert(t.rows.end(), rows.begin(), rows.end());
    }
    return t;
}

double fit_t0(const std::vector<double>& t, const std::vector<double>& gm, double lo, double hi)
{
    double num = 0, den = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < lo || t[i] > hi) continue;
        const double t2 = t[i] * t[i];
        num += (1.0 - gm[i]) * t2;
        den += t2 * t2;
    }
    if (!(den > 0) || !(num > 0)) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(num / den);
}

double knee_temperature(const std::vector<double>& t, const std::vector<double>& tm, double rel_tol)
{
    if (t.empty()) return std::nan("");
    double lo = *std::min_element(tm.begin(), tm.end());
    for (size_t i = 0; i < t.size(); ++i)
        if (tm[i] <= lo * (1.0 + rel_tol)) return t[i];
    return t.back();
}

double knee_curvature(const std::vector<double>& t, const std::vector<double>& gm)
{
    if (t.size() < 3) return std::nan("");
    double best = -1, at = std::nan("");
    for (size_t i = 1; i + 1 < t.size(); ++i) {
        const double x0 = std::log(t[i - 1]), x1 = std::log(t[i]), x2 = std::log(t[i + 1]);
        const double d2 = 2.0 * ((gm[i + 1] - gm[i]) / (x2 - x1) - (gm[i] - gm[i - 1]) / (x1 - x0)) / (x2 - x0);
        if (std::abs(d2) > best) {
            best = std::abs(d2);
            at = t[i];
        }
    }
    return at;
}

std::vector<SpectrumPair> spectrum_compare(const Vec& exact, const std::vector<PtLevel>& pt)
{
    std::vector<SpectrumPair> out;
    const int n = static_cast<int>(exact.size());
    if (pt.empty()) return out;
    for (int i = 0; i < n; ++i) {
        const double e = exact(i);
        auto it = std::lower_bound(pt.begin(), pt.end(), e,
                                   [](const PtLevel& l, double v) { return l.energy < v; });
        const PtLevel* best = nullptr;
        if (it != pt.end()) best = &*it;
        if (it != pt.begin()) {
            const PtLevel* prev = &*(it - 1);
            if (!best || std::abs(prev->energy - e) <= std::abs(best->energy - e)) best = prev;
        }
        double spacing = std::numeric_limits<double>::infinity();
        if (i > 0) spacing = std::min(spacing, e - exact(i - 1));
        if (i + 1 < n) spacing = std::min(spacing, exact(i + 1) - e);
        const double de = e - best->energy;
        out.push_back({e, best->energy, best->nu, best->n, spacing, std::abs(de) > 0.5 * spacing});
    }
    return out;
}

Table crossing_scan(const ModelParams& p, const std::vector<double>& chi_grid, const EngineOptions& o,
                    double window_omega)
{
    Table t;
    t.name = "crossing";
    t.columns = {"chi_pn", "eta_cm", "source", "energy_cm", "energy_phi", "nu", "n"};
    for (double chi : chi_grid) {
        ModelParams q = p;
        q.chi_pn = chi;
        ExcitonStage st = exciton_stage(q, o.basis);
        const double win = window_omega * st.d.omega;
        const int n_max = o.n_max >= 0 ? o.n_max : static_cast<int>(std::ceil(window_omega)) + 6;
        SpectralDecomposition dec = eigendecompose(st.exc, st.m, st.d, n_max);
        for (int i = 0; i < dec.dim(); ++i) {
            const double e = dec.energies(i);
            if (std::abs(e) <= win)
                t.add_row({chi, st.d.eta, std::string("exact"), e, e / q.hopping, -1LL, -1LL});
        }
        PtStage pt = pt_stage(st);
        for (const auto& l : pt_spectrum(pt.dr, st.d.omega, n_max))
            if (std::abs(l.energy) <= win)
                t.add_row({chi, st.d.eta, std::string("pt"), l.energy, l.energy / q.hopping, (long long)l.nu,
                           (long long)l.n});
    }
    t.meta.push_back({"window", "|E - omega0| <= " + format_number(window_omega) + " Omega"});
    return t;
}

Table shift_scan(const ModelParams& p, const std::vector<double>& eps_grid, const EngineOptions& o)
{
    Table t;
    t.name = "shifts";
    t.columns = {"epsilon", "mu", "tag", "k", "omega_mu", "d_omega_mu", "d_omega_over_eb", "hybrid_shift",
                 "omega_hat", "d_Omega_nu"};
    for (double eps : eps_grid) {
        ModelParams q = p;
        q.epsilon = eps;
        ExcitonStage st = exciton_stage(q, o.basis);
        PtStage pt = pt_stage(st);
        for (int mu = 0; mu < st.exc.size(); ++mu) {
            const auto& lab = st.exc.labels[mu];
            const double w = st.exc.energies(mu), dw = pt.dr.d_omega_mu(mu);
            const double eb = st.d.binding > 0 ? dw / st.d.binding : 0.0;
            t.add_row({eps, (long long)mu, std::string(tag_name(lab.tag)), (long long)lab.k, w, dw, eb,
                       pt.dr.energies(mu) - w - dw, pt.dr.energies(mu), pt.dr.d_omega(mu)});
        }
    }
    return t;
}

cplx qubit_coherence(cplx g, cplx sigma0)
{
    if (std::abs(sigma0) > 0.5 + 1e-15) fail(ErrorCode::argument, "qubit coherence must satisfy |sigma| <= 1/2");
    return g * sigma0;
}

Table sweep_to_table(const SweepTable& s)
{
    Table t;
    t.name = "sweep_" + s.axis;
    t.columns = {"epsilon", "temperature_k", "chi_pn", "lattice_length", "G_M", "T_M_phi", "local_maxima",
                 "double_max", "alpha", "TM_over_Tf", "window_phi", "n_max", "error"};
    for (const auto& r : s.rows) {
        std::string maxima;
        for (const auto& m : r.report.local_maxima)
            maxima += (maxima.empty() ? "" : ";") + format_number(m.t) + ":" + format_number(m.value);
        t.add_row({r.epsilon, r.temperature, r.chi, (long long)r.lattice_length, r.report.gm, r.report.tm, maxima,
                   (long long)r.report.double_max, r.alpha, r.tm_over_tf, s.window, (long long)r.n_max, r.error});
    }
    t.meta.push_back({"engine", engine_name(s.engine)});
    t.meta.push_back({"search_window_phi", "[0, " + format_number(s.window) + "]"});
    return t;
}

}  // namespace qst
