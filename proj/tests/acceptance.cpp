// One pass/fail line per acceptance criterion. Exit status is nonzero if any criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "error.hpp"
#include "harness.hpp"

using namespace qst;

namespace {

struct Line {
    bool pass = true;
    std::string detail;
    void need(bool ok, const std::string& what)
    {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += std::string(ok ? "" : "FAILED ") + what;
    }
};

std::string f(double v, int prec = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

int failures = 0;

void report(int id, const char* title, const std::function<void(Line&)>& body)
{
    Line l;
    try {
        body(l);
    } catch (const std::exception& e) {
        l.need(false, std::string("exception: ") + e.what());
    }
    if (!l.pass) ++failures;
    std::printf("[%s] criterion %d, %s: %s\n", l.pass ? "PASS" : "FAIL", id, title, l.detail.c_str());
    std::fflush(stdout);
}

// Sweep settings shared by the transmission rows: a 5000/Phi window so slow small-eps
// transfers are not clipped by the search window.
EngineOptions sweep_options()
{
    EngineOptions o;
    o.t_max_phi = 5000;
    o.time_points = 50001;
    return o;
}

struct Extreme {
    double eps, gm;
};

// Coarse grid, then a 1e-4 grid around the coarse extremum.
Extreme extreme_of(const ModelParams& p, double T, bool want_min, const EngineOptions& o)
{
    std::vector<double> coarse;
    for (int i = 5; i <= 50; ++i) coarse.push_back(i * 1e-3);
    auto pick = [&](const SweepTable& s) {
        Extreme best{std::nan(""), want_min ? 2.0 : -1.0};
        for (const auto& r : s.rows) {
            if (!r.error.empty()) continue;
            if (want_min ? r.report.gm < best.gm : r.report.gm > best.gm) best = {r.epsilon, r.report.gm};
        }
        return best;
    };
    Extreme c = pick(sweep_epsilon(p, coarse, {T}, Engine::exact, o));
    std::vector<double> fine;
    for (int i = -10; i <= 10; ++i) {
        double e = std::round((c.eps + i * 1e-4) * 1e5) / 1e5;
        if (e > 0) fine.push_back(e);
    }
    return pick(sweep_epsilon(p, fine, {T}, Engine::exact, o));
}

double gm_at(ModelParams p, double eps, const EngineOptions& o)
{
    p.epsilon = eps;
    return find_max(propagate(p, Engine::exact, o)).gm;
}

}  // namespace

int main()
{
    report(1, "parameter derivation", [](Line& l) {
        ModelParams p;
        DerivedParams d = derive(p);
        l.need(within(d.binding, 0.336, 0.002), "E_B " + f(d.binding) + " cm-1 (0.336 +- 0.002)");
        l.need(within(d.omega, 15.15, 0.02), "Omega " + f(d.omega) + " cm-1 (15.15 +- 0.02)");
        p.chi_pn = 20;
        double eta = derive(p).eta;
        l.need(within(eta, 1.41, 0.01), "eta(chi=20 pN) " + f(eta) + " cm-1 (1.41 +- 0.01)");
    });

    report(2, "perturbative spectrum accuracy", [](Line& l) {
        RunConfig c = default_config();
        c.model.epsilon = 0.01;
        c.options.n_max = 220;
        Table t = run_command(c, "spectrum").tables.at(0);
        const int ce = t.column("E_i_phi"), cd = t.column("dE_phi"), cs = t.column("spacing_phi");
        double band100 = 0, band200 = 0, ratio = 0;
        for (size_t i = 0; i < t.rows.size(); ++i) {
            const double e = t.number(i, ce), de = std::abs(t.number(i, cd)), s = t.number(i, cs);
            if (e >= 95 && e <= 105) band100 = std::max(band100, de);
            if (e >= 195 && e <= 205) band200 = std::max(band200, de);
            if (e < 200) ratio = std::max(ratio, de / s);
        }
        l.need(band100 >= 3e-4 && band100 <= 3e-3, "max|dE| near 100 Phi " + f(band100) + " Phi ([3e-4, 3e-3])");
        l.need(band200 >= 1.5e-3 && band200 <= 1.5e-2,
               "max|dE| near 200 Phi " + f(band200) + " Phi ([1.5e-3, 1.5e-2])");
        l.need(ratio < 1, "max dE/spacing below 200 Phi " + f(ratio) + " (< 1)");
    });

    report(3, "energy correction constants", [](Line& l) {
        ModelParams p;
        p.epsilon = 0;
        ExcitonStage st = exciton_stage(p, QcCoupling::resonant);
        PtStage pt = pt_stage(st);
        const double eb = st.d.binding;
        const double pm_p = pt.ops.a(st.exc.index(StateTag::plus), st.exc.index(StateTag::plus)) / eb;
        const double pm_m = pt.ops.a(st.exc.index(StateTag::minus), st.exc.index(StateTag::minus)) / eb;
        double interior = 0, edge = 0;
        int ni = 0, ne = 0;
        for (int mu = 0; mu < st.exc.size(); ++mu) {
            const auto& lab = st.exc.labels[mu];
            if (lab.tag != StateTag::stationary) continue;
            const double v = pt.ops.a(mu, mu) / eb;
            if (lab.k == 1 || lab.k == st.d.N) {
                edge += v;
                ++ne;
            } else {
                interior += v;
                ++ni;
            }
        }
        interior /= ni;
        edge /= ne;
        l.need(within(pm_p, -0.1085, 0.01 * 0.1085) && within(pm_m, -0.1085, 0.01 * 0.1085),
               "dH_{++}/E_B " + f(pm_p) + ", dH_{--}/E_B " + f(pm_m) + " (-0.1085 +- 1%)");
        l.need(within(interior, -0.2, 0.01), "interior mean " + f(interior) + " E_B (-0.2 +- 5%)");
        l.need(within(edge, -0.1, 0.005), "band-edge mean " + f(edge) + " E_B (-0.1 +- 5%)");
    });

    report(4, "propagator landmarks", [](Line& l) {
        ModelParams p;
        EngineOptions o;
        p.epsilon = 0.02;
        auto ex = propagate(p, Engine::exact, o);
        auto r = find_max(ex, o.double_max_gap);
        const Extremum* first = nullptr;
        for (const auto& m : r.local_maxima)
            if (std::abs(m.t - r.tm) > 1 && m.t < r.tm) first = &m;
        l.need(r.double_max, std::string("double maximum ") + (r.double_max ? "flagged" : "missing"));
        if (first)
            l.need(within(first->value, 0.83, 0.01) && within(first->t, 248.5, 2),
                   "local max " + f(first->value) + " at " + f(first->t, 5) + " (0.83 at 248.5)");
        else
            l.need(false, "no local maximum before the absolute one");
        l.need(within(r.gm, 0.88, 0.01) && within(r.tm, 495.5, 3),
               "absolute max " + f(r.gm) + " at " + f(r.tm, 5) + " (0.88 at 495.5)");
        double worst = 0;
        for (double eps : {0.013, 0.02}) {
            p.epsilon = eps;
            auto a = propagate(p, Engine::exact, o);
            auto b = propagate(p, Engine::pt_full, o);
            if (eps == 0.013) {
                auto rr = find_max(a);
                l.need(within(rr.gm, 0.97, 0.01) && within(rr.tm, 699.9, 4),
                       "eps=0.013 G_M " + f(rr.gm) + " at " + f(rr.tm, 5) + " (0.97 at 699.9)");
            }
            for (size_t i = 0; i < a.values.size(); ++i)
                if (a.times_phi[i] <= 1000) worst = std::max(worst, std::abs(std::abs(a.values[i]) - std::abs(b.values[i])));
        }
        l.need(worst <= 0.02, "max ||G_pt| - |G_exact|| on [0, 1000] " + f(worst) + " (<= 0.02)");
    });

    report(5, "transmission curve", [](Line& l) {
        ModelParams p;
        EngineOptions o = sweep_options();
        for (double T : {300.0, 100.0}) {
            p.temperature = T;
            Extreme lo = extreme_of(p, T, true, o), hi = extreme_of(p, T, false, o);
            const double gmin = T == 300 ? 0.84 : 0.86, gmax = T == 300 ? 0.97 : 0.99;
            const std::string tag = "T=" + f(T) + " K ";
            l.need(within(lo.eps, 0.021, 0.002) && within(lo.gm, gmin, 0.01),
                   tag + "min " + f(lo.gm) + " at eps " + f(lo.eps) + " (" + f(gmin) + " at 0.021)");
            l.need(within(hi.eps, 0.013, 0.002) && within(hi.gm, gmax, 0.01),
                   tag + "max " + f(hi.gm) + " at eps " + f(hi.eps) + " (" + f(gmax) + " at 0.013)");
        }
        p = ModelParams{};
        double g10 = gm_at(p, 0.01, o);
        l.need(within(g10, 0.93, 0.01), "L=10 " + f(g10) + " (0.93 +- 0.01)");
        ModelParams q = p;
        q.chi_pn = 20;
        double g20 = gm_at(q, 0.01, o);
        l.need(within(g20, 0.73, 0.02), "chi=20 pN " + f(g20) + " (0.73 +- 0.02)");
        q = p;
        q.lattice_length = 20;
        EngineOptions big = o;
        big.tail_tol = 1e-4;  // keeps the L=20 problem within desk memory
        double gl = gm_at(q, 0.01, big);
        l.need(within(gl, 0.89, 0.02), "L=20 " + f(gl) + " (0.89 +- 0.02)");
    });

    report(6, "optimality formulas", [](Line& l) {
        ModelParams p;
        double lo = 1, hi = 0;
        for (double T = 100; T <= 300; T += 10) {
            p.temperature = T;
            double e = epsilon_star(derive(p));
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        l.need(lo >= 0.0107 && hi <= 0.0115, "eps* over 100-300 K in [" + f(lo) + ", " + f(hi) + "] ([0.0107, 0.0115])");
        p.temperature = 300;
        DerivedParams d = derive(p);
        double t0 = gm_star(d, epsilon_star(d)).t0_kelvin;
        l.need(within(t0, 1600, 160), "T0 from optimum " + f(t0) + " K (1600 +- 10%)");

        RunConfig c = default_config();
        c.engines = {Engine::pt_full};
        c.options = sweep_options();
        c.epsilons = {0.01, 0.013, 0.02};
        auto r = run_command(c, "sweep-temp");
        const Table* fit = nullptr;
        for (const auto& t : r.tables)
            if (t.name == "sweep_temp_fit_pt_full") fit = &t;
        if (!fit) throw Error(ErrorCode::internal, "missing fit table");
        for (size_t i = 0; i < fit->rows.size(); ++i) {
            const double eps = fit->number(i, 0), t0f = fit->number(i, 1), knee = fit->number(i, 2);
            if (eps == 0.013) l.need(within(t0f, 1510, 151), "fitted T0 " + f(t0f) + " K (1510 +- 10%)");
            if (eps == 0.01) l.need(within(knee, 40, 12), "knee eps=0.01 " + f(knee) + " K (40 +- 30%)");
            if (eps == 0.02) l.need(within(knee, 130, 39), "knee eps=0.02 " + f(knee) + " K (130 +- 30%)");
        }
    });

    report(7, "property suites", [](Line& l) {
        ModelParams p;
        EngineOptions o;
        auto checks = validate(p, o);
        int bad = 0;
        for (const auto& c : checks)
            if (!c.passed) {
                ++bad;
                l.need(false, c.name + ": " + c.detail);
            }
        l.need(bad == 0, std::to_string(checks.size() - bad) + "/" + std::to_string(checks.size()) + " checks");
        RunConfig c = default_config();
        c.engines = {Engine::exact, Engine::pt_full, Engine::threepath};
        auto text = [&] {
            std::ostringstream os;
            for (const auto& t : run_command(c, "propagate").tables) write_csv(os, t, provenance_header(c, "propagate"));
            return os.str();
        };
        l.need(text() == text(), "byte-identical reruns");
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
