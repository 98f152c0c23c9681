#include "commands.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "error.hpp"

namespace qst {

std::vector<std::string> subcommands()
{
    return {"spectrum", "crossing", "shifts", "propagate", "sweep-eps", "sweep-temp", "analytic", "validate"};
}

std::vector<std::string> derived_echo(const ModelParams& p)
{
    DerivedParams d = derive(p);
    std::vector<std::string> out;
    auto add = [&](const std::string& k, double v) { out.push_back("derived " + k + " = " + format_number(v)); };
    add("E_B_cm", d.binding);
    add("Omega_c_cm", d.cutoff);
    add("Omega_cm", d.omega);
    add("eta_cm", d.eta);
    add("g_cm", d.g);
    add("Delta_N", d.delta_n);
    add("E_bar_cm", d.e_bar);
    add("Delta_omega_cm", d.delta_omega);
    add("beta_Omega", d.beta_omega);
    add("n_bar", d.n_bar);
    add("L_star", d.l_star);
    for (const auto& c : validity_report(d, p))
        out.push_back("check " + c.name + " = " + (c.passed ? "pass" : "warn") + " (" + format_number(c.value) +
                      " vs " + format_number(c.threshold) + ")");
    return out;
}

std::vector<std::string> provenance_header(const RunConfig& cfg, const std::string& subcommand)
{
    std::vector<std::string> h;
    h.push_back(std::string("qst ") + version_string + " " + subcommand);
    std::stringstream ss(format_config(cfg));
    std::string line;
    while (std::getline(ss, line)) h.push_back("config " + line);
    for (auto& l : derived_echo(cfg.model)) h.push_back(l);
    h.push_back("energies in cm^-1 relative to omega0 unless suffixed _phi (units of Phi); times in 1/Phi");
    return h;
}

namespace {

Table spectrum_table(const RunConfig& cfg)
{
    const auto& p = cfg.model;
    EngineOptions o = cfg.options;
    ExcitonStage st = exciton_stage(p, o.basis);
    const int n_max = o.n_max >= 0 ? o.n_max : 220;
    SpectralDecomposition dec = eigendecompose(st.exc, st.m, st.d, n_max);
    PtStage pt = pt_stage(st);
    auto levels = pt_spectrum(pt.dr, st.d.omega, n_max);
    auto pairs = spectrum_compare(dec.energies, levels);
    Table t;
    t.name = "spectrum";
    t.columns = {"E_i_cm", "E_i_phi", "dE_phi", "nu", "n", "spacing_phi", "flagged", "folded_phi"};
    const double phi = p.hopping;
    for (const auto& r : pairs) {
        double fold = std::fmod(r.e_exact - dec.energies(0), st.d.omega);
        t.add_row({r.e_exact, r.e_exact / phi, (r.e_exact - r.e_pt) / phi, (long long)r.nu, (long long)r.n,
                   r.spacing / phi, (long long)r.flagged, fold / phi});
    }
    t.meta.push_back({"n_max", std::to_string(n_max)});
    t.meta.push_back({"pairing", "nearest PT level E_{nu,n} for each exact level"});
    return t;
}

Table propagate_table(const RunConfig& cfg, Engine e)
{
    auto s = propagate(cfg.model, e, cfg.options);
    Table t;
    t.name = std::string("propagate_") + engine_name(e);
    t.columns = {"t_phi", "re_G", "im_G", "abs_G"};
    for (size_t i = 0; i < s.times_phi.size(); ++i)
        t.add_row({s.times_phi[i], s.values[i].real(), s.values[i].imag(), std::abs(s.values[i])});
    auto rep = find_max(s, cfg.options.double_max_gap);
    t.meta.push_back({"engine", engine_name(e)});
    t.meta.push_back({"window_phi", "[0, " + format_number(cfg.options.t_max_phi) + "]"});
    t.meta.push_back({"G_M", format_number(rep.gm)});
    t.meta.push_back({"T_M_phi", format_number(rep.tm)});
    t.meta.push_back({"double_max", rep.double_max ? "yes" : "no"});
    std::string lm;
    for (const auto& x : rep.local_maxima) lm += (lm.empty() ? "" : ";") + format_number(x.t) + ":" + format_number(x.value);
    t.meta.push_back({"local_maxima", lm});
    if (s.n_max >= 0) t.meta.push_back({"n_max", std::to_string(s.n_max)});
    for (const auto& w : s.warnings) t.meta.push_back({"warning", w});
    return t;
}

std::vector<Table> sweep_temp_tables(const RunConfig& cfg, Engine e)
{
    SweepTable s = sweep_temperature(cfg.model, cfg.epsilons, cfg.temp_grid, e, cfg.options);
    Table main = sweep_to_table(s);
    main.name = std::string("sweep_temp_") + engine_name(e);
    Table fit;
    fit.name = std::string("sweep_temp_fit_") + engine_name(e);
    fit.columns = {"epsilon", "T0_fit_k", "knee_T_k", "knee_curvature_T_k"};
    std::map<double, std::vector<const SweepRow*>> by_eps;
    for (const auto& r : s.rows)
        if (r.error.empty()) by_eps[r.epsilon].push_back(&r);
    for (const auto& [eps, rows] : by_eps) {
        std::vector<double> t, gm, tm;
        for (auto* r : rows) {
            t.push_back(r->temperature);
            gm.push_back(r->report.gm);
            tm.push_back(r->report.tm);
        }
        std::vector<double> tp, gp;
        for (size_t i = 0; i < t.size(); ++i)
            if (t[i] > 0) {
                tp.push_back(t[i]);
                gp.push_back(gm[i]);
            }
        fit.add_row({eps, fit_t0(t, gm, cfg.fit_lo, cfg.fit_hi), knee_temperature(t, tm), knee_curvature(tp, gp)});
    }
    fit.meta.push_back({"fit_window_k", "[" + format_number(cfg.fit_lo) + ", " + format_number(cfg.fit_hi) + "]"});
    fit.meta.push_back({"knee", "lowest T where T_M is within 10% of its minimum over the grid"});
    fit.meta.push_back({"knee_curvature", "largest |second difference| of G_M against log T"});
    return {main, fit};
}

std::vector<Table> analytic_tables(const RunConfig& cfg)
{
    Table opt;
    opt.name = "analytic_optimum";
    opt.columns = {"temperature_k", "eps_star", "n0", "delta_n", "G_M_star", "T0_k", "error"};
    for (double T : cfg.temperatures) {
        ModelParams p = cfg.model;
        p.temperature = T;
        DerivedParams d = derive(p);
        try {
            double es = epsilon_star(d);
            GmStar g = gm_star(d, es);
            opt.add_row({T, es, g.n0, g.dn, g.gm, g.t0_kelvin, std::string()});
        } catch (const Error& e) {
            double nan = std::nan("");
            opt.add_row({T, nan, nan, nan, nan, nan, std::string(e.what())});
        }
    }
    Table al;
    al.name = "analytic_alpha";
    al.columns = {"epsilon", "alpha", "W_s_cm", "W_f_cm", "T_f_phi", "T_s_phi", "w_hat_plus_cm", "w_hat_minus_cm",
                  "d_Omega_plus_cm", "theta", "resonance", "p", "q"};
    DerivedParams d = derive(cfg.model);
    for (double eps : cfg.eps_grid) {
        ThreePathModel m = three_path_model(d, eps);
        ResonanceMatch r{"none", -1, -1, 0.0};
        if (m.alpha > 0 && m.alpha < 1) r = resonance_condition(m.alpha);
        al.add_row({eps, m.alpha, m.w_s, m.w_f, m.t_f, m.t_s, m.w_hat_plus, m.w_hat_minus, m.d_om_plus, m.theta,
                    r.type, (long long)r.p, (long long)r.q});
    }
    al.meta.push_back({"temperature_k", format_number(cfg.model.temperature)});
    return {opt, al};
}

}  // namespace

CommandResult run_command(const RunConfig& cfg, const std::string& sub)
{
    check_config(cfg);
    CommandResult r;
    if (sub == "spectrum") {
        r.tables.push_back(spectrum_table(cfg));
    } else if (sub == "crossing") {
        r.tables.push_back(crossing_scan(cfg.model, cfg.chi_grid, cfg.options));
    } else if (sub == "shifts") {
        r.tables.push_back(shift_scan(cfg.model, cfg.eps_grid, cfg.options));
    } else if (sub == "propagate") {
        for (Engine e : cfg.engines) r.tables.push_back(propagate_table(cfg, e));
    } else if (sub == "sweep-eps") {
        for (Engine e : cfg.engines) {
            Table t = sweep_to_table(sweep_epsilon(cfg.model, cfg.eps_grid, cfg.temperatures, e, cfg.options));
            t.name = std::string("sweep_eps_") + engine_name(e);
            r.tables.push_back(std::move(t));
        }
    } else if (sub == "sweep-temp") {
        for (Engine e : cfg.engines)
            for (auto& t : sweep_temp_tables(cfg, e)) r.tables.push_back(std::move(t));
    } else if (sub == "analytic") {
        r.tables = analytic_tables(cfg);
    } else if (sub == "validate") {
        Table t;
        t.name = "validate";
        t.columns = {"check", "passed", "detail"};
        for (const auto& c : validate(cfg.model, cfg.options)) {
            t.add_row({c.name, (long long)c.passed, c.detail});
            if (!c.passed) r.validation_failed = true;
        }
        r.tables.push_back(std::move(t));
    } else {
        fail(ErrorCode::argument, "unknown subcommand '" + sub + "'");
    }
    return r;
}

}  // namespace qst
