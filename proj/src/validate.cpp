#include <cmath>
#include <cstring>

#include "error.hpp"
#include "harness.hpp"

namespace qst {

namespace {

std::string num(double v) { return format_number(v); }

void add(std::vector<CheckResult>& out, const std::string& name, bool ok, const std::string& detail)
{
    out.push_back({name, ok, detail});
}

// S1 = Z (x) a^dagger - Z^T (x) a on the exciton-major basis
Mat s1_operator(const Mat& z, int n_max)
{
    const int ne = static_cast<int>(z.rows()), nb = n_max + 1;
    Mat s = Mat::Zero(ne * nb, ne * nb);
    for (int a = 0; a < ne; ++a)
        for (int b = 0; b < ne; ++b)
            for (int n = 0; n + 1 < nb; ++n) {
                const double r = std::sqrt(double(n + 1));
                s(a * nb + n + 1, b * nb + n) += z(a, b) * r;
                s(a * nb + n, b * nb + n + 1) -= z(b, a) * r;
            }
    return s;
}

}  // namespace

std::vector<CheckResult> validate(const ModelParams& p, const EngineOptions& o)
{
    std::vector<CheckResult> out;
    DerivedParams d;
    try {
        d = derive(p);
    } catch (const Error& e) {
        add(out, "derive", false, e.what());
        return out;
    }
    std::string warn;
    for (const auto& c : validity_report(d, p))
        if (!c.passed) warn += c.name + " (" + num(c.value) + " vs " + num(c.threshold) + ") ";
    add(out, "derive", true, warn.empty() ? "all regime checks pass" : "advisory: " + warn);

    ExcitonStage st = exciton_stage(p, o.basis);
    const int io = st.exc.index(StateTag::o);
    {
        ModelParams rel = p;
        rel.omega0 = 0;
        Mat h = build_h_a(rel, d, o.basis);
        double r = (h * analytic_triplet(p, d).o).norm();
        add(out, "psi_o_eigenvector", r <= 1e-12, "residual " + num(r));
        Mat v = st.exc.vectors;
        double orth = (v.transpose() * v - Mat::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
        add(out, "exciton_orthogonality", orth <= 1e-12, "max |V^T V - I| " + num(orth));
    }

    PtStage pt = pt_stage(st);
    {
        DeltaMatrices dm = delta_matrices(st.exc, st.m, d.omega);
        double e1 = (pt.ops.a - dm.dh).cwiseAbs().maxCoeff();
        double e2 = (pt.ops.b + pt.ops.b.transpose() - dm.domega).cwiseAbs().maxCoeff();
        add(out, "operator_identities", e1 <= 1e-12 && e2 <= 1e-12,
            "max |A - dH_A| " + num(e1) + ", max |B + B^T - dOmega| " + num(e2));
        double mo = st.m.row(io).cwiseAbs().maxCoeff();
        double dwo = std::abs(pt.dr.d_omega_mu(io)), dOo = std::abs(pt.dr.d_omega(pt.dr.index(StateTag::o)));
        add(out, "o_decoupled", mo <= 1e-12 && dwo == 0.0 && dOo == 0.0,
            "max |M_o| " + num(mo) + ", |d omega_o| " + num(dwo) + ", |d Omega_o| " + num(dOo));
        const int ip = st.exc.index(StateTag::plus), im = st.exc.index(StateTag::minus);
        double vr = std::abs(pt.dr.v_pm + 0.5 * (pt.dr.d_omega_mu(ip) + pt.dr.d_omega_mu(im)));
        add(out, "v_pm_relation", vr <= 1e-10, "deviation " + num(vr));
        Mat c = pt.dr.chi;
        double orth = (c.transpose() * c - Mat::Identity(c.cols(), c.cols())).cwiseAbs().maxCoeff();
        add(out, "dressed_orthonormal", orth <= 1e-12, "max |chi^T chi - I| " + num(orth));
        bool unity = true;
        const int no = pt.dr.index(StateTag::o);
        for (double t : {0.0, 1.0, 37.5, 1000.0})
            unity = unity && decoherence_factor(d.beta_omega, pt.dr.d_omega(no), t) == cplx(1.0, 0.0);
        add(out, "F_o_unity", unity, "decoherence factor of the o state");
    }

    // small brute-force instance
    try {
        ModelParams q = p;
        q.lattice_length = 4;
        ExcitonStage s4 = exciton_stage(q, o.basis);
        const int n_max = 3;
        PtStage pt4 = pt_stage(s4);
        Mat h0 = h0_block(s4.exc, s4.d, n_max), v = v_block(s4.m, n_max);
        Mat s1 = s1_operator(pt4.ops.z, n_max);
        double c = (h0 * s1 - s1 * h0 - v).cwiseAbs().maxCoeff();
        add(out, "commutator_small_instance", c <= 1e-10, "max |[H0, S1] - V| " + num(c));

        CoupledHamiltonian ch = build_full_h(s4.exc, s4.m, s4.d, make_truncation(s4.d, n_max));
        SpectralDecomposition dec = eigendecompose(ch);
        Eigen::SelfAdjointEigenSolver<Mat> ref(ch.h);
        double de = (dec.energies - ref.eigenvalues()).cwiseAbs().maxCoeff();
        double rows = ch.h.cwiseAbs().rowwise().sum().maxCoeff();
        bool gersh = dec.energies.cwiseAbs().maxCoeff() <= rows;
        add(out, "small_instance_spectrum", de <= 1e-8 && gersh,
            "max |dE| vs reference solver " + num(de) + ", Gershgorin bound " + num(rows));
    } catch (const Error& e) {
        add(out, "small_instance", false, e.what());
    }

    auto times = uniform_times(o.t_max_phi, 2001);
    try {
        int n = resolve_nmax(d, o);
        ExactSolver solver(p, o.basis, n);
        auto g1 = solver.propagate(p.temperature, times, o.tail_tol, 1);
        auto g2 = solver.propagate(p.temperature, times, o.tail_tol, 3);
        double worst = 0;
        for (auto& v : g1.values) worst = std::max(worst, std::abs(v));
        add(out, "unitarity", worst <= 1.0 + 1e-9, "max |G| " + num(worst) + " (n_max " + std::to_string(n) + ")");
        bool same = g1.values.size() == g2.values.size() &&
                    std::memcmp(g1.values.data(), g2.values.data(), g1.values.size() * sizeof(cplx)) == 0;
        add(out, "determinism", same, "1 vs 3 workers");
        add(out, "G_at_zero", std::abs(g1.values[0]) <= 1e-12, "|G(0)| " + num(std::abs(g1.values[0])));
    } catch (const Error& e) {
        add(out, "unitarity", false, e.what());
    }

    try {
        ModelParams q = p;
        q.chi_pn = 0;
        EngineOptions oo = o;
        oo.n_max = -1;
        std::vector<std::vector<double>> mods;
        for (Engine e : {Engine::exact, Engine::pt_full, Engine::pt_diagonal, Engine::threepath}) {
            auto s = propagate(q, e, oo, times);
            std::vector<double> m;
            for (auto& v : s.values) m.push_back(std::abs(v));
            mods.push_back(m);
        }
        double worst = 0;
        for (size_t a = 1; a < mods.size(); ++a)
            for (size_t i = 0; i < times.size(); ++i) worst = std::max(worst, std::abs(mods[a][i] - mods[0][i]));
        // the exact engine drops the thermal weight above n_max
        const double tail = make_truncation(derive(q), resolve_nmax(derive(q), oo)).tail_mass;
        add(out, "chi0_collapse", worst <= 1e-8 + tail,
            "max pairwise |G| difference " + num(worst) + ", thermal tail " + num(tail));
    } catch (const Error& e) {
        add(out, "chi0_collapse", false, e.what());
    }
    return out;
}

}  // namespace qst
