#include <cmath>

#include "doctest.h"
#include "exciton.hpp"
#include "fockspace.hpp"
#include "pt.hpp"
#include "threepath.hpp"

using namespace qst;

namespace {

DerivedParams params(double T = 300, double chi = 10)
{
    ModelParams p;
    p.temperature = T;
    p.chi_pn = chi;
    return derive(p);
}

// (eta^2/2) Ebar^r [(W + dw)^-(r+1) + (W - dw)^-(r+1)] by hand
double hand_er(const DerivedParams& d, int r)
{
    const double dw = 2 * 7.8 * std::cos(0.4 * phys::pi);
    const double eb = 2 * 7.8 / std::sqrt(10.0);
    return 0.5 * d.eta * d.eta * std::pow(eb, r) * (std::pow(d.omega + dw, -(r + 1)) + std::pow(d.omega - dw, -(r + 1)));
}

}  // namespace

TEST_CASE("series coefficients")
{
    DerivedParams d = params();
    auto e = taylor_coefficients(d, 12);
    for (int r = 0; r <= 12; ++r) CHECK(e[r] == doctest::Approx(hand_er(d, r)).epsilon(1e-12));
    CHECK(e[0] == doctest::Approx(0.0364265).epsilon(1e-5));
    CHECK(e[1] == doctest::Approx(0.0145306).epsilon(1e-5));
    CHECK(e[2] == doctest::Approx(0.00623114).epsilon(1e-5));
    CHECK(e[0] / d.binding == doctest::Approx(0.1085).epsilon(1e-3));
    for (double x : taylor_coefficients(params(300, 0), 6)) CHECK(x == 0.0);
    CHECK(three_path_model(d, 0.05).series_converged);
}

TEST_CASE("hybridisation limits")
{
    DerivedParams d = params();
    auto e = taylor_coefficients(d, 12);
    ThreePathModel z = three_path_model(d, 0.0);
    CHECK(z.v_pm == doctest::Approx(e[0]));
    CHECK(z.disc == doctest::Approx(4 * e[0] * e[0]));
    CHECK(z.w_hat_plus - z.w_hat_minus == doctest::Approx(2 * e[0]));
    CHECK(z.theta == doctest::Approx(phys::pi / 4));
    CHECK(z.d_om_plus == 0.0);

    const double eps = 1e-4;
    ThreePathModel s = three_path_model(d, eps);
    const double a = d.e_bar - e[1];
    CHECK(s.w_hat_plus == doctest::Approx(a * a * eps * eps / (2 * e[0])).epsilon(0.01));
    CHECK(s.w_hat_minus == doctest::Approx(-2 * e[0]).epsilon(0.01));
    CHECK(s.d_om_plus == doctest::Approx(-2 * e[1] * a * eps * eps / e[0]).epsilon(0.01));
    CHECK(s.d_om_minus == -s.d_om_plus);

    ThreePathModel b = three_path_model(d, 0.05);
    CHECK(b.w_hat_plus == doctest::Approx(d.e_bar * 0.05 + b.dw_plus).epsilon(0.01));
    CHECK(b.w_hat_minus == doctest::Approx(-d.e_bar * 0.05 + b.dw_minus).epsilon(0.01));
    CHECK(b.d_om_minus == -b.d_om_plus);
}

TEST_CASE("frequency ratio over the epsilon range")
{
    DerivedParams d = params();
    double prev = 2;
    for (double eps = 0.005; eps <= 0.05 + 1e-12; eps += 0.001) {
        ThreePathModel m = three_path_model(d, eps);
        CHECK(m.w_plus > 0);
        CHECK(m.w_minus > 0);
        CHECK(m.w_s < m.w_f);
        CHECK(m.alpha > 0);
        CHECK(m.alpha < 1);
        CHECK(m.alpha < prev);
        prev = m.alpha;
    }
}

TEST_CASE("agreement with the dressed perturbative pair")
{
    ModelParams p;
    for (double eps : {0.01, 0.02, 0.03, 0.05}) {
        p.epsilon = eps;
        DerivedParams d = derive(p);
        auto exc = exciton_eigensystem(p, d, QcCoupling::resonant);
        Mat m = m_operator(exc, d);
        auto dm = delta_matrices(exc, m, d.omega);
        auto dr = dress(exc, dm.dh, dm.domega);
        ThreePathModel t = three_path_model(d, eps);
        const double wp = dr.energies(dr.index(StateTag::plus)), wm = dr.energies(dr.index(StateTag::minus));
        CHECK(std::abs(t.w_hat_plus - wp) < 0.05 * std::abs(wp));
        CHECK(std::abs(t.w_hat_minus - wm) < 0.05 * std::abs(wm));
    }
}

TEST_CASE("three-path propagator")
{
    DerivedParams d = params();
    ThreePathModel m = three_path_model(d, 0.013);
    auto g = three_path_propagator(m, d, {0.0, 100.0, 700.0});
    CHECK(std::abs(g.values[0]) < 1e-15);
    for (auto v : g.values) CHECK(std::abs(v) <= 1.0);

    // equal moduli and no mixing: the slow/fast decomposition is an identity
    for (double f : {1.0, 0.8, 0.3})
        for (double t = 0; t < 500; t += 3.7) {
            const double wp = 0.031, wm = 0.077;
            cplx gg = 0.5 - 0.25 * f * std::exp(cplx(0, -wp * t)) - 0.25 * f * std::exp(cplx(0, wm * t));
            CHECK(std::norm(gg) == doctest::Approx(interference_modulus_sq(f, (wm - wp) / 2, (wm + wp) / 2, t)).epsilon(1e-12));
        }

    // no phonons: the three-level law
    DerivedParams d0 = params(300, 0);
    ThreePathModel m0 = three_path_model(d0, 0.013);
    auto times = uniform_times(800, 801);
    auto g0 = three_path_propagator(m0, d0, times);
    for (size_t i = 0; i < times.size(); ++i) {
        double t = times[i] / 7.8;
        double closed = 0.5 * std::abs(std::cos(std::sqrt(2.0) * d0.g * t) - 1.0);
        CHECK(std::abs(g0.values[i]) == doctest::Approx(closed).epsilon(1e-9));
    }
    // decoherence modulus bounds
    for (double t = 0; t < 5000; t += 13)
        for (bool simp : {false, true}) {
            double f = decoherence_modulus(d, 0.002, t, simp);
            CHECK(f <= 1.0 + 1e-15);
            CHECK(f >= 1 / std::sqrt(1 + 4 * d.delta_n_sq) - 1e-15);
        }
    CHECK(decoherence_modulus(d, 0.002, 0.0, false) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("optimal coupling")
{
    DerivedParams d = params();
    auto e = taylor_coefficients(d, 4);
    const double a = d.e_bar - e[1];
    const double hand = std::sqrt(2.0) * e[0] / std::sqrt(a * a - 4 * d.n_bar * e[1] * a - 2 * e[0] * e[2]);
    CHECK(epsilon_star(d) == doctest::Approx(hand).epsilon(1e-12));
    CHECK(epsilon_star(d) == doctest::Approx(0.011406).epsilon(1e-4));
    for (double T = 100; T <= 300; T += 25) {
        double es = epsilon_star(params(T));
        CHECK(es >= 0.0107);
        CHECK(es <= 0.0115);
    }
    DerivedParams cold = params(0);
    const double hc = std::sqrt(2.0) * e[0] / std::sqrt(a * a - 2 * e[0] * e[2]);
    CHECK(epsilon_star(cold) == doctest::Approx(hc).epsilon(1e-12));
    CHECK_THROWS(epsilon_star(params(1e6)));

    GmStar g = gm_star(d, epsilon_star(d));
    CHECK(g.t0_kelvin == doctest::Approx(2 * g.n0 * d.omega / phys::pi / phys::boltzmann_cm));
    CHECK(std::abs(g.t0_kelvin - 1600) <= 160);
    CHECK(g.t0_kelvin == doctest::Approx(1521).epsilon(2e-3));
    CHECK(g.dn == doctest::Approx(g.n0 - d.n_bar));
    CHECK(gm_star(cold, epsilon_star(cold)).gm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resonance classification")
{
    auto a = resonance_condition(1.0 / 3);
    CHECK(a.type == "destructive");
    CHECK(a.q == 1);
    auto b = resonance_condition(0.5);
    CHECK(b.type == "constructive");
    CHECK(b.p == 0);
    CHECK(b.q == 1);
    CHECK(resonance_condition(0.9).type == "none");
    CHECK(resonance_condition(0.6).type == "destructive");  // 3/5
    CHECK_THROWS(resonance_condition(1.5));
}
