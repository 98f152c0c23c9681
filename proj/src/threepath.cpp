#include "threepath.hpp"

#include <cmath>

#include "error.hpp"

namespace qst {

std::vector<double> taylor_coefficients(const DerivedParams& d, int r_max)
{
    const double up = d.omega + d.delta_omega, dn = d.omega - d.delta_omega;
    if (std::abs(dn) < 1e-9) fail(ErrorCode::numerical, "taylor_coefficients: Omega resonant with band spacing");
    std::vector<double> e(r_max + 1);
    const double h = 0.5 * d.eta * d.eta;
    for (int r = 0; r <= r_max; ++r)
        e[r] = h * (std::pow(d.e_bar, r) / std::pow(up, r + 1) + std::pow(d.e_bar, r) / std::pow(dn, r + 1));
    return e;
}

void hybridize(const DerivedParams& d, ThreePathModel& m)
{
    const double eps = m.epsilon;
    double sp = 0, sm = 0, pw = 1;
    for (size_t r = 0; r < m.e_r.size(); ++r, pw *= eps) {
        sp += m.e_r[r] * pw;
        sm += (r % 2 ? -1.0 : 1.0) * m.e_r[r] * pw;
    }
    // plus falls with eps, minus rises
    m.dw_plus = -sp;
    m.dw_minus = -sm;
    m.v_pm = -(m.dw_plus + m.dw_minus) / 2;
    m.delta = 2.0 * d.e_bar * eps;
    const double x = m.delta + m.dw_plus - m.dw_minus;
    m.disc = x * x + 4.0 * m.v_pm * m.v_pm;
    const double root = std::sqrt(m.disc);
    if (root > 0) {
        m.cos2t = x / root;
        m.sin2t = 2.0 * m.v_pm / root;
    } else {
        m.cos2t = 1.0;
        m.sin2t = 0.0;
    }
    m.theta = 0.5 * std::atan2(m.sin2t, m.cos2t);
    const double mid = (m.dw_plus + m.dw_minus) / 2;
    m.w_hat_plus = mid + root / 2;
    m.w_hat_minus = mid - root / 2;
}

void phonon_shift_pm(ThreePathModel& m)
{
    double s = 0, pw = m.epsilon;
    for (size_t r = 1; r < m.e_r.size(); r += 2, pw *= m.epsilon * m.epsilon) s += m.e_r[r] * pw;
    m.d_om_plus = -2.0 * m.cos2t * s;
    m.d_om_minus = 2.0 * m.cos2t * s;
}

ThreePathModel three_path_model(const DerivedParams& d, double epsilon, int r_max)
{
    ThreePathModel m;
    m.epsilon = epsilon;
    m.e_r = taylor_coefficients(d, r_max);
    if (m.e_r[0] > 0) m.series_converged = std::abs(m.e_r[r_max] * std::pow(epsilon, r_max)) < 1e-14 * m.e_r[0];
    hybridize(d, m);
    phonon_shift_pm(m);
    m.w_plus = m.w_hat_plus + d.n_bar * m.d_om_plus;
    m.w_minus = -(m.w_hat_minus + d.n_bar * m.d_om_minus);
    m.w_s = (m.w_minus - m.w_plus) / 2;
    m.w_f = (m.w_minus + m.w_plus) / 2;
    m.alpha = m.w_f != 0 ? m.w_s / m.w_f : 0.0;
    auto period = [&](double w) { return w != 0 ? phys::pi / std::abs(w) * d.hopping : 0.0; };
    m.t_f = period(m.w_f);
    m.t_s = period(m.w_s);
    m.t_plus = period(m.w_plus);
    m.t_minus = period(m.w_minus);
    return m;
}

double decoherence_modulus(const DerivedParams& d, double d_omega, double t, bool simplified)
{
    if (std::isinf(d.beta_omega)) return 1.0;
    if (simplified) {
        double s = std::sin(d_omega * t / 2);
        return 1.0 / std::sqrt(1.0 + 4.0 * d.delta_n_sq * s * s);
    }
    const double q = std::exp(-d.beta_omega);
    return -std::expm1(-d.beta_omega) / std::abs(1.0 - q * std::exp(cplx(0.0, -d_omega * t)));
}

PropagatorSeries three_path_propagator(const ThreePathModel& m, const DerivedParams& d,
                                       const std::vector<double>& times_phi, bool simplified_modulus)
{
    PropagatorSeries s;
    s.engine = Engine::threepath;
    s.times_phi = times_phi;
    s.values.resize(times_phi.size());
    for (size_t i = 0; i < times_phi.size(); ++i) {
        const double t = times_phi[i] / d.hopping;
        const double fp = decoherence_modulus(d, m.d_om_plus, t, simplified_modulus);
        const double fm = decoherence_modulus(d, m.d_om_minus, t, simplified_modulus);
        cplx g = 0.5 - 0.25 * fp * std::exp(cplx(0, -m.w_plus * t)) * (1.0 + m.sin2t) -
                 0.25 * fm * std::exp(cplx(0, m.w_minus * t)) * (1.0 - m.sin2t);
        s.values[i] = -double(d.delta_n) * g;
    }
    if (!m.series_converged) s.warnings.push_back("E_r series not converged at this epsilon");
    return s;
}

double interference_modulus_sq(double f, double w_s, double w_f, double t)
{
    const double cf = std::cos(w_f * t);
    return 0.25 * (1.0 - 2.0 * f * std::cos(w_s * t) * cf + f * f * cf * cf);
}

double epsilon_star(const DerivedParams& d, int r_max)
{
    auto e = taylor_coefficients(d, std::max(r_max, 2));
    const double a = d.e_bar - e[1];
    const double rad = a * a - 4.0 * d.n_bar * e[1] * a - 2.0 * e[0] * e[2];
    if (!(rad > 0)) fail(ErrorCode::numerical, "epsilon_star: negative radicand (temperature too high)");
    return std::sqrt(2.0) * e[0] / std::sqrt(rad);
}

GmStar gm_star(const DerivedParams& d, double eps_star, int r_max)
{
    ThreePathModel m = three_path_model(d, eps_star, r_max);
    if (m.d_om_plus == 0.0) fail(ErrorCode::numerical, "gm_star: vanishing phonon shift");
    GmStar g;
    g.epsilon = eps_star;
    g.n0 = std::abs(m.w_hat_plus) / std::abs(m.d_om_plus);
    g.dn = g.n0 - d.n_bar;
    if (!(g.dn > 0)) fail(ErrorCode::numerical, "gm_star: thermal occupation exceeds n0");
    g.gm = 1.0 - phys::pi * phys::pi / 4.0 * d.delta_n_sq / (g.dn * g.dn);
    g.t0_kelvin = 2.0 * g.n0 * d.omega / phys::pi / phys::boltzmann_cm;
    return g;
}

ResonanceMatch resonance_condition(double alpha, double window, int max_order)
{
    if (!(alpha > 0 && alpha < 1)) fail(ErrorCode::argument, "resonance_condition: alpha must lie in (0, 1)");
    ResonanceMatch best;
    double gap = window;
    for (int q = 1; q <= max_order; ++q) {
        double v = (2.0 * q - 1) / (2.0 * q + 1);
        if (std::abs(alpha - v) <= gap) {
            gap = std::abs(alpha - v);
            best = {"destructive", -1, q, v};
        }
    }
    for (int q = 1; q <= max_order; ++q)
        for (int p = 0; p < q; ++p) {
            double v = double(q - p) / (q + p + 1);
            if (std::abs(alpha - v) < gap) {
                gap = std::abs(alpha - v);
                best = {"constructive", p, q, v};
            }
        }
    if (best.q < 0) best = {"none", -1, -1, 0.0};
    return best;
}

}  // namespace qst
