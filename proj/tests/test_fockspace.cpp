#include <cmath>

#include "doctest.h"
#include "error.hpp"
#include "fockspace.hpp"
#include "oracles.hpp"

using namespace qst;

TEST_CASE("coupling operator structure")
{
    ModelParams p;
    p.epsilon = 0;
    DerivedParams d = derive(p);
    auto exc = exciton_eigensystem(p, d, QcCoupling::resonant);
    Mat m = m_operator(exc, d);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const int io = exc.index(StateTag::o);
    CHECK(m.row(io).cwiseAbs().maxCoeff() <= 1e-12);
    // band-centre coupling splits evenly between the two hybrids
    const int ip = exc.index(StateTag::plus), im = exc.index(StateTag::minus);
    for (int mu : {3, 7}) {
        CHECK(std::abs(m(mu, ip)) == doctest::Approx(d.eta / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(std::abs(m(mu, im)) == doctest::Approx(d.eta / std::sqrt(2.0)).epsilon(1e-12));
    }
    p.chi_pn = 0;
    d = derive(p);
    CHECK(m_operator(exc, d).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncation from the thermal tail")
{
    ModelParams p;
    p.temperature = 0;
    CHECK(choose_nmax(derive(p), 1e-5).n_max == 10);
    CHECK(choose_nmax(derive(p), 1e-5).weights(0) == 1.0);
    p.temperature = 300;
    DerivedParams d = derive(p);
    auto t = choose_nmax(d, 1e-5);
    // hand solution of exp(-bW (n+1)) < tol
    const double bw = d.omega / (phys::boltzmann_cm * 300);
    int expect = 0;
    while (std::exp(-bw * (expect + 1)) >= 1e-5) ++expect;
    CHECK(t.n_max == expect);
    CHECK(t.n_max == 158);
    CHECK(t.tail_mass < 1e-5);
    CHECK(t.weights.sum() + t.tail_mass == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 2;
    for (int n = 0; n < 200; n += 7) {
        double tm = make_truncation(d, n).tail_mass;
        CHECK(tm < prev);
        prev = tm;
    }
    CHECK_THROWS_AS(choose_nmax(d, 1e-5, 100), Error);
    CHECK_THROWS_AS(choose_nmax(d, 0.5), Error);
}

TEST_CASE("convergence probe extends the truncation")
{
    ModelParams p;
    p.temperature = 0;
    DerivedParams d = derive(p);
    int calls = 0;
    NmaxProbe probe = [&](int n) {
        ++calls;
        return n < 30 ? 1.0 / n : 0.5;
    };
    auto t = choose_nmax(d, 1e-5, 512, probe);
    CHECK(t.n_max == 30);
    CHECK(calls == 4);
}

TEST_CASE("coupled Hamiltonian blocks")
{
    ModelParams p;
    p.lattice_length = 4;
    DerivedParams d = derive(p);
    auto exc = exciton_eigensystem(p, d, QcCoupling::resonant);
    Mat m = m_operator(exc, d);
    auto ch = build_full_h(exc, m, d, make_truncation(d, 3));
    CHECK(ch.dim() == 5 * 4);
    CHECK((ch.h - ch.h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ch.h - h0_block(exc, d, 3) - v_block(m, 3)).cwiseAbs().maxCoeff() == 0.0);
    // V connects n to n +- 1 with sqrt factors
    CHECK(ch.h(ch.index(0, 1), ch.index(1, 2)) == doctest::Approx(m(0, 1) * std::sqrt(2.0)));
    CHECK(ch.h(ch.index(0, 1), ch.index(1, 3)) == 0.0);
    // Gershgorin envelope against an independent solver
    oracle::Dense a(ch.dim(), std::vector<double>(ch.dim()));
    for (int i = 0; i < ch.dim(); ++i)
        for (int j = 0; j < ch.dim(); ++j) a[i][j] = ch.h(i, j);
    auto ev = oracle::jacobi(a);
    const double bound = ch.h.cwiseAbs().rowwise().sum().maxCoeff();
    for (double e : ev.values) CHECK(std::abs(e) <= bound);

    p.chi_pn = 0;
    d = derive(p);
    auto ch0 = build_full_h(exc, m_operator(exc, d), d, make_truncation(d, 3));
    for (int mu = 0; mu < 5; ++mu)
        for (int n = 0; n <= 3; ++n)
            CHECK(ch0.h(ch0.index(mu, n), ch0.index(mu, n)) == doctest::Approx(exc.energies(mu) + n * d.omega));
    CHECK((ch0.h - Mat(ch0.h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}
