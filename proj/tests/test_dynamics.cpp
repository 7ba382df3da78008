#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cold/dynamics.hpp"
#include "cold/experiments.hpp"
#include "cold/models.hpp"

using namespace cold;

namespace {

PauliSum sigma(int n, int site, char letter, double c = 1.0) {
    PauliSum s(n);
    s.add(PauliString::site(n, site, letter), c);
    return s;
}

}  // namespace

TEST_CASE("compiled application matches the dense matrix") {
    ModelSpec spec;
    spec.family = ModelFamily::ANNNI;
    spec.n_sites = 5;
    spec.p1 = 0.8;
    spec.p2 = 0.9;
    spec.boundary = Boundary::Periodic;
    PauliSum h = build_final_hamiltonian(spec);
    CompiledPauliSum c(h);
    Eigen::MatrixXcd dense = to_matrix(h);
    StateVector v = StateVector::Random(32);
    v.normalize();
    StateVector fast = c.apply(v);
    StateVector slow = dense * v;
    REQUIRE((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(std::abs(c.expectation(v) - Complex(v.dot(slow))) < 1e-12);
}

TEST_CASE("accumulate adds with the requested scale") {
    PauliSum h = sigma(2, 0, 'Z') + sigma(2, 1, 'X', 0.5);
    CompiledPauliSum c(h);
    StateVector v = StateVector::Random(4), out = StateVector::Random(4);
    StateVector expect = out + Complex(0, 2) * (to_matrix(h) * v);
    c.accumulate(v, out, Complex(0, 2));
    REQUIRE((out - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Rabi oscillation against the closed form") {
    const double omega = 1.3, t_final = 2.1;
    AssemblerHamiltonian h([&](double) { return sigma(1, 0, 'X', omega); }, 1);
    StateVector psi0(2);
    psi0 << 1, 0;
    StateVector psi = evolve(h, psi0, t_final);
    // exp(-i omega t sx): survival probability cos^2(omega t)
    double expect = std::cos(omega * t_final) * std::cos(omega * t_final);
    CHECK(std::norm(psi(0)) == doctest::Approx(expect).epsilon(1e-7));
    CHECK(std::abs(psi.norm() - 1.0) < 1e-8);
}

TEST_CASE("time-reversed evolution returns to the initial state") {
    ModelSpec spec;
    spec.family = ModelFamily::XXZ;
    spec.n_sites = 4;
    spec.p1 = 0.9;
    spec.p2 = 0.4;
    spec.boundary = Boundary::Open;
    const double tau = 0.8;
    PauliSum hi = build_initial_hamiltonian(4);
    PauliSum hf = build_final_hamiltonian(spec);
    auto at = [&](double t) {
        auto [l, ld] = schedule(std::clamp(t, 0.0, tau), tau);
        (void)ld;
        return hi + l * (hf - hi);
    };
    AssemblerHamiltonian fwd([&](double t) { return at(t); }, 4);
    AssemblerHamiltonian bwd([&](double t) { return -1.0 * at(tau - t); }, 4);
    StateVector psi0 = plus_state(4);
    StateVector psi1 = evolve(fwd, psi0, tau);
    StateVector psi2 = evolve(bwd, psi1, tau);
    CHECK((psi2 - psi0).norm() < 1e-6);
}

TEST_CASE("refinement contract: fixed low resolution is less accurate") {
    const double omega = 3.0, t_final = 4.0;
    AssemblerHamiltonian h([&](double) { return sigma(1, 0, 'X', omega); }, 1);
    StateVector psi0(2);
    psi0 << 1, 0;
    StateVector exact(2);
    exact << Complex(std::cos(omega * t_final), 0),
        Complex(0, -std::sin(omega * t_final));

    EvolveOptions coarse;
    coarse.fixed_steps = true;
    coarse.initial_steps = 40;
    double err_coarse = (evolve(h, psi0, t_final, coarse) - exact).norm();

    EvolveOptions refined;
    refined.tol = 1e-10;
    refined.initial_steps = 40;
    double err_refined = (evolve(h, psi0, t_final, refined) - exact).norm();
    CHECK(err_refined < err_coarse);
    CHECK(err_refined < 1e-8);
}

TEST_CASE("observer fires once per accepted node plus the initial point") {
    AssemblerHamiltonian h([&](double) { return sigma(1, 0, 'Z', 1.0); }, 1);
    StateVector psi0(2);
    psi0 << Complex(std::sqrt(0.5), 0), Complex(std::sqrt(0.5), 0);
    EvolveOptions opts;
    opts.fixed_steps = true;
    opts.initial_steps = 10;
    int calls = 0;
    double last_t = -1;
    opts.observer = [&](double t, const StateVector& psi) {
        ++calls;
        CHECK(t >= last_t);
        CHECK(std::abs(psi.norm() - 1.0) < 1e-6);
        last_t = t;
    };
    evolve(h, psi0, 1.0, opts);
    CHECK(calls == 11);
    CHECK(last_t == doctest::Approx(1.0));
}

TEST_CASE("diagonalize the transverse-field starting point") {
    PauliSum h = build_initial_hamiltonian(4);
    SpectralSummary s = diagonalize(h);
    CHECK(s.e_min == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(s.e_max == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(s.gap == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(!s.degeneracy_flag);
    // unique ground state: the uniform plus state with a real-positive phase
    StateVector plus = plus_state(4);
    CHECK(fidelity(s.ground, plus) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.ground(0).real() > 0);
    CHECK(std::abs(s.ground(0).imag()) < 1e-12);
}

TEST_CASE("diagonalize flags degenerate ground spaces") {
    // -ZZ on two sites: ground doublet {|00>, |11>}
    PauliSum h(2);
    h.add(PauliString::from_letters("ZZ"), -1.0);
    SpectralSummary s = diagonalize(h);
    CHECK(s.degeneracy_flag);
    CHECK(s.ground_subspace.cols() == 2);
    StateVector cat(4);
    cat << std::sqrt(0.5), 0, 0, std::sqrt(0.5);
    CHECK(subspace_fidelity(cat, s) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fidelity(cat, s.ground) <= 0.5 + 1e-10);
}

TEST_CASE("diagonalize rejects non-Hermitian input") {
    PauliSum h(2);
    h.add(PauliString::from_letters("XY"), Complex(0, 1));
    CHECK_THROWS(diagonalize(h));
}

TEST_CASE("normalized energy is 0 at the ground state and 1 at the top") {
    ModelSpec spec;
    spec.family = ModelFamily::ANNNI;
    spec.n_sites = 4;
    spec.p1 = 0.6;
    spec.p2 = 0.6;
    spec.boundary = Boundary::Periodic;
    PauliSum h = build_final_hamiltonian(spec);
    SpectralSummary s = diagonalize(h);
    CompiledPauliSum c(h);
    CHECK(normalized_energy(s.ground, c, s) == doctest::Approx(0.0).epsilon(1e-10));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_matrix(h));
    StateVector top = es.eigenvectors().col(15);
    CHECK(normalized_energy(top, c, s) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("norm drift guard trips on a non-Hermitian generator") {
    AssemblerHamiltonian h(
        [&](double) {
            PauliSum s(1);
            s.add(PauliString::from_letters("X"), Complex(0, 2));
            return s;
        },
        1);
    StateVector psi0(2);
    psi0 << 1, 0;
    CHECK_THROWS(evolve(h, psi0, 5.0));
}
