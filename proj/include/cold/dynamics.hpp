#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cold/pauli.hpp"

namespace cold {

using StateVector = Eigen::VectorXcd;

// A PauliSum flattened to bit-mask form for fast matrix-free application.
// Site 0 is the most significant qubit, matching to_matrix().
class CompiledPauliSum {
public:
    CompiledPauliSum() = default;
    explicit CompiledPauliSum(const PauliSum& sum);

    int n_sites() const { return n_; }
    int64_t dim() const { return int64_t(1) << n_; }
    bool empty() const { return terms_.empty(); }

    // out += scale * H * in
    void accumulate(const StateVector& in, StateVector& out, Complex scale) const;
    StateVector apply(const StateVector& in) const;

    Complex expectation(const StateVector& psi) const;

private:
    struct Term {
        uint64_t xflip;
        uint64_t yzmask;
        Complex coeff;  // includes the i^{#Y} front factor
    };
    int n_ = 0;
    std::vector<Term> terms_;
};

// Time-dependent Hermitian operator usable by the integrator.
class TimeDependentHamiltonian {
public:
    virtual ~TimeDependentHamiltonian() = default;
    // out = H(t) * in
    virtual void apply(double t, const StateVector& in, StateVector& out) const = 0;
    virtual int64_t dim() const = 0;
};

// Adapter for tests and one-off callers; compiles the sum at every call.
class AssemblerHamiltonian : public TimeDependentHamiltonian {
public:
    AssemblerHamiltonian(std::function<PauliSum(double)> assembler, int n_sites)
        : assembler_(std::move(assembler)), n_(n_sites) {}
    void apply(double t, const StateVector& in, StateVector& out) const override {
        CompiledPauliSum h(assembler_(t));
        out.setZero(in.size());
        h.accumulate(in, out, 1.0);
    }
    int64_t dim() const override { return int64_t(1) << n_; }

private:
    std::function<PauliSum(double)> assembler_;
    int n_;
};

struct SpectralSummary {
    double e_min = 0;
    double e_max = 0;
    StateVector ground;            // deterministic phase
    double gap = 0;                // E1 - E0
    bool degeneracy_flag = false;  // gap < tol_deg
    Eigen::MatrixXcd ground_subspace;  // eigenvectors within tol_deg of E0
};

// Full Hermitian eigendecomposition of a PauliSum (N <= cap).
// Throws on non-Hermitian input (imaginary coefficient above 1e-12).
SpectralSummary diagonalize(const PauliSum& h, double tol_deg = 1e-10);

struct EvolveOptions {
    double tol = 1e-8;       // step-refinement tolerance on the final state
    int initial_steps = 1000;
    int max_refinements = 8;
    // Fixed resolution: skip the refinement loop and integrate with
    // initial_steps only (used inside optimizer inner loops).
    bool fixed_steps = false;
    // Called at every accepted node of the final pass.
    std::function<void(double t, const StateVector&)> observer;
};

// Integrates i dpsi/dt = H(t) psi from 0 to tau (hbar = 1), RK4 with step
// doubling until the final state moves by less than tol between refinements.
// Throws on non-convergence after max_refinements.
StateVector evolve(const TimeDependentHamiltonian& h, const StateVector& psi0,
                   double tau, const EvolveOptions& opts = {});

// |<phi|psi>|^2
double fidelity(const StateVector& psi, const StateVector& phi);

// sum over the degenerate ground manifold of |<psi_i|psi>|^2
double subspace_fidelity(const StateVector& psi, const SpectralSummary& spec);

// (  <psi|H|psi> - E_min ) / ( E_max - E_min )
double normalized_energy(const StateVector& psi, const CompiledPauliSum& h_final,
                         const SpectralSummary& spec);

}  // namespace cold
