#pragma once

#include <string>
#include <vector>

#include "cold/pauli.hpp"

namespace cold {

enum class ModelFamily { ANNNI, XXZ, HS };
enum class Boundary { Open, Periodic };
enum class AnsatzKind { Local, Near, Next };

ModelFamily model_family_from_string(const std::string& s);
std::string to_string(ModelFamily f);
AnsatzKind ansatz_kind_from_string(const std::string& s);
std::string to_string(AnsatzKind k);

// Target-model description. p1 is k (ANNNI) or Delta (XXZ/HS); p2 is the field h.
// `boundary` controls both the Hamiltonian sums (ANNNI/XXZ) and whether the
// ansatz/control sums wrap. The HS couplings always live on the unit circle,
// but its ansatz/control sums still honor `boundary` (default open).
struct ModelSpec {
    ModelFamily family = ModelFamily::ANNNI;
    int n_sites = 5;
    double p1 = 0.5;
    double p2 = 0.5;
    Boundary boundary = Boundary::Periodic;

    void validate() const;
    // The convention that reproduces the reference data: ANNNI periodic,
    // XXZ and HS open.
    static Boundary default_boundary(ModelFamily f);
};

// Control pulse f(t) = sum_k beta_k sin(pi k t / tau); vanishes at t=0 and t=tau.
struct DriveSpec {
    double tau = 0.01;
    std::vector<double> beta = {0.0};  // one entry per frequency

    int n_k() const { return int(beta.size()); }
    void validate() const;
};

// Schedule and pulse values bundled at one time point.
struct ScheduleContext {
    double t = 0;
    double lambda = 0;
    double lambda_dot = 0;
    double f = 0;
    double f_dot = 0;
};

// lambda(t) = sin^2( (pi/2) sin^2(pi t / 2 tau) ); returns (lambda, lambda_dot).
// Derivatives vanish at both end-points.
std::pair<double, double> schedule(double t, double tau);

struct ScheduleDerivatives {
    double lambda = 0;
    double lambda_dot = 0;
    double lambda_ddot = 0;
};

// Schedule with first and second time derivative (both vanish at endpoints).
ScheduleDerivatives schedule_derivatives(double t, double tau);

// (f, f_dot) of the sine pulse.
std::pair<double, double> pulse(double t, const DriveSpec& drive);

ScheduleContext make_context(double t, const DriveSpec& drive, bool with_pulse = true);

// H_f of the chosen family (see ModelSpec conventions).
PauliSum build_final_hamiltonian(const ModelSpec& spec);

// H_i = -sum_i sigma^x_i; ground state is the uniform |+>^N product.
PauliSum build_initial_hamiltonian(int n);

// Family default control operator: sum sigma^z (ANNNI),
// sum sigma^z_i sigma^z_{i+2} (XXZ, HS).
PauliSum control_operators(const ModelSpec& spec);

// AGP ansatz basis; each element multiplies one alpha_j.
std::vector<PauliSum> ansatz_basis(AnsatzKind kind, const ModelSpec& spec);

// H_0(t) = H_i + lambda (H_f - H_i).
PauliSum bare_hamiltonian(const ModelSpec& spec, const ScheduleContext& ctx);

}  // namespace cold
