#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cold/agp.hpp"
#include "cold/dynamics.hpp"
#include "cold/models.hpp"
#include "cold/optimize.hpp"

namespace cold {

enum class ProtocolKind { UA, QOC, LCD, COLD };
enum class CostKind { Energy, Infidelity };

ProtocolKind protocol_from_string(const std::string& s);
std::string to_string(ProtocolKind p);
CostKind cost_kind_from_string(const std::string& s);
std::string to_string(CostKind c);

struct RunSettings {
    ModelSpec model;
    DriveSpec drive;
    ProtocolKind protocol = ProtocolKind::UA;
    AnsatzKind ansatz = AnsatzKind::Next;
    CostKind cost = CostKind::Energy;
    OptimizerConfig optimizer;
    SearchSpace space = SearchSpace::box(1, -10.0, 10.0);
    bool optimize_beta = true;       // QOC/COLD: optimize beta over `space`
    bool use_powell = false;         // baseline optimizer instead of BO
    bool subspace_fidelity = false;  // degenerate-target convention
    int steps = 1000;                // inner-loop integrator resolution
    double agp_reg = -1;             // <0: default 1e-12 tr(M)/m
    double final_tol = 1e-8;         // refinement contract for the reported run
};

struct RunResult {
    RunSettings settings;
    double fidelity = 0;
    double epsilon = 0;
    std::vector<double> beta_star;
    double cost_star = 0;
    uint64_t seed = 0;
    double wall_time_s = 0;
    std::string config_digest;
    std::string error;  // non-empty if the run failed
    std::optional<OptimizationTrace> trace;

    bool ok() const { return error.empty(); }
    std::string to_json() const;
};

// The full protocol Hamiltonian
//   H(t) = H_i + lambda (H_f - H_i) + f O_opt + sum_j alpha_j(t) O_j
// with alpha solved lazily at the integrator's own nodes.
class ProtocolHamiltonian : public TimeDependentHamiltonian {
public:
    ProtocolHamiltonian(const ModelSpec& model, const DriveSpec& drive,
                        ProtocolKind protocol, AnsatzKind ansatz, double agp_reg = -1);

    void apply(double t, const StateVector& in, StateVector& out) const override;
    int64_t dim() const override { return int64_t(1) << model_.n_sites; }

    ScheduleContext context(double t) const;
    Eigen::VectorXd alpha(const ScheduleContext& ctx) const;
    const AgpStructure& structure() const { return structure_; }
    const PauliSum& final_hamiltonian() const { return h_final_; }
    bool uses_pulse() const { return use_pulse_; }
    bool uses_cd() const { return use_cd_; }

private:
    ModelSpec model_;
    DriveSpec drive_;
    bool use_pulse_, use_cd_;
    double agp_reg_;
    PauliSum h_final_;
    CompiledPauliSum c_hi_, c_diff_, c_opt_;
    std::vector<CompiledPauliSum> c_basis_;
    AgpStructure structure_;
};

// Uniform |+>^N, the ground state of -sum sigma^x.
StateVector plus_state(int n);

// Executes one protocol end to end. Optimizer aborts and integrator failures
// land in RunResult::error instead of propagating.
RunResult run_protocol(const RunSettings& settings);

// R = F_COLD / F_UA; infinity sentinel when f_ua == 0.
double success_ratio(double f_cold, double f_ua);

struct SweepAxis {
    std::string name;  // "p1" or "p2"
    std::vector<double> values;
};

struct SweepCell {
    int i = 0, j = 0;
    double axis1 = 0, axis2 = 0;
    std::vector<RunResult> results;  // one per requested protocol
};

struct SweepGrid {
    SweepAxis axis1, axis2;
    std::vector<ProtocolKind> protocols;
    std::vector<SweepCell> cells;
};

// Evaluates every grid cell for each protocol; per-cell seeds derive
// deterministically from (digest, cell index). Failures are recorded per
// cell and the sweep continues. `skip` lets the CLI resume a partial sweep.
SweepGrid sweep(const RunSettings& base, const SweepAxis& axis1, const SweepAxis& axis2,
                const std::vector<ProtocolKind>& protocols, int jobs,
                const std::function<bool(int i, int j)>& skip = nullptr);

struct InheritRow {
    int n = 0;
    double beta_inherited = 0;
    double fidelity_inherited = 0;
    double beta_independent = 0;
    double fidelity_independent = 0;
};

// Optimizes at source_n, then re-runs each target size with the inherited
// beta and with a fresh independent optimization.
std::vector<InheritRow> inherit_study(const RunSettings& base, int source_n,
                                      const std::vector<int>& targets);

struct AdiabaticBoundResult {
    double bound_minus_b = 0;  // integral term only; the additive constant is unknown
    bool divergent = false;
    double min_gap = 0;
    double min_gap_s = 0;
};

// Integrates || d^2H/ds^2 || / gap^2 + 7 || dH/ds ||^2 / gap^3 over s in [0,1]
// (trapezoid on the grid) and divides by delta. Spectral norms and gaps come
// from dense diagonalization at every node.
AdiabaticBoundResult adiabatic_bound(const ModelSpec& model, double delta,
                                     int grid_points, double gap_tol = 1e-9);

// Per-cell seed for parallel sweeps: order-independent and reproducible.
uint64_t derive_seed(const std::string& digest, uint64_t index);

// FNV-1a content hash of a canonical settings rendering.
std::string settings_digest(const RunSettings& s);

}  // namespace cold
