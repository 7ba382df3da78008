#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cold/models.hpp"
#include "cold/pauli.hpp"

namespace cold {

// Precomputed commutator/trace tables for the variational gauge-potential solve.
//
// With H_beta(t) = H_i + lambda (H_f - H_i) + f O_opt and basis elements O_j,
// each C_j(t) = i [O_j, H_beta(t)] decomposes as
//     C_j = c_const_j + lambda c_lambda_j + f c_fctrl_j,
// so the Gram matrix M_jk(t) = Tr[C_j C_k] is a bivariate quadratic in
// (lambda, f) and the right-hand side b_j(t) = Tr[C_j dH/dt] is linear in
// (lambda_dot, f_dot) with coefficients linear in (lambda, f). All traces are
// taken once at build time; evaluation per time point is O(m^2) scalar work.
class AgpStructure {
public:
    AgpStructure() = default;

    static AgpStructure build(const PauliSum& h_i, const PauliSum& h_f,
                              const PauliSum& o_opt,
                              const std::vector<PauliSum>& basis);

    int basis_size() const { return m_; }
    const std::vector<PauliSum>& basis() const { return basis_; }

    // Rows/columns of M that vanish identically (basis element commuting with
    // the whole H_beta family); flagged, not fatal.
    const std::vector<int>& degenerate_rows() const { return degenerate_; }

    Eigen::MatrixXd gram(const ScheduleContext& ctx) const;
    Eigen::VectorXd rhs(const ScheduleContext& ctx) const;
    // Tr[(dH/dt)^2], the alpha-independent part of the action.
    double dh_norm_sq(const ScheduleContext& ctx) const;

    // Solves (M + reg I) alpha = -b. If reg == 0 and M is numerically
    // singular, falls back to the minimum-norm least-squares solution.
    Eigen::VectorXd solve_alpha(const ScheduleContext& ctx, double reg) const;

    // Default Tikhonov floor: 1e-12 * trace(M) / m at the given context.
    double default_regularization(const ScheduleContext& ctx) const;

    // S(alpha) = Tr[(dH/dt + sum_j alpha_j C_j)^2] >= 0.
    double action_value(const ScheduleContext& ctx, const Eigen::VectorXd& alpha) const;

    // A(t) = sum_j alpha_j O_j.
    PauliSum cd_term(const Eigen::VectorXd& alpha) const;

    // Human-readable polynomial tables, for the `agp` CLI dump.
    std::string describe() const;

private:
    int m_ = 0;
    std::vector<PauliSum> basis_;
    std::vector<int> degenerate_;
    // M(lambda, f) = K_cc + lambda K_cl + f K_cf + lambda^2 K_ll
    //              + lambda f K_lf + f^2 K_ff   (K_cl, K_cf, K_lf symmetrized)
    Eigen::MatrixXd k_cc_, k_cl_, k_cf_, k_ll_, k_lf_, k_ff_;
    // b = lambda_dot (bd_c + lambda bd_l + f bd_f)
    //   + f_dot      (bo_c + lambda bo_l + f bo_f)
    Eigen::VectorXd bd_c_, bd_l_, bd_f_, bo_c_, bo_l_, bo_f_;
    // Tr[D^2], Tr[D O_opt], Tr[O_opt^2] for the action constant.
    double tdd_ = 0, tdo_ = 0, too_ = 0;
};

// Per-node gauge-potential coefficients along a protocol.
struct AlphaTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> alphas;
};

AlphaTrajectory tabulate_alpha(const AgpStructure& s, const DriveSpec& drive,
                               bool with_pulse, int grid_points, double reg);

}  // namespace cold
