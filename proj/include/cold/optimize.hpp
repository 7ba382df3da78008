#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace cold {

using CostFunction = std::function<double(const Eigen::VectorXd&)>;

struct SearchSpace {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int dim() const { return int(lower.size()); }
    void validate() const;

    static SearchSpace box(int d, double lo, double hi);
};

struct OptimizerConfig {
    uint64_t seed = 1;
    int n_init = 8;   // space-filling samples
    int n_iter = 42;  // acquisition rounds
    double noise_floor = 1e-10;
    int ei_candidates = 1024;

    void validate() const;
};

struct OptimizationTrace {
    std::vector<std::pair<Eigen::VectorXd, double>> evaluations;
    Eigen::VectorXd best_x;
    double best_cost = 0;

    void record(const Eigen::VectorXd& x, double c);
};

// Gaussian-process surrogate (squared-exponential kernel on normalized
// coordinates, length-scale by maximum likelihood over a grid) with
// expected-improvement acquisition maximized over a seeded candidate set.
// Deterministic for a fixed (seed, space, cfg, cost). Extra initial probes
// (e.g. beta = 0) can be injected ahead of the space-filling design.
OptimizationTrace bayesian_minimize(const CostFunction& cost, const SearchSpace& space,
                                    const OptimizerConfig& cfg,
                                    const std::vector<Eigen::VectorXd>& extra_initial = {});

// Classic direction-set minimization with Brent line searches.
OptimizationTrace powell_minimize(const CostFunction& cost, const Eigen::VectorXd& x0,
                                  int max_iters = 60, double ftol = 1e-8);

}  // namespace cold
