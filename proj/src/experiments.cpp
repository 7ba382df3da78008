#include "cold/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace cold {

ProtocolKind protocol_from_string(const std::string& s) {
    if (s == "ua" || s == "UA") return ProtocolKind::UA;
    if (s == "qoc" || s == "QOC") return ProtocolKind::QOC;
    if (s == "lcd" || s == "LCD") return ProtocolKind::LCD;
    if (s == "cold" || s == "COLD") return ProtocolKind::COLD;
    throw std::invalid_argument("unknown protocol: " + s);
}

std::string to_string(ProtocolKind p) {
    switch (p) {
        case ProtocolKind::UA: return "ua";
        case ProtocolKind::QOC: return "qoc";
        case ProtocolKind::LCD: return "lcd";
        case ProtocolKind::COLD: return "cold";
    }
    return "?";
}

CostKind cost_kind_from_string(const std::string& s) {
    if (s == "energy") return CostKind::Energy;
    if (s == "infidelity") return CostKind::Infidelity;
    throw std::invalid_argument("unknown cost kind: " + s);
}

std::string to_string(CostKind c) {
    return c == CostKind::Energy ? "energy" : "infidelity";
}

ProtocolHamiltonian::ProtocolHamiltonian(const ModelSpec& model, const DriveSpec& drive,
                                         ProtocolKind protocol, AnsatzKind ansatz,
                                         double agp_reg)
    : model_(model),
      drive_(drive),
      use_pulse_(protocol == ProtocolKind::QOC || protocol == ProtocolKind::COLD),
      use_cd_(protocol == ProtocolKind::LCD || protocol == ProtocolKind::COLD),
      agp_reg_(agp_reg) {
    model.validate();
    drive.validate();
    PauliSum hi = build_initial_hamiltonian(model.n_sites);
    h_final_ = build_final_hamiltonian(model);
    PauliSum diff = h_final_ - hi;
    diff.prune();
    PauliSum o_opt = use_pulse_ ? control_operators(model) : PauliSum(model.n_sites);

    c_hi_ = CompiledPauliSum(hi);
    c_diff_ = CompiledPauliSum(diff);
    c_opt_ = CompiledPauliSum(o_opt);
    if (use_cd_) {
        auto basis = ansatz_basis(ansatz, model);
        structure_ = AgpStructure::build(hi, h_final_, o_opt, basis);
        for (const auto& o : basis) c_basis_.emplace_back(o);
    }
}

ScheduleContext ProtocolHamiltonian::context(double t) const {
    return make_context(t, drive_, use_pulse_);
}

Eigen::VectorXd ProtocolHamiltonian::alpha(const ScheduleContext& ctx) const {
    double reg = agp_reg_ >= 0 ? agp_reg_ : structure_.default_regularization(ctx);
    return structure_.solve_alpha(ctx, reg);
}

void ProtocolHamiltonian::apply(double t, const StateVector& in, StateVector& out) const {
    ScheduleContext ctx = context(t);
    out.setZero(in.size());
    c_hi_.accumulate(in, out, 1.0);
    c_diff_.accumulate(in, out, ctx.lambda);
    if (use_pulse_ && ctx.f != 0) c_opt_.accumulate(in, out, ctx.f);
    if (use_cd_) {
        Eigen::VectorXd a = alpha(ctx);
        for (size_t j = 0; j < c_basis_.size(); ++j)
            if (a(int(j)) != 0) c_basis_[j].accumulate(in, out, a(int(j)));
    }
}

StateVector plus_state(int n) {
    int64_t d = int64_t(1) << n;
    return StateVector::Constant(d, Complex(std::pow(2.0, -0.5 * n), 0));
}

uint64_t derive_seed(const std::string& digest, uint64_t index) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (char c : digest) {
        h ^= uint64_t(uint8_t(c));
        h *= 0x100000001b3ull;
    }
    h ^= index + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0x100000001b3ull;
    return h;
}

std::string settings_digest(const RunSettings& s) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(s.model.family) << "," << s.model.n_sites << "," << s.model.p1 << ","
       << s.model.p2 << "," << (s.model.boundary == Boundary::Periodic ? "p" : "o") << ","
       << s.drive.tau << "," << s.drive.n_k() << "," << to_string(s.protocol) << ","
       << to_string(s.ansatz) << "," << to_string(s.cost) << "," << s.optimizer.seed << ","
       << s.optimizer.n_init << "," << s.optimizer.n_iter << "," << s.steps << ","
       << s.optimize_beta << "," << s.use_powell;
    for (double b : s.drive.beta) os << "," << b;
    uint64_t h = derive_seed(os.str(), 0);
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

namespace {

// The target spectrum does not depend on the pulse, so it is diagonalized
// once per run and shared across every optimizer evaluation.
struct Target {
    SpectralSummary spectrum;
    CompiledPauliSum h_final;
};

Target prepare_target(const RunSettings& s) {
    PauliSum h_final = build_final_hamiltonian(s.model);
    return {diagonalize(h_final), CompiledPauliSum(h_final)};
}

ProtocolHamiltonian prepare_hamiltonian(const RunSettings& s,
                                        const std::vector<double>& beta) {
    DriveSpec drive = s.drive;
    drive.beta = beta;
    return ProtocolHamiltonian(s.model, drive, s.protocol, s.ansatz, s.agp_reg);
}

struct Metrics {
    double fidelity;
    double epsilon;
};

Metrics measure(const RunSettings& s, const Target& t, const StateVector& psi) {
    double f = s.subspace_fidelity ? subspace_fidelity(psi, t.spectrum)
                                   : fidelity(psi, t.spectrum.ground);
    double eps = normalized_energy(psi, t.h_final, t.spectrum);
    return {f, eps};
}

}  // namespace

RunResult run_protocol(const RunSettings& settings) {
    RunResult result;
    result.settings = settings;
    result.seed = settings.optimizer.seed;
    result.config_digest = settings_digest(settings);
    auto t0 = std::chrono::steady_clock::now();
    try {
        const bool needs_beta = (settings.protocol == ProtocolKind::QOC ||
                                 settings.protocol == ProtocolKind::COLD) &&
                                settings.optimize_beta;
        std::vector<double> beta(size_t(settings.drive.n_k()), 0.0);
        if (settings.protocol == ProtocolKind::QOC || settings.protocol == ProtocolKind::COLD)
            beta = settings.drive.beta;

        const Target target = prepare_target(settings);
        const StateVector psi0 = plus_state(settings.model.n_sites);

        if (needs_beta) {
            const int d = settings.drive.n_k();
            auto cost_at = [&](const Eigen::VectorXd& b) {
                std::vector<double> bv(b.data(), b.data() + b.size());
                ProtocolHamiltonian ham = prepare_hamiltonian(settings, bv);
                EvolveOptions opts;
                opts.fixed_steps = true;
                opts.initial_steps = settings.steps;
                StateVector psi = evolve(ham, psi0, settings.drive.tau, opts);
                Metrics m = measure(settings, target, psi);
                return settings.cost == CostKind::Energy ? m.epsilon : 1.0 - m.fidelity;
            };
            OptimizationTrace trace;
            if (settings.use_powell) {
                trace = powell_minimize(cost_at, Eigen::VectorXd::Zero(d));
            } else {
                // beta = 0 is always probed, so COLD never loses to LCD
                // under the same cost and budget.
                trace = bayesian_minimize(cost_at, settings.space, settings.optimizer,
                                          {Eigen::VectorXd::Zero(d)});
            }
            beta.assign(trace.best_x.data(), trace.best_x.data() + trace.best_x.size());
            result.cost_star = trace.best_cost;
            result.trace = std::move(trace);
        }

        ProtocolHamiltonian ham = prepare_hamiltonian(settings, beta);
        EvolveOptions opts;
        opts.tol = settings.final_tol;
        opts.initial_steps = settings.steps;
        StateVector psi = evolve(ham, psi0, settings.drive.tau, opts);
        Metrics m = measure(settings, target, psi);
        result.fidelity = m.fidelity;
        result.epsilon = m.epsilon;
        result.beta_star = beta;
        if (!result.trace)
            result.cost_star =
                settings.cost == CostKind::Energy ? m.epsilon : 1.0 - m.fidelity;
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string RunResult::to_json() const {
    nlohmann::json j;
    j["model"] = {{"family", to_string(settings.model.family)},
                  {"n", settings.model.n_sites},
                  {"p1", settings.model.p1},
                  {"p2", settings.model.p2},
                  {"boundary",
                   settings.model.boundary == Boundary::Periodic ? "periodic" : "open"}};
    j["drive"] = {{"tau", settings.drive.tau}, {"n_k", settings.drive.n_k()}};
    j["protocol"] = to_string(settings.protocol);
    j["ansatz"] = to_string(settings.ansatz);
    j["cost"] = to_string(settings.cost);
    j["fidelity"] = fidelity;
    j["epsilon"] = epsilon;
    j["beta_star"] = beta_star;
    j["cost_star"] = cost_star;
    j["seed"] = seed;
    j["wall_time_s"] = wall_time_s;
    j["config_digest"] = config_digest;
    if (!error.empty()) j["error"] = error;
    return j.dump();
}

double success_ratio(double f_cold, double f_ua) {
    if (f_ua == 0) return std::numeric_limits<double>::infinity();
    return f_cold / f_ua;
}

SweepGrid sweep(const RunSettings& base, const SweepAxis& axis1, const SweepAxis& axis2,
                const std::vector<ProtocolKind>& protocols, int jobs,
                const std::function<bool(int i, int j)>& skip) {
    SweepGrid grid;
    grid.axis1 = axis1;
    grid.axis2 = axis2;
    grid.protocols = protocols;
    const int n1 = int(axis1.values.size()), n2 = int(axis2.values.size());
    grid.cells.resize(size_t(n1) * size_t(n2));
    const std::string digest = settings_digest(base);

    auto set_param = [](ModelSpec& m, const std::string& name, double v) {
        if (name == "p1")
            m.p1 = v;
        else if (name == "p2")
            m.p2 = v;
        else
            throw std::invalid_argument("sweep: unknown axis parameter " + name);
    };

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int idx = next.fetch_add(1);
            if (idx >= n1 * n2) return;
            int i = idx / n2, j = idx % n2;
            SweepCell& cell = grid.cells[size_t(idx)];
            cell.i = i;
            cell.j = j;
            cell.axis1 = axis1.values[size_t(i)];
            cell.axis2 = axis2.values[size_t(j)];
            if (skip && skip(i, j)) continue;
            for (ProtocolKind proto : protocols) {
                RunSettings s = base;
                s.protocol = proto;
                set_param(s.model, axis1.name, cell.axis1);
                set_param(s.model, axis2.name, cell.axis2);
                s.optimizer.seed = derive_seed(digest, uint64_t(idx));
                cell.results.push_back(run_protocol(s));
            }
        }
    };

    if (jobs < 1) jobs = int(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, n1 * n2));
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return grid;
}

std::vector<InheritRow> inherit_study(const RunSettings& base, int source_n,
                                      const std::vector<int>& targets) {
    RunSettings src = base;
    src.model.n_sites = source_n;
    RunResult source = run_protocol(src);
    if (!source.ok()) throw std::runtime_error("inherit_study: source run failed: " + source.error);

    std::vector<InheritRow> rows;
    for (int n : targets) {
        InheritRow row;
        row.n = n;

        RunSettings inh = base;
        inh.model.n_sites = n;
        inh.optimize_beta = false;
        inh.drive.beta = source.beta_star;
        RunResult r1 = run_protocol(inh);
        if (!r1.ok()) throw std::runtime_error("inherit_study: " + r1.error);
        row.beta_inherited = source.beta_star.empty() ? 0 : source.beta_star[0];
        row.fidelity_inherited = r1.fidelity;

        RunSettings ind = base;
        ind.model.n_sites = n;
        RunResult r2 = run_protocol(ind);
        if (!r2.ok()) throw std::runtime_error("inherit_study: " + r2.error);
        row.beta_independent = r2.beta_star.empty() ? 0 : r2.beta_star[0];
        row.fidelity_independent = r2.fidelity;
        rows.push_back(row);
    }
    return rows;
}

AdiabaticBoundResult adiabatic_bound(const ModelSpec& model, double delta,
                                     int grid_points, double gap_tol) {
    if (grid_points < 2) throw std::invalid_argument("adiabatic_bound: grid too small");
    if (!(delta > 0)) throw std::invalid_argument("adiabatic_bound: delta must be > 0");
    PauliSum hi = build_initial_hamiltonian(model.n_sites);
    PauliSum hf = build_final_hamiltonian(model);
    PauliSum diff = hf - hi;
    diff.prune();
    Eigen::MatrixXcd d_mat = to_matrix(diff);
    double d_norm = d_mat.operatorNorm();

    AdiabaticBoundResult out;
    out.min_gap = std::numeric_limits<double>::infinity();
    std::vector<double> integrand(size_t(grid_points), 0.0);
    for (int i = 0; i < grid_points; ++i) {
        double s = double(i) / (grid_points - 1);
        auto d1 = schedule_derivatives(s, 1.0);
        ScheduleContext ctx;
        ctx.lambda = d1.lambda;
        PauliSum h = hi + ctx.lambda * diff;
        SpectralSummary spec = diagonalize(h);
        double gap = spec.gap;
        if (gap < out.min_gap) {
            out.min_gap = gap;
            out.min_gap_s = s;
        }
        if (gap < gap_tol) {
            out.divergent = true;
            continue;
        }
        double n1 = std::abs(d1.lambda_dot) * d_norm;
        double n2 = std::abs(d1.lambda_ddot) * d_norm;
        integrand[size_t(i)] = n2 / (gap * gap) + 7 * n1 * n1 / (gap * gap * gap);
    }
    if (out.divergent) return out;
    double acc = 0;
    double ds = 1.0 / (grid_points - 1);
    for (int i = 0; i + 1 < grid_points; ++i)
        acc += 0.5 * (integrand[size_t(i)] + integrand[size_t(i + 1)]) * ds;
    out.bound_minus_b = acc / delta;
    return out;
}

}  // namespace cold
