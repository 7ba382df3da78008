// Command-line front end: single runs, parameter sweeps, reference-table
// reproduction, gauge-potential inspection, and spectral diagnostics.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 runtime failure.
// `reproduce` additionally exits 1 when any table cell misses its tolerance.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cold/agp.hpp"
#include "cold/dynamics.hpp"
#include "cold/experiments.hpp"
#include "cold/models.hpp"
#include "cold/tables.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV number format: '.' decimal, scientific notation for small magnitudes.
std::string fmt_csv(double x) {
    std::ostringstream os;
    if (x != 0 && std::abs(x) < 1e-3)
        os << std::scientific << std::setprecision(9) << x;
    else
        os << std::setprecision(10) << x;
    return os.str();
}

void require_keys(const json& j, const std::string& block,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError("config block '" + block + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in block '" + block + "'");
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    require_keys(j, "<root>",
                 {"model", "drive", "protocol", "output", "sweep", "spectrum", "agp"});
    return j;
}

struct CliOverrides {
    std::optional<uint64_t> seed;
    std::optional<std::string> boundary;
    bool subspace_fidelity = false;
    std::string out_dir;  // resolved default applied in resolve_out_dir
    int jobs = 0;
};

cold::RunSettings settings_from_config(const json& cfg, const CliOverrides& ov) {
    cold::RunSettings s;
    if (cfg.contains("model")) {
        const json& m = cfg.at("model");
        require_keys(m, "model", {"family", "n", "p1", "p2", "boundary"});
        if (m.contains("family"))
            s.model.family = cold::model_family_from_string(m.at("family").get<std::string>());
        s.model.boundary = cold::ModelSpec::default_boundary(s.model.family);
        if (m.contains("n")) s.model.n_sites = m.at("n").get<int>();
        if (m.contains("p1")) s.model.p1 = m.at("p1").get<double>();
        if (m.contains("p2")) s.model.p2 = m.at("p2").get<double>();
        if (m.contains("boundary")) {
            std::string b = m.at("boundary").get<std::string>();
            if (b != "open" && b != "periodic")
                throw ConfigError("model.boundary must be 'open' or 'periodic'");
            s.model.boundary = b == "open" ? cold::Boundary::Open : cold::Boundary::Periodic;
        }
    } else {
        s.model.boundary = cold::ModelSpec::default_boundary(s.model.family);
    }
    if (cfg.contains("drive")) {
        const json& d = cfg.at("drive");
        require_keys(d, "drive", {"tau", "n_k", "beta"});
        if (d.contains("tau")) s.drive.tau = d.at("tau").get<double>();
        int n_k = d.contains("n_k") ? d.at("n_k").get<int>() : 1;
        if (n_k < 1) throw ConfigError("drive.n_k must be >= 1");
        s.drive.beta.assign(size_t(n_k), 0.0);
        s.optimize_beta = true;
        if (d.contains("beta")) {
            const json& b = d.at("beta");
            if (b.is_string()) {
                if (b.get<std::string>() != "optimize")
                    throw ConfigError("drive.beta must be an array or \"optimize\"");
            } else if (b.is_array()) {
                s.drive.beta = b.get<std::vector<double>>();
                if (d.contains("n_k") && int(s.drive.beta.size()) != n_k)
                    throw ConfigError("drive.beta length disagrees with drive.n_k");
                s.optimize_beta = false;
            } else {
                throw ConfigError("drive.beta must be an array or \"optimize\"");
            }
        }
        s.space = cold::SearchSpace::box(int(s.drive.beta.size()), -10.0, 10.0);
    }
    if (cfg.contains("protocol")) {
        const json& p = cfg.at("protocol");
        require_keys(p, "protocol",
                     {"kind", "ansatz", "cost", "seed", "n_init", "n_iter", "use_powell",
                      "subspace_fidelity", "steps", "space", "agp_reg", "final_tol"});
        if (p.contains("kind"))
            s.protocol = cold::protocol_from_string(p.at("kind").get<std::string>());
        if (p.contains("ansatz"))
            s.ansatz = cold::ansatz_kind_from_string(p.at("ansatz").get<std::string>());
        if (p.contains("cost"))
            s.cost = cold::cost_kind_from_string(p.at("cost").get<std::string>());
        if (p.contains("seed")) s.optimizer.seed = p.at("seed").get<uint64_t>();
        if (p.contains("n_init")) s.optimizer.n_init = p.at("n_init").get<int>();
        if (p.contains("n_iter")) s.optimizer.n_iter = p.at("n_iter").get<int>();
        if (p.contains("use_powell")) s.use_powell = p.at("use_powell").get<bool>();
        if (p.contains("subspace_fidelity"))
            s.subspace_fidelity = p.at("subspace_fidelity").get<bool>();
        if (p.contains("steps")) s.steps = p.at("steps").get<int>();
        if (p.contains("agp_reg")) s.agp_reg = p.at("agp_reg").get<double>();
        if (p.contains("final_tol")) s.final_tol = p.at("final_tol").get<double>();
        if (p.contains("space")) {
            auto box = p.at("space").get<std::vector<double>>();
            if (box.size() != 2 || !(box[0] < box[1]))
                throw ConfigError("protocol.space must be [lower, upper]");
            s.space = cold::SearchSpace::box(int(s.drive.beta.size()), box[0], box[1]);
        }
    }
    if (ov.seed) s.optimizer.seed = *ov.seed;
    if (ov.boundary) {
        s.model.boundary =
            *ov.boundary == "open" ? cold::Boundary::Open : cold::Boundary::Periodic;
    }
    if (ov.subspace_fidelity) s.subspace_fidelity = true;
    try {
        s.model.validate();
        s.drive.validate();
        s.optimizer.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return s;
}

fs::path resolve_out_dir(const json& cfg, const CliOverrides& ov) {
    if (!ov.out_dir.empty()) return ov.out_dir;
    if (cfg.contains("output")) {
        const json& o = cfg.at("output");
        require_keys(o, "output", {"directory", "dump_trajectory", "dump_trace"});
        if (o.contains("directory")) return o.at("directory").get<std::string>();
    }
    if (const char* env = std::getenv("COLD_OUT_DIR")) return env;
    return ".";
}

bool output_flag(const json& cfg, const std::string& name) {
    return cfg.contains("output") && cfg.at("output").contains(name) &&
           cfg.at("output").at(name).get<bool>();
}

void write_text(const fs::path& path, const std::string& body) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

// ---------------------------------------------------------------- run

void dump_trajectory(const cold::RunSettings& s, const std::vector<double>& beta,
                     const fs::path& path, const std::string& digest) {
    cold::DriveSpec drive = s.drive;
    drive.beta = beta;
    cold::ProtocolHamiltonian ham(s.model, drive, s.protocol, s.ansatz, s.agp_reg);
    cold::CompiledPauliSum h_final(ham.final_hamiltonian());
    int m = ham.uses_cd() ? ham.structure().basis_size() : 0;

    std::ostringstream os;
    os << "# digest=" << digest << "\n";
    os << "t,lambda,f";
    for (int j = 0; j < m; ++j) os << ",alpha_" << j;
    os << ",energy,norm\n";
    cold::EvolveOptions opts;
    opts.tol = s.final_tol;
    opts.initial_steps = s.steps;
    opts.observer = [&](double t, const cold::StateVector& psi) {
        cold::ScheduleContext ctx = ham.context(t);
        os << fmt_csv(t) << "," << fmt_csv(ctx.lambda) << "," << fmt_csv(ctx.f);
        if (m > 0) {
            Eigen::VectorXd a = ham.alpha(ctx);
            for (int j = 0; j < m; ++j) os << "," << fmt_csv(a(j));
        }
        os << "," << fmt_csv(h_final.expectation(psi).real()) << ","
           << fmt_csv(psi.norm()) << "\n";
    };
    cold::evolve(ham, cold::plus_state(s.model.n_sites), s.drive.tau, opts);
    write_text(path, os.str());
}

int cmd_run(const json& cfg, const CliOverrides& ov) {
    cold::RunSettings s = settings_from_config(cfg, ov);
    fs::path out_dir = resolve_out_dir(cfg, ov);
    cold::RunResult r = cold::run_protocol(s);
    if (!r.ok()) {
        std::cerr << "run failed: " << r.error << "\n";
        return 3;
    }
    fs::path json_path = out_dir / ("run_" + r.config_digest + ".json");
    write_text(json_path, r.to_json() + "\n");
    if (output_flag(cfg, "dump_trajectory"))
        dump_trajectory(s, r.beta_star, out_dir / ("trajectory_" + r.config_digest + ".csv"),
                        r.config_digest);
    std::cout << "F=" << r.fidelity << " eps=" << r.epsilon << " beta*=[";
    for (size_t i = 0; i < r.beta_star.size(); ++i)
        std::cout << (i ? "," : "") << r.beta_star[i];
    std::cout << "] digest=" << r.config_digest << " -> " << json_path.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- sweep

std::vector<double> axis_values(const json& a, const std::string& block) {
    require_keys(a, block, {"name", "min", "max", "count", "values"});
    if (a.contains("values")) return a.at("values").get<std::vector<double>>();
    if (!a.contains("min") || !a.contains("max") || !a.contains("count"))
        throw ConfigError(block + ": need values or min/max/count");
    double lo = a.at("min").get<double>(), hi = a.at("max").get<double>();
    int n = a.at("count").get<int>();
    if (n < 1) throw ConfigError(block + ".count must be >= 1");
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        v.push_back(n == 1 ? lo : lo + (hi - lo) * double(i) / (n - 1));
    return v;
}

// Minimal scalable heatmap: one rect per cell plus a numeric color bar.
std::string render_heatmap_svg(const cold::SweepGrid& grid,
                               const std::vector<std::vector<double>>& value,
                               const std::string& title, bool log_scale) {
    const int n1 = int(grid.axis1.values.size()), n2 = int(grid.axis2.values.size());
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    auto xform = [&](double v) {
        if (!std::isfinite(v)) return std::nan("");
        return log_scale ? std::log10(std::max(v, 1e-300)) : v;
    };
    for (const auto& row : value)
        for (double v : row) {
            double t = xform(v);
            if (std::isnan(t)) continue;
            vmin = std::min(vmin, t);
            vmax = std::max(vmax, t);
        }
    if (!(vmax > vmin)) vmax = vmin + 1;

    auto color = [&](double v) -> std::string {
        double t = xform(v);
        if (std::isnan(t)) return "#888888";
        double u = std::clamp((t - vmin) / (vmax - vmin), 0.0, 1.0);
        // dark blue -> teal -> yellow ramp
        int r = int(255 * std::clamp(2 * u - 0.8, 0.0, 1.0));
        int g = int(255 * std::clamp(1.3 * u, 0.0, 1.0));
        int b = int(255 * std::clamp(1.0 - 1.2 * u, 0.1, 1.0));
        std::ostringstream os;
        os << "#" << std::hex << std::setfill('0') << std::setw(2) << r << std::setw(2)
           << g << std::setw(2) << b;
        return os.str();
    };

    const int cell = 28, margin = 70, bar_w = 24;
    const int width = margin * 2 + n1 * cell + bar_w + 80;
    const int height = margin * 2 + n2 * cell;
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
       << height << "'>\n";
    os << "<text x='" << margin << "' y='20' font-size='14'>" << title
       << (log_scale ? " (log10 scale)" : "") << "</text>\n";
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            // axis2 increases upward
            int x = margin + i * cell;
            int y = margin + (n2 - 1 - j) * cell;
            os << "<rect x='" << x << "' y='" << y << "' width='" << cell << "' height='"
               << cell << "' fill='" << color(value[size_t(i)][size_t(j)]) << "'><title>"
               << grid.axis1.name << "=" << grid.axis1.values[size_t(i)] << " "
               << grid.axis2.name << "=" << grid.axis2.values[size_t(j)] << " value="
               << value[size_t(i)][size_t(j)] << "</title></rect>\n";
        }
    // numeric color scale
    const int bar_x = margin + n1 * cell + 20, bar_h = n2 * cell;
    for (int k = 0; k < bar_h; ++k) {
        double t = vmin + (vmax - vmin) * (1.0 - double(k) / (bar_h - 1));
        double v = log_scale ? std::pow(10.0, t) : t;
        os << "<rect x='" << bar_x << "' y='" << margin + k << "' width='" << bar_w
           << "' height='2' fill='" << color(v) << "'/>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        double t = vmin + (vmax - vmin) * (1.0 - k / 4.0);
        os << "<text x='" << bar_x + bar_w + 4 << "' y='"
           << margin + int(k / 4.0 * (bar_h - 1)) + 5 << "' font-size='11'>"
           << std::setprecision(4) << t << (log_scale ? " (log10)" : "") << "</text>\n";
    }
    os << "<text x='" << margin << "' y='" << height - 8 << "' font-size='12'>"
       << grid.axis1.name << " -></text>\n";
    os << "</svg>\n";
    return os.str();
}

int cmd_sweep(const json& cfg, const CliOverrides& ov) {
    if (!cfg.contains("sweep")) throw ConfigError("sweep: missing 'sweep' block");
    const json& sw = cfg.at("sweep");
    require_keys(sw, "sweep", {"axis1", "axis2", "protocols", "metrics"});
    if (!sw.contains("axis1") || !sw.contains("axis2"))
        throw ConfigError("sweep: need axis1 and axis2");

    cold::RunSettings base = settings_from_config(cfg, ov);
    cold::SweepAxis a1, a2;
    a1.name = sw.at("axis1").value("name", "p1");
    a2.name = sw.at("axis2").value("name", "p2");
    a1.values = axis_values(sw.at("axis1"), "sweep.axis1");
    a2.values = axis_values(sw.at("axis2"), "sweep.axis2");
    std::vector<cold::ProtocolKind> protos{cold::ProtocolKind::UA, cold::ProtocolKind::COLD};
    if (sw.contains("protocols")) {
        protos.clear();
        for (const auto& p : sw.at("protocols"))
            protos.push_back(cold::protocol_from_string(p.get<std::string>()));
    }
    std::vector<std::string> metrics{"F_COLD", "R"};
    if (sw.contains("metrics")) metrics = sw.at("metrics").get<std::vector<std::string>>();

    fs::path out_dir = resolve_out_dir(cfg, ov);
    const std::string digest = cold::settings_digest(base);
    fs::path jsonl_path = out_dir / ("sweep_" + digest + ".jsonl");

    // Resumption: previously completed cells are reloaded, not recomputed.
    std::map<std::pair<int, int>, json> done;
    if (fs::exists(jsonl_path)) {
        std::ifstream in(jsonl_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json c = json::parse(line, nullptr, false);
            if (c.is_discarded() || !c.contains("i") || !c.contains("j")) continue;
            done[{c["i"].get<int>(), c["j"].get<int>()}] = c;
        }
        if (!done.empty())
            std::cout << "resuming sweep " << digest << ": " << done.size()
                      << " cells already complete\n";
    }
    auto skip = [&](int i, int j) { return done.count({i, j}) > 0; };

    cold::SweepGrid grid = cold::sweep(base, a1, a2, protos, ov.jobs, skip);

    // Merge fresh results into the cell map and persist everything.
    for (const auto& cell : grid.cells) {
        if (cell.results.empty()) continue;
        json c;
        c["i"] = cell.i;
        c["j"] = cell.j;
        c["axis1"] = cell.axis1;
        c["axis2"] = cell.axis2;
        json rs = json::array();
        for (size_t k = 0; k < cell.results.size(); ++k) {
            const auto& r = cell.results[k];
            json e;
            e["protocol"] = to_string(protos[k]);
            e["fidelity"] = r.fidelity;
            e["epsilon"] = r.epsilon;
            e["beta_star"] = r.beta_star;
            if (!r.ok()) e["error"] = r.error;
            rs.push_back(e);
        }
        c["results"] = rs;
        done[{cell.i, cell.j}] = c;
    }
    {
        std::ostringstream body;
        for (const auto& [key, c] : done) body << c.dump() << "\n";
        write_text(jsonl_path, body.str());
    }

    // Rehydrate the grid from the merged map so resumed cells appear in the CSV.
    auto fidelity_at = [&](int i, int j, cold::ProtocolKind want,
                           bool epsilon) -> std::optional<double> {
        auto it = done.find({i, j});
        if (it == done.end()) return std::nullopt;
        for (const auto& e : it->second["results"]) {
            if (e["protocol"].get<std::string>() != to_string(want)) continue;
            if (e.contains("error")) return std::nullopt;
            return e[epsilon ? "epsilon" : "fidelity"].get<double>();
        }
        return std::nullopt;
    };

    const int n1 = int(a1.values.size()), n2 = int(a2.values.size());
    std::ostringstream csv;
    csv << "# digest=" << digest << "\n";
    csv << a1.name << "," << a2.name;
    for (auto p : protos) csv << ",F_" << to_string(p) << ",eps_" << to_string(p);
    bool have_ratio = std::count(protos.begin(), protos.end(), cold::ProtocolKind::UA) &&
                      std::count(protos.begin(), protos.end(), cold::ProtocolKind::COLD);
    if (have_ratio) csv << ",R";
    csv << "\n";
    std::vector<std::vector<double>> f_cold(size_t(n1), std::vector<double>(size_t(n2), std::nan("")));
    std::vector<std::vector<double>> ratio(size_t(n1), std::vector<double>(size_t(n2), std::nan("")));
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            csv << fmt_csv(a1.values[size_t(i)]) << "," << fmt_csv(a2.values[size_t(j)]);
            for (auto p : protos) {
                auto f = fidelity_at(i, j, p, false);
                auto e = fidelity_at(i, j, p, true);
                csv << "," << (f ? fmt_csv(*f) : "nan") << "," << (e ? fmt_csv(*e) : "nan");
            }
            if (have_ratio) {
                auto fc = fidelity_at(i, j, cold::ProtocolKind::COLD, false);
                auto fu = fidelity_at(i, j, cold::ProtocolKind::UA, false);
                double r = fc && fu ? cold::success_ratio(*fc, *fu) : std::nan("");
                csv << "," << (std::isnan(r) ? "nan" : fmt_csv(r));
                ratio[size_t(i)][size_t(j)] = r;
            }
            if (auto fc = fidelity_at(i, j, cold::ProtocolKind::COLD, false))
                f_cold[size_t(i)][size_t(j)] = *fc;
            csv << "\n";
        }
    fs::path csv_path = out_dir / ("sweep_" + digest + ".csv");
    write_text(csv_path, csv.str());

    for (const std::string& m : metrics) {
        if (m == "F_COLD")
            write_text(out_dir / ("sweep_" + digest + "_F_COLD.svg"),
                       render_heatmap_svg(grid, f_cold, "F_COLD", false));
        else if (m == "R" && have_ratio)
            write_text(out_dir / ("sweep_" + digest + "_R.svg"),
                       render_heatmap_svg(grid, ratio, "R = F_COLD / F_UA", true));
        else
            std::cerr << "unknown metric '" << m << "' skipped\n";
    }
    std::cout << "sweep " << digest << ": " << n1 * n2 << " cells -> " << csv_path.string()
              << "\n";
    return 0;
}

// ---------------------------------------------------------------- agp

int cmd_agp(const json& cfg, const CliOverrides& ov) {
    cold::RunSettings s = settings_from_config(cfg, ov);
    int grid_points = 201;
    bool with_pulse =
        s.protocol == cold::ProtocolKind::QOC || s.protocol == cold::ProtocolKind::COLD;
    if (cfg.contains("agp")) {
        const json& a = cfg.at("agp");
        require_keys(a, "agp", {"grid_points", "with_pulse"});
        if (a.contains("grid_points")) grid_points = a.at("grid_points").get<int>();
        if (a.contains("with_pulse")) with_pulse = a.at("with_pulse").get<bool>();
    }
    cold::PauliSum hi = cold::build_initial_hamiltonian(s.model.n_sites);
    cold::PauliSum hf = cold::build_final_hamiltonian(s.model);
    cold::PauliSum o_opt =
        with_pulse ? cold::control_operators(s.model) : cold::PauliSum(s.model.n_sites);
    auto basis = cold::ansatz_basis(s.ansatz, s.model);
    cold::AgpStructure structure = cold::AgpStructure::build(hi, hf, o_opt, basis);

    std::cout << structure.describe();

    double reg = s.agp_reg;  // per-context default applied when negative
    cold::AlphaTrajectory traj;
    if (reg < 0) {
        cold::ScheduleContext mid = cold::make_context(s.drive.tau / 2, s.drive, with_pulse);
        reg = structure.default_regularization(mid);
    }
    traj = cold::tabulate_alpha(structure, s.drive, with_pulse, grid_points, reg);

    const std::string digest = cold::settings_digest(s);
    std::ostringstream os;
    os << "# digest=" << digest << "\n";
    os << "t,lambda,f";
    for (int j = 0; j < structure.basis_size(); ++j) os << ",alpha_" << j;
    os << "\n";
    for (size_t i = 0; i < traj.times.size(); ++i) {
        cold::ScheduleContext ctx = cold::make_context(traj.times[i], s.drive, with_pulse);
        os << fmt_csv(ctx.t) << "," << fmt_csv(ctx.lambda) << "," << fmt_csv(ctx.f);
        for (int j = 0; j < structure.basis_size(); ++j)
            os << "," << fmt_csv(traj.alphas[i](j));
        os << "\n";
    }
    fs::path out = resolve_out_dir(cfg, ov) / fs::path("alpha_" + digest + ".csv");
    write_text(out, os.str());
    std::cout << "alpha trajectory (" << grid_points << " nodes, " << structure.basis_size()
              << " coefficients) -> " << out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const json& cfg, const CliOverrides& ov) {
    cold::RunSettings s = settings_from_config(cfg, ov);
    int grid_points = 201;
    double delta = s.drive.tau;
    if (cfg.contains("spectrum")) {
        const json& sp = cfg.at("spectrum");
        require_keys(sp, "spectrum", {"grid_points", "delta"});
        if (sp.contains("grid_points")) grid_points = sp.at("grid_points").get<int>();
        if (sp.contains("delta")) delta = sp.at("delta").get<double>();
    }
    if (grid_points < 2) throw ConfigError("spectrum.grid_points must be >= 2");

    cold::PauliSum hi = cold::build_initial_hamiltonian(s.model.n_sites);
    cold::PauliSum hf = cold::build_final_hamiltonian(s.model);
    cold::PauliSum diff = hf - hi;
    diff.prune();
    double d_norm = Eigen::MatrixXcd(cold::to_matrix(diff)).operatorNorm();

    const std::string digest = cold::settings_digest(s);
    std::ostringstream os;
    os << "# digest=" << digest << "\n";
    os << "s,E0,E1,gap,dH_norm,d2H_norm\n";
    for (int i = 0; i < grid_points; ++i) {
        double sv = double(i) / (grid_points - 1);
        auto d1 = cold::schedule_derivatives(sv, 1.0);
        cold::PauliSum h = hi + d1.lambda * diff;
        cold::SpectralSummary spec = cold::diagonalize(h);
        os << fmt_csv(sv) << "," << fmt_csv(spec.e_min) << ","
           << fmt_csv(spec.e_min + spec.gap) << "," << fmt_csv(spec.gap) << ","
           << fmt_csv(std::abs(d1.lambda_dot) * d_norm) << ","
           << fmt_csv(std::abs(d1.lambda_ddot) * d_norm) << "\n";
    }
    fs::path out = resolve_out_dir(cfg, ov) / fs::path("spectrum_" + digest + ".csv");
    write_text(out, os.str());

    cold::AdiabaticBoundResult bound =
        cold::adiabatic_bound(s.model, delta, grid_points);
    if (bound.divergent)
        std::cout << "adiabatic bound: divergent (gap " << bound.min_gap << " at s="
                  << bound.min_gap_s << ")\n";
    else
        std::cout << "adiabatic bound integral/delta = " << bound.bound_minus_b
                  << " (min gap " << bound.min_gap << " at s=" << bound.min_gap_s << ")\n";
    std::cout << "spectrum scan -> " << out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- reproduce

int cmd_reproduce(const std::string& id_str, int jobs, int seeds, int n_iter) {
    cold::TableId id;
    try {
        id = cold::table_id_from_string(id_str);
    } catch (const std::exception&) {
        std::cerr << "unknown table id: " << id_str << " (expected T1..T6)\n";
        return 2;
    }
    cold::ReproduceOptions opts;
    opts.jobs = jobs;
    if (seeds > 0) opts.seeds = seeds;
    if (n_iter > 0) opts.n_iter = n_iter;
    cold::TableReport rep = cold::reproduce_table(id, opts);
    std::cout << rep.to_text();
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and optimization of counterdiabatic driving protocols"};
    app.require_subcommand(1);

    std::string config_path, table_id;
    CliOverrides ov;
    uint64_t seed_value = 0;
    bool seed_set = false;
    std::string boundary;
    int rep_seeds = 0, rep_iter = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "JSON configuration file");
        if (needs_config) c->required();
        sub->add_option("--jobs", ov.jobs, "worker-thread cap (0 = hardware)");
        sub->add_option("--seed", seed_value, "optimizer seed override")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--out", ov.out_dir, "output directory (else config / $COLD_OUT_DIR)");
        sub->add_option("--boundary", boundary, "boundary override")
            ->check(CLI::IsMember({"open", "periodic"}));
        sub->add_flag("--subspace-fidelity", ov.subspace_fidelity,
                      "grade fidelity against the degenerate ground manifold");
    };

    CLI::App* run = app.add_subcommand("run", "execute one protocol end to end");
    add_common(run, true);
    CLI::App* swp = app.add_subcommand("sweep", "evaluate a 2-D parameter grid");
    add_common(swp, true);
    CLI::App* rep = app.add_subcommand("reproduce", "grade a reference table (T1..T6)");
    rep->add_option("table", table_id, "table id")->required();
    rep->add_option("--jobs", ov.jobs, "worker-thread cap (0 = hardware)");
    rep->add_option("--seeds", rep_seeds, "best-of-N seed count override");
    rep->add_option("--n-iter", rep_iter, "acquisition budget override");
    CLI::App* agp = app.add_subcommand("agp", "dump gauge-potential tables and alpha(t)");
    add_common(agp, true);
    CLI::App* spc = app.add_subcommand("spectrum", "gap scan and adiabatic bound");
    add_common(spc, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (seed_set) ov.seed = seed_value;
    if (!boundary.empty()) ov.boundary = boundary;

    try {
        if (rep->parsed()) return cmd_reproduce(table_id, ov.jobs, rep_seeds, rep_iter);
        json cfg = load_config(config_path);
        if (run->parsed()) return cmd_run(cfg, ov);
        if (swp->parsed()) return cmd_sweep(cfg, ov);
        if (agp->parsed()) return cmd_agp(cfg, ov);
        if (spc->parsed()) return cmd_spectrum(cfg, ov);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
