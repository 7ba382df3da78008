// Exercises the installed binary through a subprocess exit-code matrix.
// argv[1] must be the path to the cold_cli executable.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_dir;

int run_cli(const std::string& args) {
    std::string cmd = g_cli + " " + args + " > " + (g_dir / "stdout.txt").string() +
                      " 2> " + (g_dir / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path write_config(const std::string& name, const std::string& body) {
    fs::path p = g_dir / name;
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kUaConfig = R"({
  "model": {"family": "annni", "n": 4, "p1": 0.2, "p2": 0.2},
  "drive": {"tau": 0.01},
  "protocol": {"kind": "ua"}
})";

}  // namespace

TEST_CASE("missing subcommand and bad flags exit 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("run") == 2);  // --config is required
}

TEST_CASE("run: minimal config succeeds and writes a result file") {
    fs::path cfg = write_config("ua.json", kUaConfig);
    fs::path out = g_dir / "out_run";
    CHECK(run_cli("run --config " + cfg.string() + " --out " + out.string()) == 0);
    bool found = false;
    for (const auto& e : fs::directory_iterator(out))
        if (e.path().filename().string().rfind("run_", 0) == 0) found = true;
    CHECK(found);
    std::string line = slurp(g_dir / "stdout.txt");
    CHECK(line.find("F=") != std::string::npos);
    CHECK(line.find("eps=") != std::string::npos);
}

TEST_CASE("run: unknown config key exits 2 without outputs") {
    fs::path cfg = write_config("bad.json", R"({
      "model": {"family": "annni", "n": 4, "p1": 0.2, "p2": 0.2, "typo_key": 1},
      "protocol": {"kind": "ua"}
    })");
    fs::path out = g_dir / "out_bad";
    CHECK(run_cli("run --config " + cfg.string() + " --out " + out.string()) == 2);
    CHECK(!fs::exists(out));
}

TEST_CASE("run: malformed JSON and missing file exit 2") {
    fs::path cfg = write_config("broken.json", "{ not json");
    CHECK(run_cli("run --config " + cfg.string()) == 2);
    CHECK(run_cli("run --config " + (g_dir / "does_not_exist.json").string()) == 2);
}

TEST_CASE("run: invalid physics (site count beyond cap) exits 2") {
    fs::path cfg = write_config("huge.json", R"({
      "model": {"family": "annni", "n": 100},
      "protocol": {"kind": "ua"}
    })");
    CHECK(run_cli("run --config " + cfg.string()) == 2);
}

TEST_CASE("run: boundary and seed overrides are accepted") {
    fs::path cfg = write_config("ua2.json", kUaConfig);
    fs::path out = g_dir / "out_run2";
    CHECK(run_cli("run --config " + cfg.string() + " --out " + out.string() +
                  " --boundary open --seed 9 --subspace-fidelity") == 0);
    CHECK(run_cli("run --config " + cfg.string() + " --boundary diagonal") == 2);
}

TEST_CASE("reproduce: unknown table id exits 2") {
    CHECK(run_cli("reproduce T9") == 2);
    CHECK(run_cli("reproduce banana") == 2);
}

TEST_CASE("sweep: 2x2 grid writes CSV, heatmaps, and resumes") {
    fs::path cfg = write_config("sweep.json", R"({
      "model": {"family": "annni", "n": 4, "p1": 0.2, "p2": 0.2},
      "drive": {"tau": 0.01},
      "protocol": {"kind": "ua", "seed": 1, "n_init": 2, "n_iter": 2},
      "sweep": {
        "axis1": {"name": "p1", "min": 0.2, "max": 0.8, "count": 2},
        "axis2": {"name": "p2", "min": 0.3, "max": 0.9, "count": 2},
        "protocols": ["ua", "cold"],
        "metrics": ["F_COLD", "R"]
      }
    })");
    fs::path out = g_dir / "out_sweep";
    CHECK(run_cli("sweep --config " + cfg.string() + " --out " + out.string()) == 0);

    fs::path csv, jsonl, svg_f, svg_r;
    for (const auto& e : fs::directory_iterator(out)) {
        std::string f = e.path().filename().string();
        if (f.rfind("sweep_", 0) != 0) continue;
        if (f.ends_with(".csv")) csv = e.path();
        if (f.ends_with(".jsonl")) jsonl = e.path();
        if (f.ends_with("_F_COLD.svg")) svg_f = e.path();
        if (f.ends_with("_R.svg")) svg_r = e.path();
    }
    REQUIRE(!csv.empty());
    REQUIRE(!jsonl.empty());
    CHECK(!svg_f.empty());
    CHECK(!svg_r.empty());

    std::string body = slurp(csv);
    // digest comment + header + 4 rows
    CHECK(std::count(body.begin(), body.end(), '\n') == 6);
    CHECK(body.find("# digest=") != std::string::npos);
    CHECK(body.find("p1,p2,F_ua,eps_ua,F_cold,eps_cold,R") != std::string::npos);
    CHECK(slurp(svg_f).find("<svg") != std::string::npos);

    // rerun: all cells resumed, CSV byte-identical
    CHECK(run_cli("sweep --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(slurp(g_dir / "stdout.txt").find("resuming sweep") != std::string::npos);
    CHECK(slurp(g_dir / "stdout.txt").find("4 cells already complete") !=
          std::string::npos);
    CHECK(slurp(csv) == body);
}

TEST_CASE("agp: dumps the polynomial tables and an alpha trajectory") {
    fs::path cfg = write_config("agp.json", R"({
      "model": {"family": "annni", "n": 4, "p1": 0.5, "p2": 0.3},
      "drive": {"tau": 0.01, "beta": [2.0]},
      "protocol": {"kind": "cold", "ansatz": "next"},
      "agp": {"grid_points": 11}
    })");
    fs::path out = g_dir / "out_agp";
    CHECK(run_cli("agp --config " + cfg.string() + " --out " + out.string()) == 0);
    std::string text = slurp(g_dir / "stdout.txt");
    CHECK(text.find("basis size m = 5") != std::string::npos);
    bool found = false;
    fs::path alpha;
    for (const auto& e : fs::directory_iterator(out))
        if (e.path().filename().string().rfind("alpha_", 0) == 0) {
            found = true;
            alpha = e.path();
        }
    REQUIRE(found);
    std::string csv = slurp(alpha);
    CHECK(csv.find("t,lambda,f,alpha_0,alpha_1,alpha_2,alpha_3,alpha_4") !=
          std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);  // comment + header + 11
}

TEST_CASE("spectrum: free spins give a constant gap of 2") {
    fs::path cfg = write_config("spec.json", R"({
      "model": {"family": "annni", "n": 4, "p1": 0.0, "p2": 1e-9},
      "drive": {"tau": 0.01},
      "protocol": {"kind": "ua"},
      "spectrum": {"grid_points": 5, "delta": 0.01}
    })");
    fs::path out = g_dir / "out_spec";
    CHECK(run_cli("spectrum --config " + cfg.string() + " --out " + out.string()) == 0);
    fs::path csv;
    for (const auto& e : fs::directory_iterator(out))
        if (e.path().filename().string().rfind("spectrum_", 0) == 0) csv = e.path();
    REQUIRE(!csv.empty());
    std::string body = slurp(csv);
    CHECK(body.find("s,E0,E1,gap") != std::string::npos);
    // the initial row: free spins, gap exactly 2
    CHECK(body.find("0,-4,-2,2,") != std::string::npos);
}

TEST_CASE("spectrum: gap closure reports a divergent bound") {
    fs::path cfg = write_config("specdeg.json", R"({
      "model": {"family": "annni", "n": 4, "p1": 0.0, "p2": 0.0},
      "drive": {"tau": 0.01},
      "protocol": {"kind": "ua"},
      "spectrum": {"grid_points": 5, "delta": 0.01}
    })");
    CHECK(run_cli("spectrum --config " + cfg.string() + " --out " +
                  (g_dir / "out_specdeg").string()) == 0);
    CHECK(slurp(g_dir / "stdout.txt").find("divergent") != std::string::npos);
}

TEST_CASE("identical configs yield byte-identical result JSON except wall time") {
    fs::path cfg = write_config("det.json", kUaConfig);
    fs::path out1 = g_dir / "det1", out2 = g_dir / "det2";
    CHECK(run_cli("run --config " + cfg.string() + " --out " + out1.string()) == 0);
    CHECK(run_cli("run --config " + cfg.string() + " --out " + out2.string()) == 0);
    auto strip_wall = [](std::string s) {
        size_t a = s.find("\"wall_time_s\"");
        if (a == std::string::npos) return s;
        size_t b = s.find(',', a);
        return s.erase(a, b - a + 1);
    };
    fs::path f1, f2;
    for (const auto& e : fs::directory_iterator(out1)) f1 = e.path();
    for (const auto& e : fs::directory_iterator(out2)) f2 = e.path();
    CHECK(f1.filename() == f2.filename());  // same digest
    CHECK(strip_wall(slurp(f1)) == strip_wall(slurp(f2)));
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-cold_cli>\n");
        return 2;
    }
    g_cli = argv[1];
    g_dir = fs::temp_directory_path() / "cold_cli_test";
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);
    doctest::Context ctx;
    int rc = ctx.run();
    fs::remove_all(g_dir);
    return rc;
}
