#include "cold/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cold {

namespace {
constexpr double kPi = std::numbers::pi;
}

ModelFamily model_family_from_string(const std::string& s) {
    if (s == "annni" || s == "ANNNI") return ModelFamily::ANNNI;
    if (s == "xxz" || s == "XXZ") return ModelFamily::XXZ;
    if (s == "hs" || s == "HS") return ModelFamily::HS;
    throw std::invalid_argument("unknown model family: " + s);
}

std::string to_string(ModelFamily f) {
    switch (f) {
        case ModelFamily::ANNNI: return "annni";
        case ModelFamily::XXZ: return "xxz";
        case ModelFamily::HS: return "hs";
    }
    return "?";
}

AnsatzKind ansatz_kind_from_string(const std::string& s) {
    if (s == "local") return AnsatzKind::Local;
    if (s == "near") return AnsatzKind::Near;
    if (s == "next") return AnsatzKind::Next;
    throw std::invalid_argument("unknown ansatz kind: " + s);
}

std::string to_string(AnsatzKind k) {
    switch (k) {
        case AnsatzKind::Local: return "local";
        case AnsatzKind::Near: return "near";
        case AnsatzKind::Next: return "next";
    }
    return "?";
}

Boundary ModelSpec::default_boundary(ModelFamily f) {
    return f == ModelFamily::ANNNI ? Boundary::Periodic : Boundary::Open;
}

void ModelSpec::validate() const {
    int min_sites = family == ModelFamily::ANNNI ? 3 : 2;
    if (n_sites < min_sites)
        throw std::invalid_argument("ModelSpec: n_sites below family minimum");
    if (n_sites > 14) throw std::invalid_argument("ModelSpec: n_sites above cap");
}

void DriveSpec::validate() const {
    if (!(tau > 0)) throw std::invalid_argument("DriveSpec: tau must be positive");
    if (beta.empty()) throw std::invalid_argument("DriveSpec: need at least one frequency");
}

std::pair<double, double> schedule(double t, double tau) {
    if (t < -1e-12 * tau || t > tau * (1 + 1e-12))
        throw std::out_of_range("schedule: t outside [0, tau]");
    double u = std::sin(kPi * t / (2 * tau));
    double su = u * u;
    double s = std::sin(kPi / 2 * su);
    double lambda = s * s;
    double lambda_dot =
        (kPi * kPi / (4 * tau)) * std::sin(kPi * su) * std::sin(kPi * t / tau);
    return {lambda, lambda_dot};
}

ScheduleDerivatives schedule_derivatives(double t, double tau) {
    if (t < -1e-12 * tau || t > tau * (1 + 1e-12))
        throw std::out_of_range("schedule_derivatives: t outside [0, tau]");
    double su = std::sin(kPi * t / (2 * tau));
    double u = su * su;
    double up = (kPi / (2 * tau)) * std::sin(kPi * t / tau);
    double upp = (kPi * kPi / (2 * tau * tau)) * std::cos(kPi * t / tau);
    double s = std::sin(kPi / 2 * u);
    ScheduleDerivatives out;
    out.lambda = s * s;
    out.lambda_dot = (kPi / 2) * std::sin(kPi * u) * up;
    out.lambda_ddot =
        (kPi / 2) * (kPi * std::cos(kPi * u) * up * up + std::sin(kPi * u) * upp);
    return out;
}

std::pair<double, double> pulse(double t, const DriveSpec& drive) {
    if (t < -1e-12 * drive.tau || t > drive.tau * (1 + 1e-12))
        throw std::out_of_range("pulse: t outside [0, tau]");
    double f = 0, fdot = 0;
    for (int k = 1; k <= drive.n_k(); ++k) {
        double w = kPi * k / drive.tau;
        f += drive.beta[size_t(k - 1)] * std::sin(w * t);
        fdot += drive.beta[size_t(k - 1)] * w * std::cos(w * t);
    }
    return {f, fdot};
}

ScheduleContext make_context(double t, const DriveSpec& drive, bool with_pulse) {
    ScheduleContext ctx;
    ctx.t = t;
    std::tie(ctx.lambda, ctx.lambda_dot) = schedule(t, drive.tau);
    if (with_pulse) std::tie(ctx.f, ctx.f_dot) = pulse(t, drive);
    return ctx;
}

namespace {

// Bond list for range-r couplings under the given boundary.
std::vector<std::pair<int, int>> bonds(int n, int range, Boundary bc) {
    std::vector<std::pair<int, int>> out;
    int count = bc == Boundary::Periodic ? n : n - range;
    for (int i = 0; i < count; ++i) out.emplace_back(i, (i + range) % n);
    return out;
}

PauliSum two_site_sum(int n, char a, char b, const std::vector<std::pair<int, int>>& bl) {
    PauliSum s(n);
    for (auto [i, j] : bl) {
        std::string letters(size_t(n), 'I');
        letters[size_t(i)] = a;
        letters[size_t(j)] = b;
        s.add(PauliString::from_letters(letters), 1.0);
    }
    return s;
}

}  // namespace

PauliSum build_final_hamiltonian(const ModelSpec& spec) {
    spec.validate();
    const int n = spec.n_sites;
    PauliSum h(n);
    switch (spec.family) {
        case ModelFamily::ANNNI: {
            // J* = 1 sets the energy scale.
            h += -1.0 * two_site_sum(n, 'X', 'X', bonds(n, 1, spec.boundary));
            h += spec.p1 * two_site_sum(n, 'X', 'X', bonds(n, 2, spec.boundary));
            break;
        }
        case ModelFamily::XXZ: {
            auto bl = bonds(n, 1, spec.boundary);
            h += two_site_sum(n, 'X', 'X', bl);
            h += two_site_sum(n, 'Y', 'Y', bl);
            h += spec.p1 * two_site_sum(n, 'Z', 'Z', bl);
            break;
        }
        case ModelFamily::HS: {
            // Unit-circle chord distances: |r_i - r_j|^2 = 4 sin^2(pi (i-j) / N).
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    double s = std::sin(kPi * double(i - j) / n);
                    double w = spec.p1 / (4 * s * s);
                    h += w * two_site_sum(n, 'X', 'X', {{i, j}});
                    h += w * two_site_sum(n, 'Y', 'Y', {{i, j}});
                    h += w * two_site_sum(n, 'Z', 'Z', {{i, j}});
                }
            break;
        }
    }
    for (int i = 0; i < n; ++i) h.add(PauliString::site(n, i, 'Z'), spec.p2);
    h.prune();
    return h;
}

PauliSum build_initial_hamiltonian(int n) {
    if (n < 1) throw std::invalid_argument("build_initial_hamiltonian: n < 1");
    PauliSum h(n);
    for (int i = 0; i < n; ++i) h.add(PauliString::site(n, i, 'X'), -1.0);
    return h;
}

PauliSum control_operators(const ModelSpec& spec) {
    spec.validate();
    const int n = spec.n_sites;
    PauliSum o(n);
    if (spec.family == ModelFamily::ANNNI) {
        for (int i = 0; i < n; ++i) o.add(PauliString::site(n, i, 'Z'), 1.0);
    } else {
        o = two_site_sum(n, 'Z', 'Z', bonds(n, 2, spec.boundary));
    }
    return o;
}

std::vector<PauliSum> ansatz_basis(AnsatzKind kind, const ModelSpec& spec) {
    const int n = spec.n_sites;
    std::vector<PauliSum> basis;
    PauliSum local(n);
    for (int i = 0; i < n; ++i) local.add(PauliString::site(n, i, 'Y'), 1.0);
    basis.push_back(local);
    if (kind == AnsatzKind::Local) return basis;

    auto add_pair = [&](int range) {
        auto bl = bonds(n, range, spec.boundary);
        if (bl.empty())
            throw std::invalid_argument("ansatz_basis: interaction range exceeds chain");
        basis.push_back(two_site_sum(n, 'X', 'Y', bl) + two_site_sum(n, 'Y', 'X', bl));
        basis.push_back(two_site_sum(n, 'Y', 'Z', bl) + two_site_sum(n, 'Z', 'Y', bl));
    };
    add_pair(1);
    if (kind == AnsatzKind::Next) add_pair(2);
    return basis;
}

PauliSum bare_hamiltonian(const ModelSpec& spec, const ScheduleContext& ctx) {
    PauliSum hi = build_initial_hamiltonian(spec.n_sites);
    PauliSum hf = build_final_hamiltonian(spec);
    PauliSum h = hi + ctx.lambda * (hf - hi);
    h.prune();
    return h;
}

}  // namespace cold
