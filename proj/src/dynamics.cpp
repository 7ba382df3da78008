#include "cold/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace cold {

CompiledPauliSum::CompiledPauliSum(const PauliSum& sum) : n_(sum.n_sites()) {
    static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    terms_.reserve(sum.size());
    for (const auto& [p, c] : sum.terms()) {
        uint64_t xflip = 0, yzmask = 0;
        int ycount = 0;
        for (int i = 0; i < n_; ++i) {
            uint64_t bit = uint64_t(1) << (n_ - 1 - i);
            bool x = (p.x_mask() >> i) & 1u, z = (p.z_mask() >> i) & 1u;
            if (x) xflip |= bit;
            if (z) yzmask |= bit;
            if (x && z) ++ycount;
        }
        terms_.push_back({xflip, yzmask, c * ipow[ycount & 3]});
    }
}

void CompiledPauliSum::accumulate(const StateVector& in, StateVector& out,
                                  Complex scale) const {
    const int64_t d = dim();
    const Complex* src = in.data();
    Complex* dst = out.data();
    for (const Term& t : terms_) {
        const Complex c = scale * t.coeff;
        if (t.xflip == 0) {
            for (int64_t k = 0; k < d; ++k) {
                int par = __builtin_popcountll(uint64_t(k) & t.yzmask) & 1;
                dst[k] += par ? -c * src[k] : c * src[k];
            }
        } else {
            for (int64_t k = 0; k < d; ++k) {
                int par = __builtin_popcountll(uint64_t(k) & t.yzmask) & 1;
                dst[int64_t(uint64_t(k) ^ t.xflip)] += par ? -c * src[k] : c * src[k];
            }
        }
    }
}

StateVector CompiledPauliSum::apply(const StateVector& in) const {
    StateVector out = StateVector::Zero(in.size());
    accumulate(in, out, 1.0);
    return out;
}

Complex CompiledPauliSum::expectation(const StateVector& psi) const {
    return psi.dot(apply(psi));
}

SpectralSummary diagonalize(const PauliSum& h, double tol_deg) {
    if (h.max_abs_imag() > 1e-12)
        throw std::invalid_argument("diagonalize: non-Hermitian input");
    Eigen::MatrixXcd m = to_matrix(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed");
    const auto& w = es.eigenvalues();
    SpectralSummary out;
    out.e_min = w(0);
    out.e_max = w(w.size() - 1);
    out.gap = w.size() > 1 ? w(1) - w(0) : 0.0;
    out.degeneracy_flag = out.gap < tol_deg;

    // Deterministic phase: first amplitude with magnitude > 1e-12 made real positive.
    auto fix_phase = [](StateVector v) {
        for (int64_t i = 0; i < v.size(); ++i) {
            if (std::abs(v(i)) > 1e-12) {
                v *= std::conj(v(i)) / std::abs(v(i));
                break;
            }
        }
        return v;
    };
    out.ground = fix_phase(es.eigenvectors().col(0));

    int deg = 1;
    while (deg < w.size() && w(deg) - w(0) < tol_deg) ++deg;
    out.ground_subspace.resize(m.rows(), deg);
    for (int i = 0; i < deg; ++i)
        out.ground_subspace.col(i) = fix_phase(es.eigenvectors().col(i));
    return out;
}

namespace {

// One RK4 step of i psi' = H psi.
void rk4_step(const TimeDependentHamiltonian& h, double t, double dt, StateVector& psi,
              StateVector& k1, StateVector& k2, StateVector& k3, StateVector& k4,
              StateVector& tmp) {
    const Complex mi(0, -1);
    h.apply(t, psi, k1);
    tmp = psi + (0.5 * dt) * (mi * k1);
    h.apply(t + 0.5 * dt, tmp, k2);
    tmp = psi + (0.5 * dt) * (mi * k2);
    h.apply(t + 0.5 * dt, tmp, k3);
    tmp = psi + dt * (mi * k3);
    h.apply(t + dt, tmp, k4);
    psi += (dt / 6.0) * (mi * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

StateVector integrate(const TimeDependentHamiltonian& h, const StateVector& psi0,
                      double tau, int steps,
                      const std::function<void(double, const StateVector&)>& observer) {
    StateVector psi = psi0;
    StateVector k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()),
        tmp(psi.size());
    const double dt = tau / steps;
    if (observer) observer(0.0, psi);
    for (int s = 0; s < steps; ++s) {
        rk4_step(h, s * dt, dt, psi, k1, k2, k3, k4, tmp);
        if (observer) observer((s + 1) * dt, psi);
    }
    return psi;
}

}  // namespace

StateVector evolve(const TimeDependentHamiltonian& h, const StateVector& psi0,
                   double tau, const EvolveOptions& opts) {
    if (std::abs(psi0.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("evolve: psi0 not normalized");
    if (opts.fixed_steps)
        return integrate(h, psi0, tau, opts.initial_steps, opts.observer);

    int steps = opts.initial_steps;
    StateVector prev = integrate(h, psi0, tau, steps, nullptr);
    for (int r = 0; r < opts.max_refinements; ++r) {
        steps *= 2;
        StateVector next = integrate(h, psi0, tau, steps, nullptr);
        if ((next - prev).norm() < opts.tol) {
            if (std::abs(next.norm() - 1.0) > 1e-8)
                throw std::runtime_error("evolve: norm drift above tolerance");
            if (opts.observer) next = integrate(h, psi0, tau, steps, opts.observer);
            return next;
        }
        prev = std::move(next);
    }
    throw std::runtime_error("evolve: step refinement did not converge");
}

double fidelity(const StateVector& psi, const StateVector& phi) {
    if (psi.size() != phi.size())
        throw std::invalid_argument("fidelity: dimension mismatch");
    return std::norm(phi.dot(psi));
}

double subspace_fidelity(const StateVector& psi, const SpectralSummary& spec) {
    double acc = 0;
    for (int i = 0; i < spec.ground_subspace.cols(); ++i)
        acc += std::norm(spec.ground_subspace.col(i).dot(psi));
    return acc;
}

double normalized_energy(const StateVector& psi, const CompiledPauliSum& h_final,
                         const SpectralSummary& spec) {
    const double width = spec.e_max - spec.e_min;
    if (width <= 0) throw std::invalid_argument("normalized_energy: zero-width spectrum");
    double e = h_final.expectation(psi).real();
    return (e - spec.e_min) / width;
}

}  // namespace cold
