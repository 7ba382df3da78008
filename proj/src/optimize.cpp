#include "cold/optimize.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cold {

void SearchSpace::validate() const {
    if (lower.size() != upper.size() || lower.size() == 0)
        throw std::invalid_argument("SearchSpace: bad bounds");
    for (int i = 0; i < lower.size(); ++i)
        if (!(lower(i) < upper(i)))
            throw std::invalid_argument("SearchSpace: lower must be < upper");
}

SearchSpace SearchSpace::box(int d, double lo, double hi) {
    SearchSpace s;
    s.lower = Eigen::VectorXd::Constant(d, lo);
    s.upper = Eigen::VectorXd::Constant(d, hi);
    s.validate();
    return s;
}

void OptimizerConfig::validate() const {
    if (n_init < 2 || n_iter < 0) throw std::invalid_argument("OptimizerConfig: budget");
    if (noise_floor < 0) throw std::invalid_argument("OptimizerConfig: noise_floor");
}

void OptimizationTrace::record(const Eigen::VectorXd& x, double c) {
    evaluations.emplace_back(x, c);
    if (evaluations.size() == 1 || c < best_cost) {
        best_x = x;
        best_cost = c;
    }
}

namespace {

double checked_eval(const CostFunction& cost, const Eigen::VectorXd& x) {
    double c = cost(x);
    if (!std::isfinite(c)) {
        std::ostringstream os;
        os << "cost returned non-finite value at beta = [" << x.transpose() << "]";
        throw std::runtime_error(os.str());
    }
    return c;
}

// GP posterior at normalized points, unit-variance standardized targets.
struct GpModel {
    Eigen::MatrixXd x;  // n x d, in [0,1]
    Eigen::VectorXd y;  // standardized
    double length_scale = 0.3;
    double noise = 1e-10;
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd alpha;

    static double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double ell) {
        return std::exp(-(a - b).squaredNorm() / (2 * ell * ell));
    }

    Eigen::MatrixXd gram(double ell) const {
        const int n = int(x.rows());
        Eigen::MatrixXd k(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
                k(i, j) = k(j, i) = kernel(x.row(i), x.row(j), ell);
        k.diagonal().array() += noise + 1e-10;
        return k;
    }

    double log_evidence(double ell) const {
        Eigen::LLT<Eigen::MatrixXd> f(gram(ell));
        if (f.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
        Eigen::VectorXd a = f.solve(y);
        double logdet = 0;
        for (int i = 0; i < y.size(); ++i) logdet += 2 * std::log(f.matrixL()(i, i));
        return -0.5 * y.dot(a) - 0.5 * logdet;
    }

    void fit() {
        // maximum-likelihood length-scale on a fixed log grid
        double best_ell = length_scale, best_lp = -std::numeric_limits<double>::infinity();
        for (int g = 0; g < 24; ++g) {
            double ell = std::exp(std::log(0.03) + g * (std::log(3.0) - std::log(0.03)) / 23);
            double lp = log_evidence(ell);
            if (lp > best_lp) {
                best_lp = lp;
                best_ell = ell;
            }
        }
        length_scale = best_ell;
        llt.compute(gram(length_scale));
        alpha = llt.solve(y);
    }

    std::pair<double, double> predict(const Eigen::VectorXd& q) const {
        const int n = int(x.rows());
        Eigen::VectorXd k(n);
        for (int i = 0; i < n; ++i) k(i) = kernel(x.row(i), q, length_scale);
        double mu = k.dot(alpha);
        Eigen::VectorXd v = llt.solve(k);
        double var = 1.0 - k.dot(v);
        return {mu, std::max(var, 1e-14)};
    }
};

double expected_improvement(double mu, double var, double best) {
    double sigma = std::sqrt(var);
    double z = (best - mu) / sigma;
    double phi = std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI);
    double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    return (best - mu) * cdf + sigma * phi;
}

}  // namespace

OptimizationTrace bayesian_minimize(const CostFunction& cost, const SearchSpace& space,
                                    const OptimizerConfig& cfg,
                                    const std::vector<Eigen::VectorXd>& extra_initial) {
    space.validate();
    cfg.validate();
    const int d = space.dim();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    auto to_box = [&](const Eigen::VectorXd& u) {
        return (space.lower.array() + u.array() * (space.upper - space.lower).array())
            .matrix()
            .eval();
    };
    auto to_unit = [&](const Eigen::VectorXd& b) {
        return ((b - space.lower).array() / (space.upper - space.lower).array())
            .matrix()
            .eval();
    };

    OptimizationTrace trace;
    std::vector<Eigen::VectorXd> ux;  // normalized coordinates of all probes

    auto probe = [&](const Eigen::VectorXd& b) {
        trace.record(b, checked_eval(cost, b));
        ux.push_back(to_unit(b));
    };

    for (const auto& b : extra_initial) {
        Eigen::VectorXd clipped = b.cwiseMax(space.lower).cwiseMin(space.upper);
        probe(clipped);
    }

    // Latin-hypercube initial design
    for (int i = 0; i < cfg.n_init; ++i) {
        Eigen::VectorXd u(d);
        for (int j = 0; j < d; ++j) u(j) = (i + unif(rng)) / cfg.n_init;
        probe(to_box(u));
    }

    for (int it = 0; it < cfg.n_iter; ++it) {
        const int n = int(trace.evaluations.size());
        GpModel gp;
        gp.x.resize(n, d);
        gp.y.resize(n);
        for (int i = 0; i < n; ++i) {
            gp.x.row(i) = ux[size_t(i)];
            gp.y(i) = trace.evaluations[size_t(i)].second;
        }
        double mean = gp.y.mean();
        double sd = std::sqrt((gp.y.array() - mean).square().sum() / std::max(1, n - 1));
        if (sd < 1e-14) sd = 1.0;
        gp.y = (gp.y.array() - mean) / sd;
        gp.noise = cfg.noise_floor / (sd * sd) + 1e-10;
        gp.fit();

        double best_std = (trace.best_cost - mean) / sd;
        Eigen::VectorXd best_u(d);
        double best_ei = -1;
        for (int c = 0; c < cfg.ei_candidates; ++c) {
            Eigen::VectorXd u(d);
            for (int j = 0; j < d; ++j) u(j) = unif(rng);
            auto [mu, var] = gp.predict(u);
            double ei = expected_improvement(mu, var, best_std);
            if (ei > best_ei) {
                best_ei = ei;
                best_u = u;
            }
        }
        probe(to_box(best_u));
    }
    return trace;
}

namespace {

// Brent line minimization of g on [a, b].
double brent(const std::function<double(double)>& g, double a, double b, double tol,
             int max_iter, double& fmin) {
    const double gold = 0.3819660112501051;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = g(x), fw = fx, fv = fx;
    double d = 0, e = 0;
    for (int it = 0; it < max_iter; ++it) {
        double xm = 0.5 * (a + b);
        double tol1 = tol * std::abs(x) + 1e-12, tol2 = 2 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv), q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2 * (q - r);
            if (q > 0) p = -p;
            q = std::abs(q);
            double etmp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * etmp) && p > q * (a - x) &&
                p < q * (b - x)) {
                parabolic = true;
                d = p / q;
                double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = xm >= x ? tol1 : -tol1;
            }
        }
        if (!parabolic) {
            e = x >= xm ? a - x : b - x;
            d = gold * e;
        }
        double u = std::abs(d) >= tol1 ? x + d : x + (d >= 0 ? tol1 : -tol1);
        double fu = g(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    fmin = fx;
    return x;
}

}  // namespace

OptimizationTrace powell_minimize(const CostFunction& cost, const Eigen::VectorXd& x0,
                                  int max_iters, double ftol) {
    const int d = int(x0.size());
    OptimizationTrace trace;
    Eigen::VectorXd x = x0;
    double fx = checked_eval(cost, x);
    trace.record(x, fx);

    std::vector<Eigen::VectorXd> dirs;
    for (int i = 0; i < d; ++i) dirs.push_back(Eigen::VectorXd::Unit(d, i));

    auto line_min = [&](Eigen::VectorXd& point, double fpoint, const Eigen::VectorXd& dir) {
        auto g = [&](double s) {
            Eigen::VectorXd p = point + s * dir;
            double c = checked_eval(cost, p);
            trace.record(p, c);
            return c;
        };
        // bracket by expanding around 0
        double step = 1.0;
        double f0 = fpoint, fp = g(step);
        while (fp < f0 && step < 64) {
            step *= 2;
            fp = g(step);
        }
        double fm = g(-1.0);
        double lo = fm < f0 ? -step : -1.0, hi = step;
        double fmin;
        double s = brent(g, lo, hi, 1e-6, 50, fmin);
        if (fmin < fpoint) point += s * dir;
        return std::min(fmin, fpoint);
    };

    for (int it = 0; it < max_iters; ++it) {
        double f_start = fx;
        Eigen::VectorXd x_start = x;
        int biggest = 0;
        double biggest_drop = 0;
        for (int i = 0; i < d; ++i) {
            double f_before = fx;
            fx = line_min(x, fx, dirs[size_t(i)]);
            if (f_before - fx > biggest_drop) {
                biggest_drop = f_before - fx;
                biggest = i;
            }
        }
        if (2 * (f_start - fx) <= ftol * (std::abs(f_start) + std::abs(fx)) + 1e-14) break;
        // replace the direction of largest decrease with the net move
        Eigen::VectorXd net = x - x_start;
        if (net.norm() > 1e-14) {
            dirs.erase(dirs.begin() + biggest);
            dirs.push_back(net.normalized());
            fx = line_min(x, fx, dirs.back());
        }
    }
    return trace;
}

}  // namespace cold
