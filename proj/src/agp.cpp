#include "cold/agp.hpp"

#include <sstream>
#include <stdexcept>

namespace cold {

namespace {

Complex icomm_trace(const PauliSum& a, const PauliSum& b) { return trace_pair(a, b); }

}  // namespace

AgpStructure AgpStructure::build(const PauliSum& h_i, const PauliSum& h_f,
                                 const PauliSum& o_opt,
                                 const std::vector<PauliSum>& basis) {
    if (basis.empty()) throw std::invalid_argument("AgpStructure: empty basis");
    AgpStructure s;
    s.m_ = int(basis.size());
    s.basis_ = basis;

    PauliSum d = h_f - h_i;
    d.prune();

    // C_j components: i [O_j, H_i], i [O_j, D], i [O_j, O_opt]
    std::vector<PauliSum> cc, cl, cf;
    for (const auto& o : basis) {
        cc.push_back(Complex(0, 1) * commutator(o, h_i));
        cl.push_back(Complex(0, 1) * commutator(o, d));
        cf.push_back(o_opt.empty() ? PauliSum(o.n_sites())
                                   : Complex(0, 1) * commutator(o, o_opt));
    }

    const int m = s.m_;
    auto tr = [](const PauliSum& a, const PauliSum& b) {
        return icomm_trace(a, b).real();  // products of Hermitian sums: real traces
    };

    s.k_cc_.setZero(m, m);
    s.k_cl_.setZero(m, m);
    s.k_cf_.setZero(m, m);
    s.k_ll_.setZero(m, m);
    s.k_lf_.setZero(m, m);
    s.k_ff_.setZero(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            s.k_cc_(j, k) = tr(cc[j], cc[k]);
            s.k_cl_(j, k) = tr(cc[j], cl[k]) + tr(cl[j], cc[k]);
            s.k_cf_(j, k) = tr(cc[j], cf[k]) + tr(cf[j], cc[k]);
            s.k_ll_(j, k) = tr(cl[j], cl[k]);
            s.k_lf_(j, k) = tr(cl[j], cf[k]) + tr(cf[j], cl[k]);
            s.k_ff_(j, k) = tr(cf[j], cf[k]);
        }

    s.bd_c_.setZero(m);
    s.bd_l_.setZero(m);
    s.bd_f_.setZero(m);
    s.bo_c_.setZero(m);
    s.bo_l_.setZero(m);
    s.bo_f_.setZero(m);
    for (int j = 0; j < m; ++j) {
        s.bd_c_(j) = tr(cc[j], d);
        s.bd_l_(j) = tr(cl[j], d);
        s.bd_f_(j) = tr(cf[j], d);
        s.bo_c_(j) = tr(cc[j], o_opt);
        s.bo_l_(j) = tr(cl[j], o_opt);
        s.bo_f_(j) = tr(cf[j], o_opt);
    }

    s.tdd_ = tr(d, d);
    s.tdo_ = tr(d, o_opt);
    s.too_ = tr(o_opt, o_opt);

    for (int j = 0; j < m; ++j)
        if (cc[j].empty() && cl[j].empty() && cf[j].empty()) s.degenerate_.push_back(j);
    return s;
}

Eigen::MatrixXd AgpStructure::gram(const ScheduleContext& ctx) const {
    const double l = ctx.lambda, f = ctx.f;
    return k_cc_ + l * k_cl_ + f * k_cf_ + l * l * k_ll_ + l * f * k_lf_ + f * f * k_ff_;
}

Eigen::VectorXd AgpStructure::rhs(const ScheduleContext& ctx) const {
    const double l = ctx.lambda, f = ctx.f;
    return ctx.lambda_dot * (bd_c_ + l * bd_l_ + f * bd_f_) +
           ctx.f_dot * (bo_c_ + l * bo_l_ + f * bo_f_);
}

double AgpStructure::dh_norm_sq(const ScheduleContext& ctx) const {
    return ctx.lambda_dot * ctx.lambda_dot * tdd_ +
           2 * ctx.lambda_dot * ctx.f_dot * tdo_ + ctx.f_dot * ctx.f_dot * too_;
}

double AgpStructure::default_regularization(const ScheduleContext& ctx) const {
    return 1e-12 * gram(ctx).trace() / m_;
}

Eigen::VectorXd AgpStructure::solve_alpha(const ScheduleContext& ctx, double reg) const {
    if (reg < 0) throw std::invalid_argument("solve_alpha: reg < 0");
    Eigen::MatrixXd M = gram(ctx);
    Eigen::VectorXd b = rhs(ctx);
    if (b.norm() == 0) return Eigen::VectorXd::Zero(m_);
    if (reg > 0) {
        Eigen::MatrixXd Mr = M + reg * Eigen::MatrixXd::Identity(m_, m_);
        return Mr.ldlt().solve(-b);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        Eigen::VectorXd x = ldlt.solve(-b);
        if ((M * x + b).norm() <= 1e-8 * b.norm()) return x;
    }
    // Minimum-norm least-squares fallback for (numerically) singular M.
    return M.completeOrthogonalDecomposition().solve(-b);
}

double AgpStructure::action_value(const ScheduleContext& ctx,
                                  const Eigen::VectorXd& alpha) const {
    if (alpha.size() != m_) throw std::invalid_argument("action_value: dim mismatch");
    Eigen::MatrixXd M = gram(ctx);
    Eigen::VectorXd b = rhs(ctx);
    return dh_norm_sq(ctx) + 2 * alpha.dot(b) + alpha.dot(M * alpha);
}

PauliSum AgpStructure::cd_term(const Eigen::VectorXd& alpha) const {
    if (alpha.size() != m_) throw std::invalid_argument("cd_term: dim mismatch");
    PauliSum a(basis_[0].n_sites());
    for (int j = 0; j < m_; ++j) a += alpha(j) * basis_[size_t(j)];
    a.prune();
    return a;
}

std::string AgpStructure::describe() const {
    std::ostringstream os;
    os << "basis size m = " << m_ << "\n";
    for (int j = 0; j < m_; ++j)
        os << "O_" << j << ":\n" << basis_[size_t(j)].to_text();
    auto mat = [&](const char* name, const Eigen::MatrixXd& k) {
        if (k.cwiseAbs().maxCoeff() == 0) return;
        os << "M " << name << ":\n" << k << "\n";
    };
    mat("const", k_cc_);
    mat("* lambda", k_cl_);
    mat("* f", k_cf_);
    mat("* lambda^2", k_ll_);
    mat("* lambda*f", k_lf_);
    mat("* f^2", k_ff_);
    os << "b = lambda_dot * [ (" << bd_c_.transpose() << ") + lambda (" << bd_l_.transpose()
       << ") + f (" << bd_f_.transpose() << ") ]\n";
    os << "  + f_dot * [ (" << bo_c_.transpose() << ") + lambda (" << bo_l_.transpose()
       << ") + f (" << bo_f_.transpose() << ") ]\n";
    if (!degenerate_.empty()) {
        os << "degenerate rows:";
        for (int j : degenerate_) os << " " << j;
        os << "\n";
    }
    return os.str();
}

AlphaTrajectory tabulate_alpha(const AgpStructure& s, const DriveSpec& drive,
                               bool with_pulse, int grid_points, double reg) {
    if (grid_points < 2) throw std::invalid_argument("tabulate_alpha: grid too small");
    AlphaTrajectory out;
    out.times.reserve(size_t(grid_points));
    out.alphas.reserve(size_t(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        double t = drive.tau * double(i) / (grid_points - 1);
        ScheduleContext ctx = make_context(t, drive, with_pulse);
        double r = reg >= 0 ? reg : s.default_regularization(ctx);
        out.times.push_back(t);
        out.alphas.push_back(s.solve_alpha(ctx, r));
    }
    return out;
}

}  // namespace cold
