#include "crnsign/kinetics.hpp"

#include "crnsign/textio.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace crnsign {

namespace {

Eigen::MatrixXd to_double(const RationalMatrix &m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = m(i, j).get_d();
    return out;
}

} // namespace

double max_abs(const Eigen::VectorXd &v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

MassActionSystem::MassActionSystem(Network net, std::vector<double> rates)
    : net_(std::move(net)), rates_(std::move(rates)) {
    if (rates_.size() != net_.reaction_count())
        throw std::invalid_argument("need one rate constant per reaction (" +
                                    std::to_string(net_.reaction_count()) + "), got " +
                                    std::to_string(rates_.size()));
    for (double k : rates_)
        if (!(k > 0.0) || !std::isfinite(k))
            throw std::invalid_argument("rate constants must be positive and finite");
    RationalMatrix s = stoichiometric_matrix(net_);
    s_ = to_double(s);
    e_ = (-s_.transpose()).cwiseMax(0.0);
}

MassActionSystem::MassActionSystem(const Network &net, double fallback)
    : MassActionSystem(net, net.rates_or(fallback)) {}

void MassActionSystem::check_size(const Eigen::VectorXd &x) const {
    if (static_cast<std::size_t>(x.size()) != species_count())
        throw std::invalid_argument("state vector has " + std::to_string(x.size()) +
                                    " entries, expected " + std::to_string(species_count()));
}

Eigen::VectorXd MassActionSystem::flux_unchecked(const Eigen::VectorXd &x) const {
    Eigen::VectorXd v(e_.rows());
    for (Eigen::Index k = 0; k < e_.rows(); ++k) {
        double p = rates_[static_cast<std::size_t>(k)];
        for (Eigen::Index j = 0; j < e_.cols(); ++j)
            if (e_(k, j) != 0.0)
                p *= std::pow(x(j), e_(k, j));
        v(k) = p;
    }
    return v;
}

Eigen::VectorXd MassActionSystem::flux(const Eigen::VectorXd &x) const {
    check_size(x);
    if ((x.array() < 0.0).any() || !x.allFinite())
        throw std::invalid_argument("concentrations must be finite and nonnegative");
    return flux_unchecked(x);
}

Eigen::VectorXd MassActionSystem::rhs(const Eigen::VectorXd &x) const { return s_ * flux(x); }

Eigen::MatrixXd MassActionSystem::jacobian(const Eigen::VectorXd &x) const {
    check_size(x);
    if (!(x.array() > 0.0).all() || !x.allFinite())
        throw std::invalid_argument("Jacobian needs a strictly positive state");
    Eigen::VectorXd v = flux_unchecked(x);
    Eigen::MatrixXd dv(e_.rows(), e_.cols());
    for (Eigen::Index k = 0; k < e_.rows(); ++k)
        for (Eigen::Index j = 0; j < e_.cols(); ++j)
            dv(k, j) = e_(k, j) == 0.0 ? 0.0 : e_(k, j) * v(k) / x(j);
    return s_ * dv;
}

EquilibriumResult find_equilibrium(const MassActionSystem &sys, const Eigen::VectorXd &x0,
                                   const EquilibriumOptions &options) {
    const std::size_t d = sys.species_count();
    if (static_cast<std::size_t>(x0.size()) != d)
        throw std::invalid_argument("x0 has the wrong length");
    if (!(x0.array() > 0.0).all())
        throw std::invalid_argument("x0 must be strictly positive");
    std::vector<bool> fixed(d, false);
    for (auto c : options.clamped) {
        if (c >= d)
            throw std::invalid_argument("clamped species index out of range");
        fixed[c] = true;
    }
    std::vector<Eigen::Index> free;
    for (std::size_t i = 0; i < d; ++i)
        if (!fixed[i])
            free.push_back(static_cast<Eigen::Index>(i));
    const auto nf = static_cast<Eigen::Index>(free.size());

    EquilibriumResult res;
    Eigen::VectorXd x = x0;
    Eigen::VectorXd f = sys.rhs(x);
    res.tolerance = 1e-9 * (1.0 + max_abs(f));
    // iterate past the tolerance: the residual says little about the error in x
    // when the Jacobian is badly conditioned
    const double target = 1e-14 * (1.0 + max_abs(f));
    double norm = f.norm();

    std::size_t it = 0;
    for (; it < options.max_iterations && max_abs(f) > target; ++it) {
        Eigen::MatrixXd jf = sys.jacobian(x);
        Eigen::MatrixXd j(jf.rows(), nf);
        for (Eigen::Index c = 0; c < nf; ++c)
            j.col(c) = jf.col(free[static_cast<std::size_t>(c)]);
        Eigen::MatrixXd a = j.transpose() * j;
        double mu = 1e-12 * std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
        a.diagonal().array() += mu;
        Eigen::VectorXd step = a.ldlt().solve(-j.transpose() * f);

        double alpha = 1.0;
        auto trial = [&](double al) {
            Eigen::VectorXd y = x;
            for (Eigen::Index c = 0; c < nf; ++c)
                y(free[static_cast<std::size_t>(c)]) += al * step(c);
            return y;
        };
        Eigen::VectorXd y = trial(alpha);
        while (!(y.array() > 0.0).all() && alpha > 1e-300) {
            alpha *= 0.5;
            y = trial(alpha);
        }
        Eigen::VectorXd fy = sys.rhs(y);
        while (fy.norm() > (1.0 - 1e-4 * alpha) * norm && alpha > 1e-12) {
            alpha *= 0.5;
            y = trial(alpha);
            fy = sys.rhs(y);
        }
        if (fy.norm() >= norm) {
            res.message = "line search stalled";
            break;
        }
        x = y;
        f = fy;
        norm = f.norm();
    }
    res.iterations = it;

    // components driven towards zero: snap them if the boundary point is an
    // equilibrium at least as good as the iterate
    double scale = std::max(1.0, max_abs(x));
    Eigen::VectorXd snapped = x;
    std::vector<std::size_t> tiny;
    for (std::size_t i = 0; i < d; ++i)
        if (!fixed[i] && x(static_cast<Eigen::Index>(i)) <= 1e-4 * scale) {
            snapped(static_cast<Eigen::Index>(i)) = 0.0;
            tiny.push_back(i);
        }
    if (!tiny.empty()) {
        Eigen::VectorXd fs = sys.rhs(snapped);
        if (max_abs(fs) <= std::max(res.tolerance, max_abs(f))) {
            x = snapped;
            f = fs;
            res.boundary = tiny;
        }
    }

    res.x = x;
    res.residual = max_abs(f);
    res.converged = res.residual <= res.tolerance;
    if (!res.converged) {
        if (res.message.empty())
            res.message = "no convergence after " + std::to_string(it) + " iterations";
    } else if (!res.boundary.empty() && !options.allow_boundary) {
        res.converged = false;
        res.message = "iterates approach the orthant boundary; no positive equilibrium found";
    } else {
        res.message = res.boundary.empty() ? "positive equilibrium" : "boundary equilibrium";
    }
    return res;
}

std::vector<double> stage_rates(const FixReport &report, const std::vector<double> &base,
                                std::size_t stage) {
    if (base.size() != report.original().reaction_count())
        throw std::invalid_argument("rate vector does not match the original network");
    if (stage > report.steps.size())
        throw std::invalid_argument("stage out of range");
    std::vector<double> out = base;
    for (std::size_t i = 0; i < stage; ++i)
        out.push_back(report.steps[i].added_rate);
    return out;
}

EquilibriumPair lift_equilibrium(const FixReport &report, const std::vector<double> &rates,
                                 const Eigen::VectorXd &x, double tol) {
    MassActionSystem orig(report.original(), stage_rates(report, rates, 0));
    EquilibriumPair out;
    out.x = x;
    out.residual = max_abs(orig.rhs(x));
    if (out.residual > tol)
        throw std::invalid_argument("state is not an equilibrium of the original network "
                                    "(residual " + format_double(out.residual) + ")");
    Eigen::VectorXd cur = x;
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
        const auto &step = report.steps[i];
        MassActionSystem sys(report.stages[i], stage_rates(report, rates, i));
        Eigen::VectorXd v = sys.flux(cur);
        Eigen::VectorXd next(cur.size() + 1);
        next << cur, v(static_cast<Eigen::Index>(step.modified_column)) / step.added_rate;
        cur = std::move(next);
    }
    MassActionSystem fixed(report.result(), stage_rates(report, rates, report.steps.size()));
    out.x_hat = cur;
    out.residual_hat = max_abs(fixed.rhs(cur));
    if (out.residual_hat > 10.0 * tol)
        throw ConsistencyError("lifted state misses the fixed network's equilibrium set");
    return out;
}

Eigen::VectorXd project_equilibrium(const FixReport &report, const std::vector<double> &rates,
                                    const Eigen::VectorXd &x_hat, double tol) {
    MassActionSystem fixed(report.result(), stage_rates(report, rates, report.steps.size()));
    double r = max_abs(fixed.rhs(x_hat));
    if (r > tol)
        throw std::invalid_argument("state is not an equilibrium of the fixed network "
                                    "(residual " + format_double(r) + ")");
    const auto d = static_cast<Eigen::Index>(report.original().species_count());
    Eigen::VectorXd x = x_hat.head(d);
    MassActionSystem orig(report.original(), rates);
    if (max_abs(orig.rhs(x)) > 10.0 * tol)
        throw ConsistencyError("projection of a fixed equilibrium is not an equilibrium");
    return x;
}

Trajectory simulate(const MassActionSystem &sys, const Eigen::VectorXd &x0, double t_end,
                    double dt) {
    if (!(dt > 0.0) || !(t_end >= 0.0))
        throw std::invalid_argument("need dt > 0 and t_end >= 0");
    auto f = [&sys](Eigen::VectorXd y) {
        if (!y.allFinite() || (y.array() < -1e-9).any())
            throw std::runtime_error("integration left the nonnegative orthant");
        y = y.cwiseMax(0.0);
        return sys.rhs(y);
    };
    Trajectory tr;
    Eigen::VectorXd x = x0;
    f(x);
    double t = 0.0;
    tr.t.push_back(t);
    tr.x.push_back(x);
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    for (std::size_t n = 0; n < steps; ++n) {
        double h = std::min(dt, t_end - t);
        Eigen::VectorXd k1 = f(x);
        Eigen::VectorXd k2 = f(x + 0.5 * h * k1);
        Eigen::VectorXd k3 = f(x + 0.5 * h * k2);
        Eigen::VectorXd k4 = f(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite() || (x.array() < -1e-9).any())
            throw std::runtime_error("integration left the nonnegative orthant at t = " +
                                     format_double(t + h));
        t = n + 1 == steps ? t_end : t + h;
        tr.t.push_back(t);
        tr.x.push_back(x);
    }
    return tr;
}

void write_trajectory_csv(std::ostream &out, const Trajectory &traj, const Network &net) {
    out << 't';
    for (const auto &s : net.species())
        out << ',' << s.name;
    out << '\n';
    for (std::size_t n = 0; n < traj.t.size(); ++n) {
        out << format_double(traj.t[n]);
        for (Eigen::Index i = 0; i < traj.x[n].size(); ++i)
            out << ',' << format_double(traj.x[n](i));
        out << '\n';
    }
}

} // namespace crnsign
