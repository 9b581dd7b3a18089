#pragma once

#include "crnsign/model.hpp"
#include "crnsign/signfix.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace crnsign {

/// Network with positive mass-action rate constants, evaluated in doubles.
class MassActionSystem {
  public:
    MassActionSystem(Network net, std::vector<double> rates);
    /// Uses the rates stored on the network, `fallback` where unset.
    explicit MassActionSystem(const Network &net, double fallback = 1.0);

    const Network &network() const { return net_; }
    const std::vector<double> &rates() const { return rates_; }
    const Eigen::MatrixXd &stoichiometry() const { return s_; }
    /// exponents(k, j) = -min(0, S_jk): order of species j in reaction k.
    const Eigen::MatrixXd &exponents() const { return e_; }
    std::size_t species_count() const { return static_cast<std::size_t>(s_.rows()); }
    std::size_t reaction_count() const { return static_cast<std::size_t>(s_.cols()); }

    /// v_k = k_k prod_j x_j^e_kj with 0^0 = 1. Throws on negative x.
    Eigen::VectorXd flux(const Eigen::VectorXd &x) const;
    /// S v(x).
    Eigen::VectorXd rhs(const Eigen::VectorXd &x) const;
    /// S v'(x), analytic. Throws unless x > 0.
    Eigen::MatrixXd jacobian(const Eigen::VectorXd &x) const;

  private:
    void check_size(const Eigen::VectorXd &x) const;
    Eigen::VectorXd flux_unchecked(const Eigen::VectorXd &x) const;

    Network net_;
    std::vector<double> rates_;
    Eigen::MatrixXd s_;
    Eigen::MatrixXd e_;
};

double max_abs(const Eigen::VectorXd &v);

struct EquilibriumOptions {
    std::size_t max_iterations = 200;
    /// Accept equilibria with components collapsed onto the orthant boundary.
    bool allow_boundary = false;
    /// Species held at their x0 value (e.g. to pick one member of a family).
    std::vector<std::size_t> clamped;
};

struct EquilibriumResult {
    bool converged = false;
    Eigen::VectorXd x;
    double residual = 0.0;
    double tolerance = 0.0;
    std::size_t iterations = 0;
    /// Components that collapsed to zero and were set exactly to 0.
    std::vector<std::size_t> boundary;
    std::string message;
};

/// Damped Gauss-Newton on S v(x) = 0 from x0 > 0, with Tikhonov-regularized
/// normal equations and step halving to stay in the open orthant. Converged
/// means ||S v(x)||_inf <= 1e-9 (1 + ||S v(x0)||_inf).
EquilibriumResult find_equilibrium(const MassActionSystem &sys, const Eigen::VectorXd &x0,
                                   const EquilibriumOptions &options = {});

struct EquilibriumPair {
    Eigen::VectorXd x;
    Eigen::VectorXd x_hat;
    double residual = 0.0;
    double residual_hat = 0.0;
};

/// Rate vector of stage `stage` of a fix report: `base` for the original
/// reactions followed by the added rates of the first `stage` steps.
std::vector<double> stage_rates(const FixReport &report, const std::vector<double> &base,
                                std::size_t stage);

/// Extends an equilibrium x of the original network through every fix step:
/// x_inf = v(x)_l / k_step. Throws std::invalid_argument if x is not an
/// equilibrium within `tol`, ConsistencyError if the lift misses 10 tol.
EquilibriumPair lift_equilibrium(const FixReport &report, const std::vector<double> &rates,
                                 const Eigen::VectorXd &x, double tol = 1e-8);

/// First d entries of an equilibrium of the fixed network.
Eigen::VectorXd project_equilibrium(const FixReport &report, const std::vector<double> &rates,
                                    const Eigen::VectorXd &x_hat, double tol = 1e-8);

struct Trajectory {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> x;
};

/// Classical RK4 with fixed step. Throws std::runtime_error on NaN or a
/// component below -1e-9.
Trajectory simulate(const MassActionSystem &sys, const Eigen::VectorXd &x0, double t_end,
                    double dt);

void write_trajectory_csv(std::ostream &out, const Trajectory &traj, const Network &net);

} // namespace crnsign
