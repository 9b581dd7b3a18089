#pragma once

#include "crnsign/kinetics.hpp"
#include "crnsign/signfix.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crnsign {

using Complexd = std::complex<double>;

/// All eigenvalues of a square real matrix, sorted by (real, imag).
/// Throws std::invalid_argument for non-square input and std::runtime_error
/// if the QR iteration does not converge.
std::vector<Complexd> eigenvalues(const Eigen::MatrixXd &m);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Jacobians of a one-step fix at x_hat: J of the original at the first d
/// entries and J_hat of the fixed network with added rate k.
struct JacobianPair {
    Eigen::MatrixXd j;
    Eigen::MatrixXd j_hat;
};

JacobianPair fixed_jacobians(const MassActionSystem &sys, const FixReport &single,
                             const Eigen::VectorXd &x_hat, double k);

struct DetRelation {
    double k = 0.0;
    double det_j = 0.0;
    double det_j_hat = 0.0;
    double error = 0.0; // |det J_hat + k det J|
    /// max(1e-9 k |det J|, roundoff floor of det J_hat from its Hadamard bound)
    double bound = 0.0;
    bool pass = false;
};

/// det J_hat = -k det J, checked on given matrices.
DetRelation det_relation_check(const Eigen::MatrixXd &j, const Eigen::MatrixXd &j_hat, double k);

/// Same, for the Jacobians of a one-step fix at x_hat (x_hat > 0).
DetRelation det_relation_check(const MassActionSystem &sys, const FixReport &single,
                               const Eigen::VectorXd &x_hat, double k);

enum class Stability { stable, unstable, marginal };
const char *to_string(Stability s);

/// Classifies by the largest real part with tolerance `tol`.
Stability stability_of(const std::vector<Complexd> &eig, double tol);

struct ConvergenceReport {
    std::vector<double> k_grid;
    std::vector<Complexd> eig_j;
    std::vector<std::vector<Complexd>> eig_j_hat;
    /// Per k: largest distance between an eigenvalue of J and its match.
    std::vector<double> matched_errors;
    /// Per k: the eigenvalue matched to -k.
    std::vector<Complexd> escaper;
    /// Least-squares slope of log(error) against log(k) over the fitted points.
    double slope = 0.0;
    std::vector<std::size_t> fit_points;
    /// eig(J) has values closer together than the matching resolution.
    bool clustered = false;

    bool error_ok = false;   // error at largest k <= 1e-3 (1 + rho(J))
    bool escaper_ok = false; // real, <= -0.8 k and within 20% of -k at largest k
    bool slope_ok = false;   // slope <= -0.8
    Stability verdict_j = Stability::marginal;
    Stability verdict_j_hat = Stability::marginal;
    bool verdict_match = false;
    /// Largest grid k at which both the error and escaper criteria hold.
    std::optional<double> chosen_k;
    /// Per k: error and escaper criteria hold, and k >= 10 (1 + rho(J)).
    std::vector<bool> admissible;
    /// Per k: verdict on the d matched eigenvalues of J_hat_k.
    std::vector<Stability> verdicts_j_hat;

    bool passed() const { return error_ok && escaper_ok && slope_ok && verdict_match; }
};

/// Eigenvalues of J_hat_k against eig(J) and -k over a k grid (>= 5
/// increasing points spanning >= 4 decades). `single` must hold exactly one
/// step; throws std::invalid_argument otherwise.
ConvergenceReport eigen_convergence(const MassActionSystem &sys, const FixReport &single,
                                    const Eigen::VectorXd &x_hat,
                                    const std::vector<double> &k_grid);

/// Single-step report for step `i` of a multi-step report.
FixReport step_report(const FixReport &report, std::size_t i);

/// Inductive use of eigen_convergence along a multi-step fix. Step i runs on
/// stage i with the rates chosen for the earlier steps and takes the smallest
/// admissible k, so the stiff eigenvalue it adds stays apart from the ones
/// later steps add. The verdicts are compared at that k.
struct StabilityChain {
    std::vector<ConvergenceReport> steps;
    std::vector<double> chosen_rates; // NaN where no k was admissible
    Stability verdict_original = Stability::marginal;
    Stability verdict_final = Stability::marginal;
    bool preserved = false;
};

StabilityChain stability_chain(const FixReport &report, const std::vector<double> &rates,
                               const Eigen::VectorXd &x, const std::vector<double> &k_grid);

/// Signs of det J and det J_hat_k at random positive points.
struct DetSignSample {
    std::size_t samples = 0;
    std::size_t positive = 0, negative = 0, zero = 0;
    std::size_t positive_hat = 0, negative_hat = 0, zero_hat = 0;
    /// Every sample had sign(det J_hat) = -sign(det J).
    bool opposite = true;
    bool constant() const { return (positive == 0) + (negative == 0) + (zero == 0) >= 2; }
    bool constant_hat() const {
        return (positive_hat == 0) + (negative_hat == 0) + (zero_hat == 0) >= 2;
    }
};

DetSignSample det_sign_sampling(const MassActionSystem &sys, const FixReport &single, double k,
                                std::size_t samples, std::uint64_t seed);

/// Exact check, for d <= 4, that c_k(l) = det(J_hat_k - l I) is affine in k
/// with slope -c(l) and that h = (c_k + (k + l) c) / (s l) is a polynomial of
/// degree <= d - 2. J is evaluated exactly at the rational point `x` with
/// rational rates.
struct HDegreeCheck {
    bool applicable = false;
    std::size_t d = 0;
    bool affine_in_k = false;
    bool slope_is_minus_c = false;
    bool divisible = false;
    int degree_h = -1;
    std::vector<Rational> h; // coefficients, constant term first
    bool pass = false;
};

HDegreeCheck h_degree_check(const FixReport &single, const std::vector<Rational> &rates,
                            const std::vector<Rational> &x);

/// Coefficients of det(M - l I), constant term first (Faddeev-LeVerrier).
std::vector<Rational> characteristic_polynomial(const RationalMatrix &m);

/// Exact mass-action Jacobian at a rational point (integer exponents only).
RationalMatrix exact_jacobian(const Network &net, const std::vector<Rational> &rates,
                              const std::vector<Rational> &x);

} // namespace crnsign
