#include "crnsign/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <tuple>

namespace crnsign {

std::vector<Complexd> eigenvalues(const Eigen::MatrixXd &m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("eigenvalues need a square matrix");
    if (m.rows() == 0)
        return {};
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenvalue iteration did not converge");
    std::vector<Complexd> out(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(out.begin(), out.end(), [](const Complexd &a, const Complexd &b) {
        return std::make_pair(a.real(), a.imag()) < std::make_pair(b.real(), b.imag());
    });
    return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("log grid needs 0 < lo < hi and at least two points");
    std::vector<double> out(n);
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

namespace {

void require_single(const MassActionSystem &sys, const FixReport &single) {
    if (single.steps.size() != 1)
        throw std::invalid_argument("spectral checks need a report with exactly one fix step");
    if (stoichiometric_matrix(sys.network()) != stoichiometric_matrix(single.original()))
        throw std::invalid_argument("system and fix report describe different networks");
}

double hadamard_bound(const Eigen::MatrixXd &m) {
    double b = 1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        b *= std::max(m.row(i).norm(), std::numeric_limits<double>::min());
    return b;
}

int relative_sign(double det, const Eigen::MatrixXd &m) {
    if (std::abs(det) <= 1e-10 * hadamard_bound(m))
        return 0;
    return det > 0 ? 1 : -1;
}

} // namespace

JacobianPair fixed_jacobians(const MassActionSystem &sys, const FixReport &single,
                             const Eigen::VectorXd &x_hat, double k) {
    require_single(sys, single);
    const auto d = static_cast<Eigen::Index>(sys.species_count());
    if (x_hat.size() != d + 1)
        throw std::invalid_argument("x_hat must have one entry per species of the fixed network");
    std::vector<double> rates = sys.rates();
    rates.push_back(k);
    MassActionSystem fixed(single.result(), rates);
    return {sys.jacobian(x_hat.head(d)), fixed.jacobian(x_hat)};
}

DetRelation det_relation_check(const Eigen::MatrixXd &j, const Eigen::MatrixXd &j_hat, double k) {
    if (j.rows() != j.cols() || j_hat.rows() != j.rows() + 1 || j_hat.cols() != j_hat.rows())
        throw std::invalid_argument("det relation needs a d x d and a (d+1) x (d+1) matrix");
    DetRelation r;
    r.k = k;
    r.det_j = j.rows() ? j.determinant() : 1.0;
    r.det_j_hat = j_hat.determinant();
    r.error = std::abs(r.det_j_hat + k * r.det_j);
    // LU determinants are accurate to a few eps times the Hadamard bound
    double hadamard = 1.0;
    for (Eigen::Index i = 0; i < j_hat.rows(); ++i)
        hadamard *= j_hat.row(i).norm();
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                         static_cast<double>(j_hat.rows()) * hadamard;
    r.bound = std::max(1e-9 * k * std::abs(r.det_j), floor);
    r.pass = r.error <= r.bound;
    return r;
}

DetRelation det_relation_check(const MassActionSystem &sys, const FixReport &single,
                               const Eigen::VectorXd &x_hat, double k) {
    JacobianPair jp = fixed_jacobians(sys, single, x_hat, k);
    return det_relation_check(jp.j, jp.j_hat, k);
}

const char *to_string(Stability s) {
    switch (s) {
    case Stability::stable:
        return "stable";
    case Stability::unstable:
        return "unstable";
    default:
        return "marginal";
    }
}

Stability stability_of(const std::vector<Complexd> &eig, double tol) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto &z : eig)
        top = std::max(top, z.real());
    if (top < -tol)
        return Stability::stable;
    if (top > tol)
        return Stability::unstable;
    return Stability::marginal;
}

namespace {

// Greedy global matching: repeatedly pair the closest unmatched target and
// candidate, ties by index. Returns the candidate index for each target.
std::vector<std::size_t> greedy_match(const std::vector<Complexd> &targets,
                                      const std::vector<Complexd> &cands) {
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t t = 0; t < targets.size(); ++t)
        for (std::size_t c = 0; c < cands.size(); ++c)
            pairs.emplace_back(std::abs(targets[t] - cands[c]), t, c);
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::size_t> match(targets.size(), cands.size());
    std::vector<bool> used(cands.size(), false);
    for (const auto &[dist, t, c] : pairs)
        if (match[t] == cands.size() && !used[c]) {
            match[t] = c;
            used[c] = true;
        }
    return match;
}

double spectral_radius(const std::vector<Complexd> &eig) {
    double r = 0.0;
    for (const auto &z : eig)
        r = std::max(r, std::abs(z));
    return r;
}

void check_grid(const std::vector<double> &k_grid) {
    if (k_grid.size() < 5)
        throw std::invalid_argument("k grid needs at least 5 points");
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] > 0.0))
            throw std::invalid_argument("k grid values must be positive");
        if (i && !(k_grid[i] > k_grid[i - 1]))
            throw std::invalid_argument("k grid must be increasing");
    }
    if (k_grid.back() / k_grid.front() < 1e4 * (1.0 - 1e-12))
        throw std::invalid_argument("k grid must span at least 4 decades");
}

} // namespace

ConvergenceReport eigen_convergence(const MassActionSystem &sys, const FixReport &single,
                                    const Eigen::VectorXd &x_hat,
                                    const std::vector<double> &k_grid) {
    require_single(sys, single);
    check_grid(k_grid);
    const std::size_t d = sys.species_count();

    ConvergenceReport rep;
    rep.k_grid = k_grid;
    JacobianPair first = fixed_jacobians(sys, single, x_hat, k_grid.front());
    rep.eig_j = eigenvalues(first.j);
    const double rho = spectral_radius(rep.eig_j);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b)
            if (std::abs(rep.eig_j[a] - rep.eig_j[b]) < 1e-6 * (1.0 + rho))
                rep.clustered = true;

    const double err_limit = 1e-3 * (1.0 + rho);
    auto escaper_good = [](const Complexd &z, double k) {
        bool real = z.imag() == 0.0 || std::abs(z.imag()) <= 1e-12 * std::abs(z.real());
        return real && z.real() <= -0.8 * k && std::abs(z.real() + k) <= 0.2 * k;
    };

    std::vector<double> floors;
    for (double k : k_grid) {
        JacobianPair jp = fixed_jacobians(sys, single, x_hat, k);
        std::vector<Complexd> ev = eigenvalues(jp.j_hat);
        std::vector<Complexd> targets = rep.eig_j;
        targets.emplace_back(-k, 0.0);
        std::vector<std::size_t> m = greedy_match(targets, ev);
        double err = 0.0;
        for (std::size_t t = 0; t < d; ++t)
            err = std::max(err, std::abs(targets[t] - ev[m[t]]));
        rep.matched_errors.push_back(err);
        rep.escaper.push_back(ev[m[d]]);
        rep.eig_j_hat.push_back(ev);
        floors.push_back(100.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, jp.j_hat.norm()));
        const bool good = err <= err_limit && escaper_good(ev[m[d]], k);
        if (good)
            rep.chosen_k = k;
        rep.admissible.push_back(good && k >= 10.0 * (1.0 + rho));
    }

    // decay rate, fitted where k dominates the spectrum of J and the error is
    // above roundoff
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < k_grid.size(); ++i)
        if (k_grid[i] >= 10.0 * (1.0 + rho))
            eligible.push_back(i);
    for (auto i : eligible)
        if (rep.matched_errors[i] > floors[i])
            rep.fit_points.push_back(i);
    if (rep.fit_points.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(rep.fit_points.size());
        for (auto i : rep.fit_points) {
            double lx = std::log(k_grid[i]), ly = std::log(rep.matched_errors[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        rep.slope_ok = rep.slope <= -0.8;
    } else {
        rep.slope = std::numeric_limits<double>::quiet_NaN();
        // errors already at roundoff everywhere they are measured
        rep.slope_ok = !eligible.empty() && rep.fit_points.empty();
    }

    const std::size_t last = k_grid.size() - 1;
    rep.error_ok = rep.matched_errors[last] <= err_limit;
    rep.escaper_ok = escaper_good(rep.escaper[last], k_grid[last]);

    const double tol = 1e-9 * (1.0 + rho);
    rep.verdict_j = stability_of(rep.eig_j, tol);
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        std::vector<Complexd> targets = rep.eig_j;
        targets.emplace_back(-k_grid[i], 0.0);
        std::vector<std::size_t> m = greedy_match(targets, rep.eig_j_hat[i]);
        std::vector<Complexd> matched;
        for (std::size_t t = 0; t < d; ++t)
            matched.push_back(rep.eig_j_hat[i][m[t]]);
        rep.verdicts_j_hat.push_back(stability_of(matched, tol + rep.matched_errors[i]));
    }
    rep.verdict_j_hat = rep.verdicts_j_hat[last];
    rep.verdict_match = rep.verdict_j == rep.verdict_j_hat;
    return rep;
}

FixReport step_report(const FixReport &report, std::size_t i) {
    if (i >= report.steps.size())
        throw std::invalid_argument("step index out of range");
    FixReport sub;
    sub.stages = {report.stages[i], report.stages[i + 1]};
    sub.steps = {report.steps[i]};
    sub.classes = find_bad_submatrices(stoichiometric_matrix(report.stages[i]));
    for (std::size_t c = 0; c < sub.classes.size(); ++c)
        if (sub.classes[c].positive_entry == report.steps[i].target_class.positive_entry)
            sub.order = {c};
    return sub;
}

StabilityChain stability_chain(const FixReport &report, const std::vector<double> &rates,
                               const Eigen::VectorXd &x, const std::vector<double> &k_grid) {
    StabilityChain chain;
    if (report.steps.empty()) {
        MassActionSystem sys(report.original(), rates);
        std::vector<Complexd> ev = eigenvalues(sys.jacobian(x));
        chain.verdict_original = chain.verdict_final =
            stability_of(ev, 1e-9 * (1.0 + spectral_radius(ev)));
        chain.preserved = true;
        return chain;
    }
    std::vector<double> cur_rates = rates;
    Eigen::VectorXd cur_x = x;
    chain.preserved = true;
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
        FixReport sub = step_report(report, i);
        MassActionSystem sys(report.stages[i], cur_rates);
        const auto l = static_cast<Eigen::Index>(report.steps[i].modified_column);
        const double v_l = sys.flux(cur_x)(l);
        Eigen::VectorXd x_hat(cur_x.size() + 1);
        // the Jacobians do not depend on the new coordinate
        x_hat << cur_x, 1.0;
        ConvergenceReport conv = eigen_convergence(sys, sub, x_hat, k_grid);
        const auto pick = std::find(conv.admissible.begin(), conv.admissible.end(), true);
        if (pick == conv.admissible.end()) {
            chain.preserved = false;
            chain.chosen_rates.push_back(std::numeric_limits<double>::quiet_NaN());
            chain.steps.push_back(std::move(conv));
            break;
        }
        const auto idx = static_cast<std::size_t>(pick - conv.admissible.begin());
        const double k = k_grid[idx];
        if (conv.verdicts_j_hat[idx] != conv.verdict_j)
            chain.preserved = false;
        if (i == 0)
            chain.verdict_original = conv.verdict_j;
        else if (conv.verdict_j != chain.verdict_final)
            chain.preserved = false; // J of this stage, judged afresh
        chain.verdict_final = conv.verdicts_j_hat[idx];
        chain.chosen_rates.push_back(k);
        cur_rates.push_back(k);
        x_hat(x_hat.size() - 1) = v_l / k;
        cur_x = x_hat;
        chain.steps.push_back(std::move(conv));
    }
    return chain;
}

DetSignSample det_sign_sampling(const MassActionSystem &sys, const FixReport &single, double k,
                                std::size_t samples, std::uint64_t seed) {
    require_single(sys, single);
    const auto d = static_cast<Eigen::Index>(sys.species_count());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> expo(-1.0, 1.0);
    DetSignSample out;
    out.samples = samples;
    for (std::size_t n = 0; n < samples; ++n) {
        Eigen::VectorXd x_hat(d + 1);
        for (Eigen::Index i = 0; i <= d; ++i)
            x_hat(i) = std::pow(10.0, expo(rng));
        JacobianPair jp = fixed_jacobians(sys, single, x_hat, k);
        int s = relative_sign(jp.j.rows() ? jp.j.determinant() : 1.0, jp.j);
        int sh = relative_sign(jp.j_hat.determinant(), jp.j_hat);
        (s > 0 ? out.positive : s < 0 ? out.negative : out.zero)++;
        (sh > 0 ? out.positive_hat : sh < 0 ? out.negative_hat : out.zero_hat)++;
        if (sh != -s)
            out.opposite = false;
    }
    return out;
}

std::vector<Rational> characteristic_polynomial(const RationalMatrix &m) {
    const std::size_t n = m.rows();
    if (m.cols() != n)
        throw std::invalid_argument("characteristic polynomial needs a square matrix");
    // p(l) = det(l I - M) = sum c[i] l^i, c[n] = 1
    std::vector<Rational> c(n + 1);
    c[n] = 1;
    RationalMatrix mk(n, n); // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk;
        for (std::size_t i = 0; i < n; ++i)
            mk(i, i) += c[n - k + 1];
        RationalMatrix am = m * mk;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            tr += am(i, i);
        c[n - k] = -tr / static_cast<long>(k);
    }
    if (n % 2 == 1)
        for (auto &x : c)
            x = -x;
    return c;
}

RationalMatrix exact_jacobian(const Network &net, const std::vector<Rational> &rates,
                              const std::vector<Rational> &x) {
    const std::size_t d = net.species_count(), dp = net.reaction_count();
    if (rates.size() != dp || x.size() != d)
        throw std::invalid_argument("exact Jacobian: size mismatch");
    RationalMatrix s = stoichiometric_matrix(net);
    std::vector<std::vector<unsigned long>> e(dp, std::vector<unsigned long>(d, 0));
    for (std::size_t k = 0; k < dp; ++k)
        for (std::size_t j = 0; j < d; ++j)
            if (sgn(s(j, k)) < 0) {
                Rational ex = -s(j, k);
                if (ex.get_den() != 1)
                    throw std::invalid_argument("exact Jacobian needs integer reactant orders");
                e[k][j] = ex.get_num().get_ui();
            }
    auto power = [](const Rational &b, unsigned long p) {
        Rational r = 1;
        for (unsigned long i = 0; i < p; ++i)
            r *= b;
        return r;
    };
    RationalMatrix dv(dp, d);
    for (std::size_t k = 0; k < dp; ++k)
        for (std::size_t j = 0; j < d; ++j) {
            if (e[k][j] == 0)
                continue;
            Rational t = rates[k] * static_cast<long>(e[k][j]) * power(x[j], e[k][j] - 1);
            for (std::size_t i = 0; i < d; ++i)
                if (i != j)
                    t *= power(x[i], e[k][i]);
            dv(k, j) = t;
        }
    return s * dv;
}

HDegreeCheck h_degree_check(const FixReport &single, const std::vector<Rational> &rates,
                            const std::vector<Rational> &x) {
    if (single.steps.size() != 1)
        throw std::invalid_argument("h degree check needs a report with exactly one fix step");
    HDegreeCheck out;
    out.d = single.original().species_count();
    if (out.d > 4)
        return out;
    out.applicable = true;
    const std::size_t d = out.d;

    std::vector<Rational> c = characteristic_polynomial(exact_jacobian(single.original(), rates, x));
    std::vector<Rational> x_hat = x;
    x_hat.push_back(1);
    std::vector<std::vector<Rational>> ck;
    for (long k = 1; k <= 3; ++k) {
        std::vector<Rational> r = rates;
        r.push_back(Rational(k));
        ck.push_back(characteristic_polynomial(exact_jacobian(single.result(), r, x_hat)));
    }
    std::vector<Rational> slope(d + 2), intercept(d + 2);
    out.affine_in_k = true;
    for (std::size_t i = 0; i < d + 2; ++i) {
        slope[i] = ck[1][i] - ck[0][i];
        if (ck[2][i] - ck[1][i] != slope[i])
            out.affine_in_k = false;
        intercept[i] = ck[0][i] - slope[i];
    }
    out.slope_is_minus_c = true;
    for (std::size_t i = 0; i < d + 2; ++i)
        if (slope[i] != (i <= d ? -c[i] : Rational(0)))
            out.slope_is_minus_c = false;

    // c_0 + l c = s l h
    std::vector<Rational> rem = intercept;
    for (std::size_t i = 0; i <= d; ++i)
        rem[i + 1] += c[i];
    out.divisible = sgn(rem[0]) == 0;
    const Rational &s = single.steps.front().zeroed_value;
    out.h.assign(d + 1, Rational(0));
    for (std::size_t i = 1; i < d + 2; ++i)
        out.h[i - 1] = rem[i] / s;
    for (std::size_t i = 0; i < out.h.size(); ++i)
        if (sgn(out.h[i]) != 0)
            out.degree_h = static_cast<int>(i);
    while (out.h.size() > 1 && sgn(out.h.back()) == 0)
        out.h.pop_back();
    out.pass = out.affine_in_k && out.slope_is_minus_c && out.divisible &&
               out.degree_h <= static_cast<int>(d) - 2;
    return out;
}

} // namespace crnsign
