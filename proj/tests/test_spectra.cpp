#include "doctest.h"

#include "crnsign/spectra.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_network.hpp"

#include <cmath>
#include <random>

using namespace crnsign;
using testing::load_fixture;

namespace {

Rational poly_at(const std::vector<Rational> &c, const Rational &x) {
    Rational v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        v = v * x + *it;
    return v;
}

std::vector<Rational> ones(std::size_t n) { return std::vector<Rational>(n, Rational(1)); }

} // namespace

TEST_CASE("eigenvalues satisfy the trace and determinant identities") {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> g;
    for (int n = 0; n < 100; ++n) {
        const int d = 1 + n % 7;
        Eigen::MatrixXd m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                m(i, j) = g(rng);
        auto eig = eigenvalues(m);
        REQUIRE(eig.size() == static_cast<std::size_t>(d));
        Complexd sum = 0, prod = 1;
        for (const auto &z : eig) {
            sum += z;
            prod *= z;
        }
        CHECK(std::abs(sum - m.trace()) <= 1e-10 * (1 + m.cwiseAbs().sum()));
        CHECK(std::abs(prod - m.determinant()) <= 1e-9 * (1 + std::pow(m.norm(), d)));
        for (std::size_t i = 1; i < eig.size(); ++i)
            CHECK(std::pair(eig[i - 1].real(), eig[i - 1].imag()) <=
                  std::pair(eig[i].real(), eig[i].imag()));
    }
    CHECK_THROWS_AS(eigenvalues(Eigen::MatrixXd(2, 3)), std::invalid_argument);
}

TEST_CASE("log grid") {
    auto g = log_grid(1, 1e6, 7);
    REQUIRE(g.size() == 7);
    CHECK(g.front() == 1);
    CHECK(g[3] == doctest::Approx(1e3));
    CHECK(g.back() == 1e6);
    CHECK_THROWS(log_grid(0, 1, 3));
    CHECK_THROWS(log_grid(1, 10, 1));
}

TEST_CASE("characteristic polynomial agrees with cofactor determinants") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<long> e(-4, 4);
    for (int n = 0; n < 40; ++n) {
        const std::size_t d = 1 + static_cast<std::size_t>(n % 5);
        RationalMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                m(i, j) = Rational(e(rng)) / (1 + static_cast<long>(n % 3));
        auto c = characteristic_polynomial(m);
        REQUIRE(c.size() == d + 1);
        for (long lam = -2; lam <= 2; ++lam) {
            RationalMatrix shifted = m;
            for (std::size_t i = 0; i < d; ++i)
                shifted(i, i) -= lam;
            CHECK(poly_at(c, Rational(lam)) == testing::laplace_det(shifted));
        }
    }
}

TEST_CASE("det J_hat = -k det J exactly at rational points") {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<long> num(1, 9);
    for (const char *name : {"delta_step", "two_classes", "complex_bounds", "unsigned_jacobian", "altfix_demo"}) {
        Network net = load_fixture(name);
        auto classes = find_bad_submatrices(stoichiometric_matrix(net));
        for (std::size_t c = 0; c < classes.size(); ++c) {
            FixReport single = fix_single(net, c);
            std::vector<Rational> x, rates;
            for (std::size_t i = 0; i < net.species_count(); ++i)
                x.push_back(Rational(num(rng)) / num(rng));
            for (std::size_t j = 0; j < net.reaction_count(); ++j)
                rates.push_back(Rational(num(rng)) / num(rng));
            Rational det_j = testing::laplace_det(exact_jacobian(net, rates, x));
            for (long k = 1; k <= 3; ++k) {
                auto r = rates;
                r.push_back(k);
                auto xh = x;
                xh.push_back(Rational(num(rng)));
                Rational det_hat = testing::laplace_det(exact_jacobian(single.result(), r, xh));
                CHECK_MESSAGE(det_hat == -k * det_j, name);
            }
        }
    }
}

TEST_CASE("numeric det relation and its falsification") {
    Network net = load_fixture("unsigned_jacobian");
    MassActionSystem sys(net);
    FixReport single = fix_single(net, 0);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(4);
    for (double k : {1.0, 10.0, 100.0}) {
        DetRelation r = det_relation_check(sys, single, x, k);
        CHECK(r.pass);
        CHECK(r.det_j != 0.0);
        JacobianPair jp = fixed_jacobians(sys, single, x, k);
        // perturb the entry with the largest cofactor; some cofactors vanish
        const Eigen::MatrixXd cof = jp.j_hat.determinant() * jp.j_hat.inverse().transpose();
        Eigen::Index i = 0, j = 0;
        cof.cwiseAbs().maxCoeff(&i, &j);
        REQUIRE(std::abs(cof(i, j)) > 1e-6);
        jp.j_hat(i, j) += 1e-3 * std::max(1.0, std::abs(jp.j_hat(i, j)));
        CHECK_FALSE(det_relation_check(jp.j, jp.j_hat, k).pass);
    }
    CHECK_THROWS_AS(det_relation_check(Eigen::MatrixXd::Ones(2, 2), Eigen::MatrixXd::Ones(2, 2), 1.0),
                    std::invalid_argument);
}

TEST_CASE("eigenvalues of the fixed Jacobian converge, one escapes to -k") {
    Network net = load_fixture("delta_step");
    MassActionSystem sys(net);
    FixReport single = fix_single(net, 0);
    ConvergenceReport r = eigen_convergence(sys, single, Eigen::VectorXd::Ones(4), log_grid(1, 1e6, 7));
    CHECK(r.passed());
    CHECK(r.slope <= -0.8);
    CHECK(r.matched_errors.back() <= 1e-3);
    CHECK(std::abs(r.escaper.back().imag()) == 0.0);
    CHECK(std::abs(r.escaper.back().real() + 1e6) <= 0.2e6);
    REQUIRE(r.chosen_k);
    CHECK(*r.chosen_k == 1e6);
    // trace oracle: sum of eig(J_hat_k) = trace J - k
    const double tr = sys.jacobian(Eigen::VectorXd::Ones(3)).trace();
    for (std::size_t i = 0; i < r.k_grid.size(); ++i) {
        Complexd s = 0;
        for (const auto &z : r.eig_j_hat[i])
            s += z;
        CHECK(s.real() == doctest::Approx(tr - r.k_grid[i]).epsilon(1e-9));
    }

    CHECK_THROWS_AS(eigen_convergence(sys, single, Eigen::VectorXd::Ones(4), log_grid(1, 100, 7)),
                    std::invalid_argument);
    CHECK_THROWS_AS(eigen_convergence(sys, single, Eigen::VectorXd::Ones(4), {1, 10, 100, 1e3}),
                    std::invalid_argument);
    FixReport full = sign_fix(net);
    CHECK_THROWS_AS(eigen_convergence(sys, full, Eigen::VectorXd::Ones(4), log_grid(1, 1e6, 7)),
                    std::invalid_argument);
    CHECK(step_report(full, 1).steps.size() == 1);
}

TEST_CASE("stability along a multi-step fix") {
    Network net = load_fixture("two_classes");
    FixReport rep = sign_fix(net);
    REQUIRE(rep.steps.size() == 2);
    StabilityChain chain = stability_chain(rep, net.rates_or(1.0), Eigen::VectorXd::Ones(7),
                                           log_grid(1, 1e6, 7));
    CHECK(chain.steps.size() == 2);
    CHECK(chain.preserved);
    // each k dominates the spectrum left by the step before
    REQUIRE(chain.chosen_rates.size() == 2);
    CHECK(chain.chosen_rates[1] >= 10 * chain.chosen_rates[0]);

    // six steps need k near 1e13; the roundoff tolerance then hides the
    // unstable eigenvalue near 0.16, and the grid runs out first
    Network six = load_fixture("altfix_demo");
    FixReport long_rep = sign_fix(six);
    Eigen::VectorXd x(4);
    x << 0.5, 1.0, 4.0, 0.5;
    StabilityChain partial = stability_chain(long_rep, six.rates_or(1.0), x, log_grid(1, 1e8, 9));
    CHECK(partial.verdict_original == Stability::unstable);
    CHECK_FALSE(partial.preserved);
    CHECK(std::isnan(partial.chosen_rates.back()));
    for (std::size_t i = 0; i + 1 < partial.steps.size(); ++i)
        CHECK(partial.steps[i].verdict_j == Stability::unstable);
}

TEST_CASE("h has degree at most d - 2") {
    for (const char *name : {"delta_step", "unsigned_jacobian", "altfix_demo"}) {
        Network net = load_fixture(name);
        FixReport single = fix_single(net, 0);
        HDegreeCheck h = h_degree_check(single, ones(net.reaction_count()), ones(net.species_count()));
        REQUIRE(h.applicable);
        CHECK_MESSAGE(h.pass, name);
        CHECK(h.degree_h <= static_cast<int>(h.d) - 2);
    }
    FixReport big = fix_single(load_fixture("two_classes"), 0);
    CHECK_FALSE(h_degree_check(big, ones(6), ones(7)).applicable);
}

TEST_CASE("determinant signs are opposite at random points") {
    Network net = load_fixture("unsigned_jacobian");
    MassActionSystem sys(net);
    FixReport single = fix_single(net, 0);
    DetSignSample s = det_sign_sampling(sys, single, 10.0, 20, 0);
    CHECK(s.samples == 20);
    CHECK(s.opposite);
    CHECK(s.positive == s.negative_hat);
    CHECK(s.negative == s.positive_hat);
}
