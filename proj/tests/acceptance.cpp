// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "crnsign/deficiency.hpp"
#include "crnsign/spectra.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace crnsign;
using testing::load_fixture;

namespace {

// pinned tolerances
constexpr double kLiftResidual = 1e-8;
constexpr double kProjectLift = 1e-12;
constexpr double kFamily = 1e-8;
constexpr double kSlope = -0.8;
constexpr double kEscaper = 0.2;
constexpr std::size_t kDetPoints = 20;
constexpr std::uint64_t kDetSeed = 1;
constexpr std::uint64_t kPropertySeed = 2024;
constexpr std::size_t kPropertyNetworks = 500;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

RationalVector rv(std::initializer_list<long> xs) {
    RationalVector v;
    for (long x : xs)
        v.push_back(x);
    return v;
}

void criterion1(Verdict &v) {
    Network net = load_fixture("two_classes");
    RationalMatrix s = stoichiometric_matrix(net);
    v.require(s == rational_matrix({{-1, -1, 0, 0, 0, 0},
                                    {-1, 0, 1, -1, 0, 0},
                                    {0, -1, -1, 1, -1, 1},
                                    {0, 0, -1, 1, 2, -2},
                                    {0, 0, 0, 0, -1, 1},
                                    {1, 0, 0, 0, 0, 0},
                                    {0, 1, 0, 0, 0, 0}}),
              "parsed S");
    FixReport rep = sign_fix(net);
    RationalMatrix hat = stoichiometric_matrix(rep.result());
    v.require(hat == rational_matrix({{-1, -1, 0, 0, 0, 0, 0, 0},
                                      {-1, 0, 1, -1, 0, 0, 0, 0},
                                      {0, -1, -1, 1, -1, 0, 0, 1},
                                      {0, 0, -1, 1, 0, -2, 2, 0},
                                      {0, 0, 0, 0, -1, 1, 0, 0},
                                      {1, 0, 0, 0, 0, 0, 0, 0},
                                      {0, 1, 0, 0, 0, 0, 0, 0},
                                      {0, 0, 0, 0, 1, 0, -1, 0},
                                      {0, 0, 0, 0, 0, 1, 0, -1}}),
              "sign-fixed S_hat");
    v.detail << "S " << s.rows() << "x" << s.cols() << " and S_hat " << hat.rows() << "x" << hat.cols()
             << " equal the reference matrices exactly";
}

void criterion2(Verdict &v) {
    Network ex = load_fixture("two_classes");
    FixReport rep = sign_fix(ex);
    const auto classes = find_bad_submatrices(stoichiometric_matrix(ex)).size();
    const auto classes_hat = find_bad_submatrices(stoichiometric_matrix(rep.result())).size();
    const auto first = count_ambiguous(jacobian_sign_status(load_fixture("unsigned_jacobian")));
    const auto second = count_ambiguous(jacobian_sign_status(load_fixture("signed_jacobian")));
    v.require(classes == 2, "the two-class network classes");
    v.require(classes_hat == 0, "S_hat classes");
    v.require(first == 1, "first network ambiguous entries");
    v.require(second == 0, "second network ambiguous entries");
    v.detail << "classes " << classes << " -> " << classes_hat << ", ambiguous entries " << first
             << " and " << second;
}

void criterion3(Verdict &v) {
    Network net = load_fixture("altfix_demo");
    AltFixReport alt = altfix(net);
    const RationalMatrix &s = alt.s, &st = alt.s_tilde;
    v.require(same_span(kernel_basis(s, KernelSide::right).vectors,
                        {rv({0, 0, 0, 1, 1}), rv({1, 2, 1, 0, 0})}, 5),
              "ker S");
    v.require(same_span(kernel_basis(st, KernelSide::right).vectors, {rv({2, 0, 4, 1, 3, 2})}, 6),
              "ker S_tilde");
    v.require(same_span(kernel_basis(s, KernelSide::left).vectors, {rv({1, 1, 1, 1})}, 4), "ker S^t");
    v.require(kernel_basis(st, KernelSide::left).dimension() == 0, "ker S_tilde^t");
    const bool c = is_conserving(s).conserving, ct = is_conserving(st).conserving;
    v.require(c, "S conserving");
    v.require(!ct, "S_tilde not conserving");
    v.detail << "kernel spans exact, conserving " << c << " -> " << ct;
}

void criterion4(Verdict &v) {
    double worst_res = 0.0, worst_proj = 0.0;
    for (const char *name : {"delta_step", "two_classes"}) {
        Network net = load_fixture(name);
        std::vector<double> rates(net.reaction_count(), 1.0);
        MassActionSystem sys(net, rates);
        EquilibriumOptions opt;
        opt.allow_boundary = true; // neither network has a positive equilibrium
        EquilibriumResult eq = find_equilibrium(sys, Eigen::VectorXd::Ones(net.species_count()), opt);
        v.require(eq.converged, std::string(name) + " equilibrium: " + eq.message);
        if (!eq.converged)
            continue;
        FixReport rep = sign_fix(net);
        EquilibriumPair pair = lift_equilibrium(rep, rates, eq.x);
        MassActionSystem fixed(rep.result(), stage_rates(rep, rates, rep.steps.size()));
        const double res = max_abs(fixed.rhs(pair.x_hat));
        const double proj = max_abs(project_equilibrium(rep, rates, pair.x_hat) - eq.x);
        worst_res = std::max(worst_res, res);
        worst_proj = std::max(worst_proj, proj);
        v.require(res <= kLiftResidual, std::string(name) + " lifted residual");
        v.require(proj <= kProjectLift, std::string(name) + " project after lift");
    }

    MassActionSystem sys(load_fixture("altfix_demo"));
    EquilibriumOptions opt;
    opt.clamped = {1};
    EquilibriumResult eq = find_equilibrium(sys, Eigen::VectorXd::Ones(4), opt);
    Eigen::VectorXd family(4);
    family << 0.5, 1.0, 4.0, 0.5; // unit rates, x2 = 1
    const double err = eq.converged ? max_abs(eq.x - family) : INFINITY;
    v.require(err <= kFamily, "closed-form family at x2 = 1");
    v.detail << "lifted residual " << worst_res << ", project after lift " << worst_proj
             << ", family error " << err;
}

void criterion5(Verdict &v) {
    std::mt19937_64 rng(kDetSeed);
    std::uniform_real_distribution<double> expo(-1.0, 1.0);
    std::size_t checks = 0, failures = 0;
    double worst = 0.0;
    for (const char *name : {"delta_step", "two_classes", "complex_bounds", "unsigned_jacobian", "altfix_demo"}) {
        Network net = load_fixture(name);
        MassActionSystem sys(net);
        FixReport single = fix_single(net, 0);
        for (std::size_t p = 0; p < kDetPoints; ++p) {
            Eigen::VectorXd x(static_cast<Eigen::Index>(net.species_count() + 1));
            for (Eigen::Index i = 0; i < x.size(); ++i)
                x(i) = std::pow(10.0, expo(rng));
            for (double k : {1.0, 10.0, 100.0}) {
                DetRelation r = det_relation_check(sys, single, x, k);
                ++checks;
                failures += !r.pass;
                worst = std::max(worst, r.error / r.bound);
            }
        }
    }
    v.require(failures == 0, std::to_string(failures) + " det relation failures");

    Network net = load_fixture("delta_step");
    MassActionSystem sys(net);
    FixReport single = fix_single(net, 0);
    ConvergenceReport c = eigen_convergence(sys, single, Eigen::VectorXd::Ones(4), log_grid(1, 1e6, 7));
    const double k = c.k_grid.back();
    const Complexd esc = c.escaper.back();
    const bool escaper = esc.imag() == 0.0 && std::abs(esc.real() + k) <= kEscaper * k;
    v.require(c.fit_points.size() >= 2 && c.slope <= kSlope, "matched-error slope");
    v.require(escaper, "real escaper within 20% of -k");
    v.detail << checks << " det checks (worst error/bound " << worst << "), slope " << c.slope
             << ", escaper " << esc.real() << " at k = " << k;
}

void criterion6(Verdict &v) {
    Network l = load_fixture("complex_bounds");
    FixReport ls = fix_single(l, 0);
    DeficiencyReport a = deficiency(l), b = deficiency(ls.result());
    v.require(a.n == 5 && a.ell == 2 && b.n == 8 && b.ell == 4, "(n, ell) of complex_bounds");
    auto la = delta_audit(ls);
    v.require(la.size() == 1 && la[0].dn == 3 && la[0].dl == 2, "dn = 3, dl = 2");

    auto ta = delta_audit(fix_single(load_fixture("delta_step"), 0));
    v.require(ta.size() == 1 && ta[0].dd == 1, "ddelta = 1 on delta_step");
    const long d1 = deficiency(load_fixture("unsigned_jacobian")).delta;
    const long d2 = deficiency(load_fixture("signed_jacobian")).delta;
    v.require(d1 == 0 && d2 == 1, "section 4.1 deficiencies");

    std::size_t audited = 0;
    for (const char *name : {"two_classes", "delta_step", "complex_bounds", "unsigned_jacobian", "signed_jacobian", "altfix_demo"}) {
        try {
            for (const auto &s : delta_audit(sign_fix(load_fixture(name)))) {
                ++audited;
                v.require(s.phi_bc2 + s.phi_p2b == s.dn && s.psi_bc2 + s.psi_b == s.dl,
                          std::string(name) + " phi/psi");
            }
        } catch (const ConsistencyError &e) {
            v.require(false, e.what());
        }
    }
    v.detail << "(" << a.n << "," << a.ell << ") -> (" << b.n << "," << b.ell << "), dn "
             << (la.empty() ? 0 : la[0].dn) << ", dl " << (la.empty() ? 0 : la[0].dl)
             << ", ddelta " << (ta.empty() ? 0 : ta[0].dd) << ", deltas " << d1 << " and " << d2
             << ", " << audited << " audited steps";
}

void criterion7(Verdict &v) {
    testing::PropertyTally t = testing::run_properties(kPropertySeed, kPropertyNetworks);
    const std::pair<const char *, const testing::PropertyPart *> parts[] = {
        {"a", &t.fixed_is_signed},      {"b", &t.kernels_preserved},
        {"c", &t.deficiency_steps},     {"d", &t.permutation_relation},
        {"e", &t.cycle_bijection},      {"f", &t.decomposition},
        {"g", &t.jacobian_fd}};
    v.detail << t.networks << " networks (" << t.networks_with_classes << " with bad classes):";
    for (const auto &[name, p] : parts) {
        v.detail << " " << name << " " << p->checked - p->failed << "/" << p->checked;
        v.require(p->pass(), std::string("part ") + name);
        if (p->failed)
            std::cerr << "part " << name << " first failure: " << p->first_failure << "\n";
    }
}

// Independent verdict: equal nullities on both sides, and every lifted kernel
// vector of s annihilated by s_check.
bool correspondence_oracle(const RationalMatrix &s, const RationalMatrix &sc, FixLocation at) {
    if (testing::naive_rank(sc) != testing::naive_rank(s) + 1)
        return false;
    for (const auto &v : kernel_basis(s, KernelSide::right).vectors) {
        RationalVector lifted = v;
        lifted.push_back(v[at.column]);
        for (const Rational &e : sc * lifted)
            if (e != 0)
                return false;
    }
    const RationalMatrix sct = sc.transpose();
    for (const auto &w : kernel_basis(s, KernelSide::left).vectors) {
        RationalVector lifted = w;
        lifted.push_back(s(at.species, at.column) * w[at.species]);
        for (const Rational &e : sct * lifted)
            if (e != 0)
                return false;
    }
    return true;
}

void criterion8(Verdict &v) {
    std::size_t broken = 0, rejected = 0, kept = 0, accepted = 0;
    for (const char *name : {"two_classes", "delta_step", "complex_bounds", "unsigned_jacobian", "altfix_demo"}) {
        FixReport single = fix_single(load_fixture(name), 0);
        const RationalMatrix s = stoichiometric_matrix(single.original());
        const RationalMatrix sc = stoichiometric_matrix(single.result());
        const FixStep &st = single.steps.front();
        const std::size_t col = sc.cols() - 1, row = sc.rows() - 1;
        std::vector<RationalMatrix> corrupted(4, sc);
        corrupted[0](st.zeroed_species, col) += 1;    // wrong multiple returned
        corrupted[1](row, st.modified_column) = 2;    // wrong amount of B' produced
        corrupted[2](st.zeroed_species, st.modified_column) = st.zeroed_value; // entry not moved
        for (std::size_t i = 0; i < sc.rows(); ++i)   // added reaction does nothing
            corrupted[3](i, col) = 0;
        std::size_t broken_here = 0;
        for (const auto &m : corrupted) {
            const bool holds = correspondence_oracle(s, m, st.location());
            const bool verdict = kernel_correspondence_check(s, m, st.location());
            if (holds) {
                ++kept;
                accepted += verdict;
            } else {
                ++broken, ++broken_here;
                rejected += !verdict;
            }
        }
        v.require(broken_here > 0, std::string("no breaking corruption on ") + name);
    }
    v.require(rejected == broken, "corrupted S_check accepted");
    v.require(accepted == kept, "correspondence-preserving corruption rejected");
    std::size_t det_caught = 0, det_total = 0;
    for (const char *name : {"delta_step", "unsigned_jacobian", "two_classes"}) {
        Network net = load_fixture(name);
        MassActionSystem sys(net);
        FixReport single = fix_single(net, 0);
        Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(net.species_count() + 1));
        for (double k : {1.0, 10.0, 100.0}) {
            JacobianPair jp = fixed_jacobians(sys, single, x, k);
            const double eps = 1e-3 * jp.j_hat.cwiseAbs().maxCoeff();
            Eigen::MatrixXd shifted =
                jp.j_hat + eps * Eigen::MatrixXd::Identity(jp.j_hat.rows(), jp.j_hat.cols());
            ++det_total;
            det_caught += !det_relation_check(jp.j, shifted, k).pass;
        }
    }
    v.require(det_caught == det_total, "perturbed J_hat accepted");
    v.detail << "kernel-breaking S_check rejected " << rejected << "/" << broken
             << ", kernel-preserving accepted " << accepted << "/" << kept << ", perturbed J_hat rejected " << det_caught << "/" << det_total;
}

} // namespace

int main() {
    const std::pair<const char *, std::function<void(Verdict &)>> criteria[] = {
        {"two-class network end-to-end", criterion1},
        {"bad-class detection", criterion2},
        {"kernel fixtures", criterion3},
        {"equilibrium correspondence", criterion4},
        {"spectral relations", criterion5},
        {"deficiency fixtures", criterion6},
        {"property suites", criterion7},
        {"falsification controls", criterion8}};
    int failed = 0;
    int n = 0;
    for (const auto &[title, check] : criteria) {
        ++n;
        Verdict v;
        try {
            check(v);
        } catch (const std::exception &e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << title
                  << "): " << v.detail.str() << std::endl;
    }
    std::cout << (failed ? "FAIL" : "PASS") << " " << (8 - failed) << "/8 criteria" << std::endl;
    return failed ? 1 : 0;
}
