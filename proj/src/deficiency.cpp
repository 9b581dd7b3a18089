#include "crnsign/deficiency.hpp"

#include "crnsign/exactla.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace crnsign {

std::size_t DeficiencyReport::find(const Complex &c) const {
    for (std::size_t i = 0; i < complexes.size(); ++i)
        if (complexes[i] == c)
            return i;
    return npos;
}

std::size_t DeficiencyReport::class_of(std::size_t index) const {
    for (std::size_t c = 0; c < classes.size(); ++c)
        if (std::binary_search(classes[c].begin(), classes[c].end(), index))
            return c;
    return npos;
}

namespace {

std::size_t intern(std::vector<Complex> &list, const Complex &c) {
    for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i] == c)
            return i;
    list.push_back(c);
    return list.size() - 1;
}

std::size_t root(std::vector<std::size_t> &parent, std::size_t a) {
    while (parent[a] != a)
        a = parent[a] = parent[parent[a]];
    return a;
}

} // namespace

DeficiencyReport deficiency(const Network &net) {
    DeficiencyReport rep;
    for (const auto &r : net.reactions()) {
        std::size_t a = intern(rep.complexes, r.reactant);
        std::size_t b = intern(rep.complexes, r.product);
        rep.edges.emplace_back(a, b);
    }
    rep.n = rep.complexes.size();

    std::vector<std::size_t> parent(rep.n);
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto &[a, b] : rep.edges)
        parent[root(parent, a)] = root(parent, b);
    std::vector<std::size_t> label(rep.n, DeficiencyReport::npos);
    for (std::size_t i = 0; i < rep.n; ++i) {
        std::size_t r = root(parent, i);
        if (label[r] == DeficiencyReport::npos) {
            label[r] = rep.classes.size();
            rep.classes.emplace_back();
        }
        rep.classes[label[r]].push_back(i);
    }
    rep.ell = rep.classes.size();
    rep.s = rank(stoichiometric_matrix(net));
    rep.delta = static_cast<long>(rep.n) - static_cast<long>(rep.ell) - static_cast<long>(rep.s);
    return rep;
}

std::vector<DeltaAudit> delta_audit(const FixReport &report) {
    std::vector<DeltaAudit> out;
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
        const Network &n1 = report.stages[i];
        const Network &n2 = report.stages[i + 1];
        const FixStep &step = report.steps[i];
        DeltaAudit a;
        a.before = deficiency(n1);
        a.after = deficiency(n2);
        a.dn = static_cast<long>(a.after.n) - static_cast<long>(a.before.n);
        a.dl = static_cast<long>(a.after.ell) - static_cast<long>(a.before.ell);
        a.ds = static_cast<long>(a.after.s) - static_cast<long>(a.before.s);
        a.dd = a.after.delta - a.before.delta;

        const Complex &p = n1.reactions()[step.modified_column].product;    // p2 B + C2
        const Complex &bc2 = n2.reactions()[step.modified_column].product;  // B' + C2
        const Complex p2b({{step.zeroed_species, step.zeroed_value}});
        a.c2_empty = p.terms().size() == 1;
        const bool p_in_c2 = a.after.find(p) != DeficiencyReport::npos;
        const bool p2b_in_c1 = a.before.find(p2b) != DeficiencyReport::npos;

        a.phi_bc2 = (!a.c2_empty && p_in_c2) ? 2 : 1;
        a.phi_p2b = p2b_in_c1 ? 0 : 1;
        a.psi_bc2 = 0;
        if (p_in_c2) {
            std::size_t cb = a.after.class_of(a.after.find(bc2));
            std::size_t cp = a.after.class_of(a.after.find(p));
            a.psi_bc2 = cb != cp ? 1 : 0;
        }
        a.psi_b = (!p2b_in_c1 && !a.c2_empty) ? 1 : 0;

        if (a.phi_bc2 + a.phi_p2b != a.dn)
            throw ConsistencyError("step " + std::to_string(i + 1) +
                                   ": phi predicts a complex count change of " +
                                   std::to_string(a.phi_bc2 + a.phi_p2b) + ", recomputed " +
                                   std::to_string(a.dn));
        if (a.psi_bc2 + a.psi_b != a.dl)
            throw ConsistencyError("step " + std::to_string(i + 1) +
                                   ": psi predicts a linkage class change of " +
                                   std::to_string(a.psi_bc2 + a.psi_b) + ", recomputed " +
                                   std::to_string(a.dl));
        out.push_back(std::move(a));
    }
    return out;
}

bool check_single_positive_column(const Network &net) {
    RationalMatrix s = stoichiometric_matrix(net);
    for (const auto &cls : find_bad_submatrices(s)) {
        std::size_t positives = 0;
        for (std::size_t i = 0; i < s.rows(); ++i)
            if (sgn(s(i, cls.positive_entry.col)) > 0)
                ++positives;
        if (positives != 1)
            return false;
    }
    return true;
}

Eigen::VectorXd ComplexesDecomposition::psi(const Eigen::VectorXd &x) const {
    Eigen::VectorXd out(y.cols());
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
        double p = 1.0;
        for (Eigen::Index j = 0; j < y.rows(); ++j)
            if (y(j, c) != 0.0)
                p *= std::pow(x(j), y(j, c));
        out(c) = p;
    }
    return out;
}

ComplexesDecomposition complexes_decomposition(const MassActionSystem &sys) {
    const Network &net = sys.network();
    if (!net.in_reaction_form())
        throw ModelError("the complexes decomposition needs a network in reaction form");
    ComplexesDecomposition dec;
    DeficiencyReport def = deficiency(net);
    dec.complexes = def.complexes;
    const std::size_t d = net.species_count(), nc = dec.complexes.size();
    dec.y_exact = RationalMatrix(d, nc);
    for (std::size_t c = 0; c < nc; ++c)
        for (const auto &[i, coeff] : dec.complexes[c].terms())
            dec.y_exact(i, c) = coeff;
    dec.y = Eigen::MatrixXd(d, nc);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t c = 0; c < nc; ++c)
            dec.y(i, c) = dec.y_exact(i, c).get_d();
    dec.a_k = Eigen::MatrixXd::Zero(nc, nc);
    for (std::size_t r = 0; r < def.edges.size(); ++r) {
        const auto [from, to] = def.edges[r];
        const double k = sys.rates()[r];
        dec.a_k(to, from) += k;
        dec.a_k(from, from) -= k;
    }
    return dec;
}

double verify_decomposition(const MassActionSystem &sys, const ComplexesDecomposition &dec,
                            std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> expo(-1.0, 1.0);
    const auto d = static_cast<Eigen::Index>(sys.species_count());
    double worst = 0.0;
    for (std::size_t n = 0; n < samples; ++n) {
        Eigen::VectorXd x(d);
        for (Eigen::Index i = 0; i < d; ++i)
            x(i) = std::pow(10.0, expo(rng));
        Eigen::VectorXd v = sys.flux(x);
        Eigen::VectorXd lhs = sys.stoichiometry() * v;
        double scale = max_abs(sys.stoichiometry().cwiseAbs() * v);
        double err = max_abs(lhs - dec.evaluate(x));
        worst = std::max(worst, scale > 0.0 ? err / scale : err);
    }
    return worst;
}

} // namespace crnsign
