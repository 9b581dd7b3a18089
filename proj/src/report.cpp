#include "crnsign/report.hpp"

#include "crnsign/textio.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

namespace crnsign::report {

Json exact(const RationalMatrix &m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json exact(const RationalVector &v) {
    Json out = Json::array();
    for (const auto &q : v)
        out.push_back(to_string(q));
    return out;
}

Json f64(const Eigen::MatrixXd &m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json f64(const Eigen::VectorXd &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

Json f64(const std::vector<double> &v) {
    Json out = Json::array();
    for (double x : v)
        out.push_back(x);
    return out;
}

Json status(const StatusMatrix &m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(std::string(1, to_char(m(i, j))));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json complex_number(const Complexd &z) { return Json::array({z.real(), z.imag()}); }

namespace {

Json complex_list(const std::vector<Complexd> &zs) {
    Json out = Json::array();
    for (const auto &z : zs)
        out.push_back(complex_number(z));
    return out;
}

Json optional_double(const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); }

Json entry(const Network &net, EntryIndex e) {
    return Json{{"species", net.species_name(e.row)}, {"reaction", e.col + 1}};
}

Json entry_list(const Network &net, const std::vector<EntryIndex> &es) {
    Json out = Json::array();
    for (const auto &e : es)
        out.push_back(entry(net, e));
    return out;
}

Json kernel_vectors(const KernelBasis &b) {
    Json out = Json::array();
    for (const auto &v : b.vectors)
        out.push_back(exact(v));
    return out;
}

Json species_names(const Network &net, const std::vector<std::size_t> &idx) {
    Json out = Json::array();
    for (auto i : idx)
        out.push_back(net.species_name(i));
    return out;
}

Json deficiency_numbers(const Network &net, const DeficiencyReport &d) {
    Json complexes = Json::array();
    for (const auto &c : d.complexes)
        complexes.push_back(complex_to_string(net, c));
    Json classes = Json::array();
    for (const auto &cls : d.classes) {
        Json members = Json::array();
        for (auto c : cls)
            members.push_back(complex_to_string(net, d.complexes[c]));
        classes.push_back(std::move(members));
    }
    return Json{{"n", d.n},
                {"ell", d.ell},
                {"s", d.s},
                {"delta", d.delta},
                {"complexes", std::move(complexes)},
                {"linkage_classes", std::move(classes)}};
}

} // namespace

Json network(const Network &net) {
    Json species = Json::array();
    for (const auto &sp : net.species())
        species.push_back(sp.name);
    Json reactions = Json::array();
    for (std::size_t j = 0; j < net.reaction_count(); ++j) {
        const Reaction &r = net.reactions()[j];
        Json rx{{"reactant", complex_to_string(net, r.reactant)},
                {"product", complex_to_string(net, r.product)},
                {"rate", optional_double(r.rate)}};
        auto partner = net.reverse_partner(j);
        rx["reverse"] = partner ? Json(*partner + 1) : Json(nullptr);
        reactions.push_back(std::move(rx));
    }
    Json violations = Json::array();
    for (const auto &v : validate_reaction_form(net))
        violations.push_back(entry(net, {v.species, v.reaction}));
    return Json{{"species", std::move(species)},
                {"reactions", std::move(reactions)},
                {"reaction_form", net.in_reaction_form()},
                {"form_violations", std::move(violations)},
                {"stoichiometry_exact", exact(stoichiometric_matrix(net))}};
}

Json signcheck(const Network &net, const SignCheckInput &in) {
    RationalMatrix s = stoichiometric_matrix(net);
    SignMatrix pattern = sign_pattern(s);
    Json out{{"sign_pattern", Json::array()}};
    for (std::size_t i = 0; i < pattern.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < pattern.cols(); ++j)
            row.push_back(std::string(1, to_char(pattern(i, j))));
        out["sign_pattern"].push_back(std::move(row));
    }
    out["aat_status"] = status(hermitian_square_status(pattern));
    if (!net.in_reaction_form()) {
        out["jacobian_status"] = nullptr;
        out["ambiguous_entries"] = nullptr;
        out["respects_sign_pattern"] = nullptr;
        out["converse"] = nullptr;
        return out;
    }
    StatusMatrix js = jacobian_sign_status(s);
    std::vector<EntryIndex> ambiguous;
    for (std::size_t i = 0; i < js.rows(); ++i)
        for (std::size_t j = 0; j < js.cols(); ++j)
            if (js(i, j) == SignStatus::ambiguous)
                ambiguous.push_back({i, j});
    out["jacobian_status"] = status(js);
    Json amb = Json::array();
    for (const auto &e : ambiguous)
        amb.push_back(Json::array({net.species_name(e.row), net.species_name(e.col)}));
    out["ambiguous_entries"] = std::move(amb);
    out["respects_sign_pattern"] = ambiguous.empty();

    ConverseReport conv = sample_jacobian_signs(s, in.samples, in.seed);
    auto pairs = [&](const std::vector<EntryIndex> &es) {
        Json a = Json::array();
        for (const auto &e : es)
            a.push_back(Json::array({net.species_name(e.row), net.species_name(e.col)}));
        return a;
    };
    out["converse"] = Json{{"samples", conv.samples},
                           {"seed", conv.seed},
                           {"unconfirmed", pairs(conv.unconfirmed)},
                           {"contradicted", pairs(conv.contradicted)}};
    return out;
}

Json badclasses(const Network &net, const std::vector<BadClass> &classes) {
    RationalMatrix s = stoichiometric_matrix(net);
    Json out = Json::array();
    for (const auto &cls : classes) {
        Json members = Json::array();
        for (const auto &m : cls.members)
            members.push_back(
                Json{{"species", Json::array({net.species_name(m.rows[0]),
                                              net.species_name(m.rows[1])})},
                     {"reactions", Json::array({m.cols[0] + 1, m.cols[1] + 1})}});
        Json pos = entry(net, cls.positive_entry);
        pos["value"] = to_string(s(cls.positive_entry.row, cls.positive_entry.col));
        out.push_back(Json{{"positive_entry", std::move(pos)}, {"submatrices", std::move(members)}});
    }
    return out;
}

Json fixreport(const FixReport &rep) {
    Json order = Json::array();
    for (auto i : rep.order)
        order.push_back(i + 1);
    Json steps = Json::array();
    for (std::size_t i = 0; i < rep.steps.size(); ++i) {
        const FixStep &st = rep.steps[i];
        const Network &before = rep.stages[i];
        const Network &after = rep.stages[i + 1];
        RationalMatrix sa = stoichiometric_matrix(before);
        RationalMatrix sb = stoichiometric_matrix(after);
        steps.push_back(Json{
            {"class", rep.order[i] + 1},
            {"species", before.species_name(st.zeroed_species)},
            {"reaction", st.modified_column + 1},
            {"moved_value", to_string(st.zeroed_value)},
            {"added_species", st.added_species},
            {"added_reaction", st.added_reaction_index + 1},
            {"added_rate", st.added_rate},
            {"added_reaction_text", reaction_to_string(after, st.added_reaction_index)},
            {"stoichiometry_exact", exact(sb)},
            {"kernel_correspondence", kernel_correspondence_check(sa, sb, st.location())}});
    }
    const Network &res = rep.result();
    RationalMatrix sr = stoichiometric_matrix(res);
    return Json{{"order", std::move(order)},
                {"steps", std::move(steps)},
                {"result",
                 Json{{"species", network(res)["species"]},
                      {"stoichiometry_exact", exact(sr)},
                      {"text", serialize_network(res)},
                      {"bad_classes", find_bad_submatrices(sr).size()},
                      {"ambiguous_entries", count_ambiguous(jacobian_sign_status(sr))}}}};
}

Json kernels(const RationalMatrix &s) {
    ConservationResult cons = is_conserving(s);
    ConservationResult flux = positive_right_kernel(s);
    return Json{{"rank", rank(s)},
                {"right_exact", kernel_vectors(kernel_basis(s, KernelSide::right))},
                {"left_exact", kernel_vectors(kernel_basis(s, KernelSide::left))},
                {"conserving", cons.conserving},
                {"conservation_witness_exact", cons.witness ? exact(*cons.witness) : Json(nullptr)},
                {"positive_flux_mode", flux.conserving},
                {"flux_witness_exact", flux.witness ? exact(*flux.witness) : Json(nullptr)}};
}

Json kernels(const FixReport &rep) {
    Json corr = Json::array();
    for (std::size_t i = 0; i < rep.steps.size(); ++i)
        corr.push_back(kernel_correspondence_check(stoichiometric_matrix(rep.stages[i]),
                                                   stoichiometric_matrix(rep.stages[i + 1]),
                                                   rep.steps[i].location()));
    return Json{{"original", kernels(stoichiometric_matrix(rep.original()))},
                {"fixed", kernels(stoichiometric_matrix(rep.result()))},
                {"correspondence", std::move(corr)}};
}

Json deficiency(const Network &net) {
    Json out = deficiency_numbers(net, crnsign::deficiency(net));
    out["single_positive_column"] = net.in_reaction_form()
                                        ? Json(check_single_positive_column(net))
                                        : Json(nullptr);
    return out;
}

Json deficiency(const FixReport &rep) {
    Json out = report::deficiency(rep.original());
    out["fixed"] = deficiency_numbers(rep.result(), crnsign::deficiency(rep.result()));
    Json audit = Json::array();
    std::vector<DeltaAudit> audits = delta_audit(rep);
    for (std::size_t i = 0; i < audits.size(); ++i) {
        const DeltaAudit &a = audits[i];
        audit.push_back(Json{{"step", i + 1},
                             {"dn", a.dn},
                             {"dl", a.dl},
                             {"ds", a.ds},
                             {"dd", a.dd},
                             {"phi_bc2", a.phi_bc2},
                             {"phi_p2b", a.phi_p2b},
                             {"psi_bc2", a.psi_bc2},
                             {"psi_b", a.psi_b},
                             {"c2_empty", a.c2_empty}});
    }
    out["audit"] = std::move(audit);
    return out;
}

Json altfix(const Network &net, const AltFixReport &alt) {
    return Json{{"demonstration", "breaks equilibria correspondence"},
                {"s_exact", exact(alt.s)},
                {"s_tilde_exact", exact(alt.s_tilde)},
                {"moved", entry_list(net, alt.moved)},
                {"degenerate", alt.degenerate},
                {"kernel_dim", alt.kernel_dim},
                {"kernel_dim_tilde", alt.kernel_dim_tilde},
                {"left_kernel_dim", alt.left_kernel_dim},
                {"left_kernel_dim_tilde", alt.left_kernel_dim_tilde},
                {"conserving", alt.conserving},
                {"conserving_tilde", alt.conserving_tilde},
                {"bad_classes_tilde", alt.bad_classes_tilde},
                {"kernels_tilde", kernels(alt.s_tilde)}};
}

Json equilibria(const FixReport &rep, const EquilibriaInput &in, const EquilibriumResult &eq,
                const std::optional<EquilibriumPair> &lifted, double project_error) {
    const Network &net = rep.original();
    Json out{{"rates_f64", f64(in.rates)},
             {"x0_f64", f64(in.x0)},
             {"allow_boundary", in.options.allow_boundary},
             {"clamped", species_names(net, in.options.clamped)},
             {"converged", eq.converged},
             {"message", eq.message},
             {"iterations", eq.iterations},
             {"x_f64", f64(eq.x)},
             {"residual", eq.residual},
             {"tolerance", eq.tolerance},
             {"boundary", species_names(net, eq.boundary)}};
    if (lifted) {
        std::vector<double> rates_hat = stage_rates(rep, in.rates, rep.steps.size());
        out["lifted"] = Json{{"species", network(rep.result())["species"]},
                             {"rates_f64", f64(rates_hat)},
                             {"x_hat_f64", f64(lifted->x_hat)},
                             {"residual_hat", lifted->residual_hat},
                             {"project_error", project_error}};
    } else {
        out["lifted"] = nullptr;
    }
    return out;
}

Json spectra(const FixReport &single, const SpectraInput &in, bool &passed) {
    const Network &net = single.original();
    MassActionSystem sys(net, in.rates);
    const FixStep &st = single.steps.front();
    ConvergenceReport conv = eigen_convergence(sys, single, in.x_hat, in.k_grid);

    Json per_k = Json::array();
    bool det_ok = true;
    for (std::size_t i = 0; i < conv.k_grid.size(); ++i) {
        DetRelation dr = det_relation_check(sys, single, in.x_hat, conv.k_grid[i]);
        det_ok = det_ok && dr.pass;
        per_k.push_back(Json{{"k", conv.k_grid[i]},
                             {"eig_j_hat", complex_list(conv.eig_j_hat[i])},
                             {"matched_error", conv.matched_errors[i]},
                             {"escaper", complex_number(conv.escaper[i])},
                             {"det_j", dr.det_j},
                             {"det_j_hat", dr.det_j_hat},
                             {"det_error", dr.error},
                             {"det_bound", dr.bound},
                             {"det_pass", dr.pass}});
    }
    Json fit = Json::array();
    for (auto p : conv.fit_points)
        fit.push_back(p);

    DetSignSample ds = det_sign_sampling(sys, single, in.k_grid.front(), in.det_samples, in.seed);

    Json h = nullptr;
    try {
        HDegreeCheck hc = h_degree_check(single, in.rates_exact, in.x_hat_exact);
        if (hc.applicable)
            h = Json{{"d", hc.d},
                     {"affine_in_k", hc.affine_in_k},
                     {"slope_is_minus_c", hc.slope_is_minus_c},
                     {"divisible", hc.divisible},
                     {"degree_h", hc.degree_h},
                     {"h_exact", exact(hc.h)},
                     {"pass", hc.pass}};
        if (hc.applicable && !hc.pass)
            det_ok = false;
    } catch (const std::invalid_argument &) {
        // non-integer exponents: no exact Jacobian
    }

    passed = conv.passed() && det_ok && ds.opposite;
    return Json{
        {"class", in.class_index + 1},
        {"species", net.species_name(st.zeroed_species)},
        {"reaction", st.modified_column + 1},
        {"added_species", st.added_species},
        {"x_hat_f64", f64(in.x_hat)},
        {"rates_f64", f64(in.rates)},
        {"eig_j", complex_list(conv.eig_j)},
        {"per_k", std::move(per_k)},
        {"slope", conv.fit_points.size() >= 2 ? Json(conv.slope) : Json(nullptr)},
        {"fit_points", std::move(fit)},
        {"clustered", conv.clustered},
        {"error_ok", conv.error_ok},
        {"escaper_ok", conv.escaper_ok},
        {"slope_ok", conv.slope_ok},
        {"verdict_j", to_string(conv.verdict_j)},
        {"verdict_j_hat", to_string(conv.verdict_j_hat)},
        {"verdict_match", conv.verdict_match},
        {"chosen_k", optional_double(conv.chosen_k)},
        {"det_sign_sampling",
         Json{{"k", in.k_grid.front()},
              {"samples", ds.samples},
              {"seed", in.seed},
              {"det_j", Json{{"positive", ds.positive}, {"negative", ds.negative}, {"zero", ds.zero}}},
              {"det_j_hat",
               Json{{"positive", ds.positive_hat}, {"negative", ds.negative_hat}, {"zero", ds.zero_hat}}},
              {"opposite", ds.opposite}}},
        {"h_degree", std::move(h)},
        {"passed", passed}};
}

bool cycles_match_submatrices(const RationalMatrix &s, const std::vector<BadCycle> &cycles) {
    using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t,
                           std::size_t>;
    std::multiset<Key> a, b;
    for (const auto &cls : find_bad_submatrices(s))
        for (const auto &m : cls.members)
            a.insert({m.rows[0], m.rows[1], m.cols[0], m.cols[1], m.positive_at.row,
                      m.positive_at.col});
    for (const auto &c : cycles) {
        auto sp = c.species;
        auto rx = c.reactions;
        std::sort(sp.begin(), sp.end());
        std::sort(rx.begin(), rx.end());
        b.insert({sp[0], sp[1], rx[0], rx[1], c.produced_species, c.produced_reaction});
    }
    return a == b;
}

Json graph(const Network &net, const SRGraph &g, const std::vector<BadCycle> &cycles) {
    Json cyc = Json::array();
    for (const auto &c : cycles)
        cyc.push_back(Json{{"species", Json::array({g.species[c.species[0]], g.species[c.species[1]]})},
                           {"reactions", Json::array({c.reactions[0] + 1, c.reactions[1] + 1})},
                           {"produced", Json{{"species", g.species[c.produced_species]},
                                             {"reaction", c.produced_reaction + 1}}}});
    return Json{{"species_nodes", g.species.size()},
                {"reaction_nodes", g.reactions.size()},
                {"edges", g.edges.size()},
                {"bad_cycles", std::move(cyc)},
                {"matches_bad_submatrices",
                 cycles_match_submatrices(stoichiometric_matrix(net), cycles)},
                {"dot", export_dot(g)}};
}

Json decomposition(const Network &net, const ComplexesDecomposition &dec, double error,
                   std::size_t samples, std::uint64_t seed) {
    Json complexes = Json::array();
    for (const auto &c : dec.complexes)
        complexes.push_back(complex_to_string(net, c));
    return Json{{"complexes", std::move(complexes)},
                {"y_exact", exact(dec.y_exact)},
                {"a_k_f64", f64(dec.a_k)},
                {"samples", samples},
                {"seed", seed},
                {"max_relative_error", error},
                {"pass", error <= 1e-10}};
}

} // namespace crnsign::report
