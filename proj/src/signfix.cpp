#include "crnsign/signfix.hpp"

#include <algorithm>
#include <map>

namespace crnsign {

namespace {

const BadClass *find_class(const std::vector<BadClass> &classes, EntryIndex at) {
    for (const auto &c : classes)
        if (c.positive_entry == at)
            return &c;
    return nullptr;
}

std::pair<Network, FixStep> apply_fix(const Network &net, const BadClass &cls, double rate,
                                      const std::string &name) {
    if (!(rate > 0.0))
        throw FixError("added rate constant must be positive");
    const auto [q, l] = cls.positive_entry;
    if (q >= net.species_count() || l >= net.reaction_count())
        throw FixError("bad class refers to an entry outside the network");
    RationalMatrix s = stoichiometric_matrix(net);
    if (sgn(s(q, l)) <= 0 || !find_class(find_bad_submatrices(s), cls.positive_entry))
        throw FixError("stale bad class: entry (" + net.species_name(q) + ", reaction " +
                       std::to_string(l + 1) + ") is no longer the positive entry of a bad "
                                               "submatrix");

    std::vector<std::string> names;
    for (const auto &sp : net.species())
        names.push_back(sp.name);
    const std::size_t added = names.size();
    names.push_back(name);

    std::vector<Reaction> reactions = net.reactions();
    Rational p2 = reactions[l].product.coefficient(q);
    Complex::Terms product = reactions[l].product.terms();
    product.erase(q);
    product[added] = 1;
    reactions[l].product = Complex(std::move(product));
    Reaction extra;
    extra.reactant = Complex({{added, Rational(1)}});
    extra.product = Complex({{q, p2}});
    extra.rate = rate;
    reactions.push_back(std::move(extra));

    // the modified reaction is no longer the reverse of its partner
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto &pr : net.reversible_pairs())
        if (pr.first != l && pr.second != l)
            pairs.push_back(pr);

    NetworkOptions opts;
    opts.permissive = net.permissive();
    Network next(std::move(names), std::move(reactions), std::move(pairs), opts);

    FixStep step;
    step.target_class = cls;
    step.modified_column = l;
    step.zeroed_species = q;
    step.zeroed_value = s(q, l);
    step.added_species = name;
    step.added_species_index = added;
    step.added_reaction_index = net.reaction_count();
    step.added_rate = rate;
    return {std::move(next), std::move(step)};
}

void require_reaction_form(const Network &net) {
    if (!net.in_reaction_form())
        throw ModelError("sign fixing needs a network in reaction form");
}

} // namespace

std::string added_species_name(const Network &net, std::size_t q, std::size_t prior_fixes,
                               std::size_t step_number) {
    const std::string &base = net.species_name(q);
    std::string name = base + std::string(prior_fixes + 1, '\'');
    if (!net.species_index(name))
        return name;
    name = base + "_fix" + std::to_string(step_number);
    for (std::size_t extra = 1; net.species_index(name); ++extra)
        name = base + "_fix" + std::to_string(step_number) + "_" + std::to_string(extra);
    return name;
}

std::pair<Network, FixStep> fix_one(const Network &net, const BadClass &cls, double rate) {
    require_reaction_form(net);
    if (cls.positive_entry.row >= net.species_count())
        throw FixError("bad class refers to an entry outside the network");
    // continue an existing B', B'', ... chain when fixing the same species again
    const std::string &base = net.species_name(cls.positive_entry.row);
    std::size_t prior = 0;
    while (net.species_index(base + std::string(prior + 1, '\'')))
        ++prior;
    return apply_fix(net, cls, rate,
                     added_species_name(net, cls.positive_entry.row, prior, 1));
}

FixReport sign_fix(const Network &net, const SignFixOptions &options) {
    require_reaction_form(net);
    FixReport rep;
    rep.stages.push_back(net);
    rep.classes = find_bad_submatrices(stoichiometric_matrix(net));
    const std::size_t n = rep.classes.size();

    if (options.order) {
        const auto &ord = *options.order;
        std::vector<bool> used(n, false);
        if (ord.size() != n)
            throw FixError("order must list each of the " + std::to_string(n) +
                           " bad classes exactly once");
        for (auto c : ord) {
            if (c >= n || used[c])
                throw FixError("order is not a permutation of the bad classes");
            used[c] = true;
        }
        rep.order = ord;
    } else {
        rep.order.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            rep.order[i] = i;
    }
    if (options.rates && options.rates->size() != n)
        throw FixError("need one added rate per fix step");

    std::map<std::size_t, std::size_t> fixes_per_species;
    std::size_t remaining = n;
    for (std::size_t i = 0; i < n; ++i) {
        const Network &cur = rep.stages.back();
        EntryIndex at = rep.classes[rep.order[i]].positive_entry;
        auto current = find_bad_submatrices(stoichiometric_matrix(cur));
        const BadClass *cls = find_class(current, at);
        if (!cls || current.size() != remaining)
            throw ConsistencyError("bad classes changed during sign fixing");
        double rate = options.rates ? (*options.rates)[i] : options.rate;
        std::string name =
            added_species_name(cur, at.row, fixes_per_species[at.row], i + 1);
        auto [next, step] = apply_fix(cur, *cls, rate, name);
        ++fixes_per_species[at.row];

        std::size_t after = find_bad_submatrices(stoichiometric_matrix(next)).size();
        if (after >= remaining)
            throw ConsistencyError("fix step did not reduce the number of bad classes");
        remaining = after;
        rep.steps.push_back(std::move(step));
        rep.stages.push_back(std::move(next));
    }
    if (remaining != 0)
        throw ConsistencyError("bad classes remain after sign fixing");
    return rep;
}

FixReport fix_single(const Network &net, std::size_t class_index, double rate) {
    require_reaction_form(net);
    FixReport rep;
    rep.stages.push_back(net);
    rep.classes = find_bad_submatrices(stoichiometric_matrix(net));
    if (class_index >= rep.classes.size())
        throw FixError("class index out of range");
    auto [next, step] = apply_fix(net, rep.classes[class_index], rate,
                                  added_species_name(net, rep.classes[class_index].positive_entry.row, 0, 1));
    rep.order = {class_index};
    rep.steps.push_back(std::move(step));
    rep.stages.push_back(std::move(next));
    return rep;
}

std::optional<RationalMatrix> verify_permutation_relation(const FixReport &a,
                                                         const FixReport &b) {
    if (a.original() != b.original() || a.steps.size() != b.steps.size())
        throw std::invalid_argument("fix reports start from different networks");
    const std::size_t d = a.original().species_count();
    const std::size_t dp = a.original().reaction_count();
    const std::size_t n = a.steps.size();
    RationalMatrix sa = stoichiometric_matrix(a.result());
    RationalMatrix sb = stoichiometric_matrix(b.result());
    if (sa.rows() != d + n || sb.rows() != d + n || sa.cols() != dp + n || sb.cols() != dp + n)
        return std::nullopt;

    // An added species is identified by its row on the original columns
    // together with its column on the original species.
    auto signature = [&](const RationalMatrix &m, std::size_t i) {
        RationalVector sig;
        for (std::size_t c = 0; c < dp; ++c)
            sig.push_back(m(d + i, c));
        for (std::size_t r = 0; r < d; ++r)
            sig.push_back(m(r, dp + i));
        return sig;
    };
    RationalMatrix p(n, n);
    std::vector<bool> taken(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        RationalVector sig = signature(sa, i);
        std::size_t match = n;
        for (std::size_t j = 0; j < n; ++j)
            if (!taken[j] && signature(sb, j) == sig) {
                match = j;
                break;
            }
        if (match == n)
            return std::nullopt;
        taken[match] = true;
        p(i, match) = 1;
    }

    auto border = [&p, n](std::size_t k) {
        RationalMatrix m = identity_matrix(k + n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(k + i, k + j) = p(i, j);
        return m;
    };
    if (border(d) * sb * border(dp).transpose() != sa)
        return std::nullopt;
    return p;
}

AltFixReport altfix(const RationalMatrix &s) {
    const std::size_t d = s.rows(), dp = s.cols();
    AltFixReport rep;
    rep.s = s;
    RationalMatrix t(d + 1, dp + 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < dp; ++j)
            t(i, j) = s(i, j);
    for (const auto &cls : find_bad_submatrices(s)) {
        const auto [q, l] = cls.positive_entry;
        t(d, l) = 1;
        t(q, dp) += s(q, l);
        t(q, l) = 0;
        rep.moved.push_back(cls.positive_entry);
    }
    Rational sum = 0;
    for (std::size_t j = 0; j < dp; ++j)
        sum += t(d, j);
    t(d, dp) = -sum;
    rep.s_tilde = t;
    rep.degenerate = rep.moved.empty();

    rep.kernel_dim = kernel_basis(s, KernelSide::right).dimension();
    rep.kernel_dim_tilde = kernel_basis(t, KernelSide::right).dimension();
    rep.left_kernel_dim = kernel_basis(s, KernelSide::left).dimension();
    rep.left_kernel_dim_tilde = kernel_basis(t, KernelSide::left).dimension();
    rep.conserving = is_conserving(s).conserving;
    rep.conserving_tilde = is_conserving(t).conserving;
    rep.bad_classes_tilde = find_bad_submatrices(t).size();
    return rep;
}

AltFixReport altfix(const Network &net) { return altfix(stoichiometric_matrix(net)); }

} // namespace crnsign
