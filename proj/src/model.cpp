#include "crnsign/model.hpp"

#include <cctype>
#include <set>

namespace crnsign {

bool is_valid_species_name(const std::string &name) {
    if (name.empty())
        return false;
    auto head = static_cast<unsigned char>(name[0]);
    if (!(std::isalpha(head) || head == '_'))
        return false;
    for (char ch : name) {
        auto c = static_cast<unsigned char>(ch);
        if (!(std::isalnum(c) || c == '_' || c == '\''))
            return false;
    }
    return true;
}

Complex::Complex(Terms terms) : terms_(std::move(terms)) {
    for (const auto &[species, coeff] : terms_)
        if (sgn(coeff) <= 0)
            throw ModelError("complex coefficients must be strictly positive");
}

Rational Complex::coefficient(std::size_t species) const {
    auto it = terms_.find(species);
    return it == terms_.end() ? Rational(0) : it->second;
}

Network::Network(std::vector<std::string> species_names, std::vector<Reaction> reactions,
                 std::vector<std::pair<std::size_t, std::size_t>> reversible_pairs,
                 NetworkOptions options)
    : reactions_(std::move(reactions)), pairs_(std::move(reversible_pairs)),
      permissive_(options.permissive) {
    if (species_names.empty() || reactions_.empty())
        throw ModelError("a network needs at least one species and one reaction");

    std::set<std::string> seen;
    species_.reserve(species_names.size());
    for (std::size_t i = 0; i < species_names.size(); ++i) {
        const auto &name = species_names[i];
        if (!is_valid_species_name(name))
            throw ModelError("invalid species name '" + name + "'");
        if (!seen.insert(name).second)
            throw ModelError("duplicate species name '" + name + "'");
        species_.push_back(Species{name, i});
    }

    std::vector<bool> referenced(species_.size(), false);
    for (std::size_t j = 0; j < reactions_.size(); ++j) {
        const auto &r = reactions_[j];
        if (r.reactant == r.product)
            throw ModelError("reaction " + std::to_string(j + 1) +
                             " has identical reactant and product");
        if (r.rate && !(*r.rate > 0.0))
            throw ModelError("reaction " + std::to_string(j + 1) +
                             " has a non-positive rate constant");
        for (const auto *side : {&r.reactant, &r.product})
            for (const auto &[species, coeff] : side->terms()) {
                if (species >= species_.size())
                    throw ModelError("reaction references unknown species index");
                referenced[species] = true;
            }
        for (const auto &[species, coeff] : r.reactant.terms())
            if (r.product.contains(species))
                in_reaction_form_ = false;
    }
    for (std::size_t i = 0; i < species_.size(); ++i)
        if (!referenced[i])
            throw ModelError("species '" + species_[i].name + "' is not used by any reaction");
    if (!in_reaction_form_ && !permissive_)
        throw ModelError("a species appears on both sides of a reaction "
                         "(not in reaction form); use the permissive option to keep it");

    partner_.assign(reactions_.size(), std::nullopt);
    for (const auto &[a, b] : pairs_) {
        if (a >= reactions_.size() || b >= reactions_.size() || a == b)
            throw ModelError("reversible pair out of range");
        if (partner_[a] || partner_[b])
            throw ModelError("reaction listed in two reversible pairs");
        if (reactions_[a].reactant != reactions_[b].product ||
            reactions_[a].product != reactions_[b].reactant)
            throw ModelError("reversible pair is not a forward/reverse couple");
        partner_[a] = b;
        partner_[b] = a;
    }
}

std::optional<std::size_t> Network::species_index(const std::string &name) const {
    for (const auto &s : species_)
        if (s.name == name)
            return s.index;
    return std::nullopt;
}

std::optional<std::size_t> Network::reverse_partner(std::size_t reaction) const {
    return partner_.at(reaction);
}

bool Network::has_all_rates() const {
    for (const auto &r : reactions_)
        if (!r.rate)
            return false;
    return true;
}

std::vector<double> Network::rates_or(double fallback) const {
    std::vector<double> out;
    out.reserve(reactions_.size());
    for (const auto &r : reactions_)
        out.push_back(r.rate.value_or(fallback));
    return out;
}

bool operator==(const Network &a, const Network &b) {
    if (a.species_.size() != b.species_.size() || a.reactions_.size() != b.reactions_.size())
        return false;
    for (std::size_t i = 0; i < a.species_.size(); ++i)
        if (a.species_[i].name != b.species_[i].name)
            return false;
    for (std::size_t j = 0; j < a.reactions_.size(); ++j) {
        const auto &x = a.reactions_[j];
        const auto &y = b.reactions_[j];
        if (x.reactant != y.reactant || x.product != y.product || x.rate != y.rate)
            return false;
    }
    return true;
}

RationalMatrix stoichiometric_matrix(const Network &net) {
    RationalMatrix s(net.species_count(), net.reaction_count());
    for (std::size_t j = 0; j < net.reaction_count(); ++j) {
        const auto &r = net.reactions()[j];
        for (const auto &[i, c] : r.product.terms())
            s(i, j) += c;
        for (const auto &[i, c] : r.reactant.terms())
            s(i, j) -= c;
    }
    return s;
}

std::vector<FormViolation> validate_reaction_form(const Network &net) {
    std::vector<FormViolation> out;
    for (std::size_t j = 0; j < net.reaction_count(); ++j) {
        const auto &r = net.reactions()[j];
        for (const auto &[i, c] : r.reactant.terms())
            if (r.product.contains(i))
                out.push_back({i, j});
    }
    return out;
}

std::string complex_to_string(const Network &net, const Complex &c) {
    if (c.is_zero())
        return "0";
    std::string out;
    for (const auto &[i, coeff] : c.terms()) {
        if (!out.empty())
            out += '+';
        if (coeff != 1)
            out += to_string(coeff);
        out += net.species_name(i);
    }
    return out;
}

std::string reaction_to_string(const Network &net, std::size_t reaction) {
    const auto &r = net.reactions().at(reaction);
    return complex_to_string(net, r.reactant) + "->" + complex_to_string(net, r.product);
}

} // namespace crnsign
