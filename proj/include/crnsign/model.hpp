#pragma once

#include "crnsign/matrix.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crnsign {

/// Raised when a network violates one of the model invariants.
class ModelError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an internal cross-check between two independent computations
/// disagrees. Indicates a bug, never bad input.
class ConsistencyError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

struct Species {
    std::string name;
    std::size_t index = 0;
};

/// True for names matching [A-Za-z_][A-Za-z0-9_']*.
bool is_valid_species_name(const std::string &name);

/// Formal nonnegative combination of species, keyed by species index.
/// Every stored coefficient is strictly positive; the empty map is the
/// zero complex.
class Complex {
  public:
    using Terms = std::map<std::size_t, Rational>;

    Complex() = default;
    explicit Complex(Terms terms);

    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool contains(std::size_t species) const { return terms_.count(species) != 0; }
    Rational coefficient(std::size_t species) const;

    friend bool operator==(const Complex &a, const Complex &b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Complex &a, const Complex &b) { return !(a == b); }
    friend bool operator<(const Complex &a, const Complex &b) { return a.terms_ < b.terms_; }

  private:
    Terms terms_;
};

struct Reaction {
    Complex reactant;
    Complex product;
    std::optional<double> rate;
    std::optional<std::string> label;
};

struct NetworkOptions {
    /// Store reactions whose reactant and product share a species. Such a
    /// network is not in reaction form and sign-pattern analyses refuse it.
    bool permissive = false;
};

/// A species/reaction pair where the species occurs on both sides.
struct FormViolation {
    std::size_t species = 0;
    std::size_t reaction = 0;
    friend bool operator==(const FormViolation &, const FormViolation &) = default;
};

/// Immutable chemical reaction network. Species order and reaction order
/// are the row and column order of every derived matrix.
class Network {
  public:
    Network(std::vector<std::string> species_names, std::vector<Reaction> reactions,
            std::vector<std::pair<std::size_t, std::size_t>> reversible_pairs = {},
            NetworkOptions options = {});

    const std::vector<Species> &species() const { return species_; }
    const std::vector<Reaction> &reactions() const { return reactions_; }
    std::size_t species_count() const { return species_.size(); }
    std::size_t reaction_count() const { return reactions_.size(); }

    const std::string &species_name(std::size_t i) const { return species_.at(i).name; }
    std::optional<std::size_t> species_index(const std::string &name) const;

    /// Partner of a canonicalized reversible reaction (forward j, reverse j+1).
    std::optional<std::size_t> reverse_partner(std::size_t reaction) const;
    const std::vector<std::pair<std::size_t, std::size_t>> &reversible_pairs() const {
        return pairs_;
    }

    bool permissive() const { return permissive_; }
    /// No species occurs on both sides of any reaction.
    bool in_reaction_form() const { return in_reaction_form_; }

    bool has_all_rates() const;
    /// Rate constants in reaction order; unset rates take `fallback`.
    std::vector<double> rates_or(double fallback) const;

    /// Structural equality: species order, reactions (both sides) and rates.
    /// Labels and reversibility metadata are not compared.
    friend bool operator==(const Network &a, const Network &b);
    friend bool operator!=(const Network &a, const Network &b) { return !(a == b); }

  private:
    std::vector<Species> species_;
    std::vector<Reaction> reactions_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<std::optional<std::size_t>> partner_;
    bool permissive_ = false;
    bool in_reaction_form_ = true;
};

/// d x d' matrix with entry (i, j) = product - reactant coefficient of
/// species i in reaction j.
RationalMatrix stoichiometric_matrix(const Network &net);

/// Every (species, reaction) pair with the species on both sides.
std::vector<FormViolation> validate_reaction_form(const Network &net);

/// "3B+C"-style text for a complex; "0" for the zero complex.
std::string complex_to_string(const Network &net, const Complex &c);
std::string reaction_to_string(const Network &net, std::size_t reaction);

} // namespace crnsign
