#pragma once

#include "crnsign/exactla.hpp"
#include "crnsign/model.hpp"
#include "crnsign/signcheck.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crnsign {

class FixError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// One application of the fix: the positive entry (q, l) of S is moved into
/// a new reaction B' -> p2 B, where B is species q and p2 = S_ql.
struct FixStep {
    BadClass target_class;
    std::size_t modified_column = 0;
    std::size_t zeroed_species = 0;
    Rational zeroed_value;
    std::string added_species;
    std::size_t added_species_index = 0;
    std::size_t added_reaction_index = 0;
    double added_rate = 1.0;

    FixLocation location() const { return {zeroed_species, modified_column}; }
};

struct FixReport {
    /// stages[0] is the input, stages[i + 1] the network after steps[i].
    std::vector<Network> stages;
    std::vector<FixStep> steps;
    /// Classes of the input network, in default order.
    std::vector<BadClass> classes;
    /// steps[i] fixes classes[order[i]].
    std::vector<std::size_t> order;

    const Network &original() const { return stages.front(); }
    const Network &result() const { return stages.back(); }
};

struct SignFixOptions {
    /// Permutation of 0..n-1 over the classes of the input; identity when unset.
    std::optional<std::vector<std::size_t>> order;
    /// Rate of every added reaction unless `rates` overrides it per step.
    double rate = 1.0;
    std::optional<std::vector<double>> rates;
};

/// Name for the species added when fixing species `q`: one more apostrophe
/// than `prior_fixes`, or "<name>_fix<step>" if that collides.
std::string added_species_name(const Network &net, std::size_t q, std::size_t prior_fixes,
                               std::size_t step_number);

/// One fix step. Throws FixError if `cls` is not a current bad class.
std::pair<Network, FixStep> fix_one(const Network &net, const BadClass &cls, double rate = 1.0);

/// Fixes every bad class of the input in the given order. Throws FixError
/// on an invalid order and ModelError if the network is not in reaction form.
FixReport sign_fix(const Network &net, const SignFixOptions &options = {});

/// Report holding a single step on class `class_index` of the input.
FixReport fix_single(const Network &net, std::size_t class_index, double rate = 1.0);

/// Finds the n x n permutation P with
///     S_a = diag(I_d, P) S_b diag(I_d', P)^t
/// by matching the added rows and columns, then verifies the identity
/// exactly. Returns nothing if no such P exists.
/// Throws std::invalid_argument when the reports fix different inputs.
std::optional<RationalMatrix> verify_permutation_relation(const FixReport &a,
                                                         const FixReport &b);

/// Single-step alternative: every positive entry that lies in a bad
/// submatrix is moved into one new column, the new row gets 1 in each
/// touched column and minus its row sum in the corner.
struct AltFixReport {
    RationalMatrix s;
    RationalMatrix s_tilde;
    std::vector<EntryIndex> moved;
    std::size_t kernel_dim = 0;
    std::size_t kernel_dim_tilde = 0;
    std::size_t left_kernel_dim = 0;
    std::size_t left_kernel_dim_tilde = 0;
    bool conserving = false;
    bool conserving_tilde = false;
    /// No entry was moved; S_tilde is S bordered by zeros.
    bool degenerate = false;
    std::size_t bad_classes_tilde = 0;
};

AltFixReport altfix(const RationalMatrix &s);
AltFixReport altfix(const Network &net);

} // namespace crnsign
