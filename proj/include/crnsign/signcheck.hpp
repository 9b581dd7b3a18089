#pragma once

#include "crnsign/matrix.hpp"
#include "crnsign/model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace crnsign {

enum class Sign : signed char { minus = -1, zero = 0, plus = 1 };

/// Sign of a matrix entry that may depend on the unspecified magnitudes.
enum class SignStatus : unsigned char { zero, plus, minus, ambiguous };

using SignMatrix = Matrix<Sign>;
using StatusMatrix = Matrix<SignStatus>;

char to_char(Sign s);
char to_char(SignStatus s);

SignMatrix sign_pattern(const RationalMatrix &m);

/// Status of each entry of A A^t over all positive magnitudes compatible with
/// the pattern. (i, j) is ambiguous iff two columns give products of opposite
/// sign.
StatusMatrix hermitian_square_status(const SignMatrix &a);

struct EntryIndex {
    std::size_t row = 0;
    std::size_t col = 0;
    friend bool operator==(const EntryIndex &, const EntryIndex &) = default;
};

/// 2x2 submatrix with four nonzero entries of which exactly one is positive.
struct BadSubmatrix {
    std::array<std::size_t, 2> rows{};
    std::array<std::size_t, 2> cols{};
    EntryIndex positive_at;
    friend bool operator==(const BadSubmatrix &, const BadSubmatrix &) = default;
};

/// Bad submatrices sharing one positive entry of S.
struct BadClass {
    EntryIndex positive_entry;
    std::vector<BadSubmatrix> members;
};

/// All bad submatrices grouped by their positive entry. Classes are ordered
/// by (column, row) of the positive entry; members by (rows, cols).
std::vector<BadClass> find_bad_submatrices(const RationalMatrix &s);

/// Status of the Jacobian S v'(x) for every monotone flux in reaction form:
/// reaction k contributes sign(S_ik) to entry (i, j) exactly when S_jk < 0.
StatusMatrix jacobian_sign_status(const RationalMatrix &s);

/// Same, after checking that the network is in reaction form.
/// Throws ModelError otherwise.
StatusMatrix jacobian_sign_status(const Network &net);

std::size_t count_ambiguous(const StatusMatrix &m);

/// Observed signs of one Jacobian entry across random samples.
struct ObservedSigns {
    bool plus = false;
    bool minus = false;
};

/// Statistical check of the converse direction: every ambiguous entry
/// should take both signs for some choice of magnitudes. Each sample draws
/// new magnitudes for S (pattern fixed) and for the positive partial
/// derivatives of the fluxes.
struct ConverseReport {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    Matrix<ObservedSigns> observed;
    /// Ambiguous entries for which only one sign was seen.
    std::vector<EntryIndex> unconfirmed;
    /// Signed entries for which the wrong sign was seen (must stay empty).
    std::vector<EntryIndex> contradicted;
};

ConverseReport sample_jacobian_signs(const RationalMatrix &s, std::size_t samples,
                                     std::uint64_t seed);

} // namespace crnsign
