#pragma once

#include "crnsign/matrix.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace crnsign {

enum class KernelSide { right, left };

/// Basis of {v : M v = 0} (right) or {v : v^t M = 0} (left).
struct KernelBasis {
    std::vector<RationalVector> vectors;
    KernelSide side = KernelSide::right;
    std::size_t dimension() const { return vectors.size(); }
};

struct ConservationResult {
    bool conserving = false;
    /// When conserving: every entry >= 1 and m^t S = 0 exactly.
    std::optional<RationalVector> witness;
};

/// Exact rank by fraction-free (Bareiss) elimination on an integer-scaled copy.
std::size_t rank(const RationalMatrix &m);

/// Reduced row echelon form; pivot columns are returned in `pivots`.
RationalMatrix rref(const RationalMatrix &m, std::vector<std::size_t> *pivots = nullptr);

KernelBasis kernel_basis(const RationalMatrix &m, KernelSide side);

/// Decides whether some m >= 1 (entrywise) satisfies S^t m = 0.
ConservationResult is_conserving(const RationalMatrix &s);

/// Decides whether some v >= 1 (entrywise) satisfies S v = 0, i.e. whether
/// the network admits a strictly positive flux mode.
ConservationResult positive_right_kernel(const RationalMatrix &s);

/// Feasibility of {x : A x = 0, x >= 1} by exact phase-1 simplex with
/// Bland's rule. Returns a witness when feasible.
std::optional<RationalVector> solve_positive_null(const RationalMatrix &a);

/// True when both families span the same subspace of Q^dim.
bool same_span(const std::vector<RationalVector> &a, const std::vector<RationalVector> &b,
               std::size_t dim);

/// Where a one-step sign fix acted: the positive entry (species, column)
/// that was moved into the appended column.
struct FixLocation {
    std::size_t species = 0;
    std::size_t column = 0;
};

/// Checks that v -> (v, v_l) maps ker S bijectively onto ker S_check, that
/// w -> (w, S_ql w_q) does the same for the left kernels, and that
/// existence of strictly positive kernel vectors agrees on both sides.
/// Throws std::invalid_argument when the shapes do not fit `at`.
bool kernel_correspondence_check(const RationalMatrix &s, const RationalMatrix &s_check,
                                 FixLocation at);

} // namespace crnsign
