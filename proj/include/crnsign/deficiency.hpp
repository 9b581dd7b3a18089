#pragma once

#include "crnsign/kinetics.hpp"
#include "crnsign/model.hpp"
#include "crnsign/signfix.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace crnsign {

struct DeficiencyReport {
    std::size_t n = 0;   // complexes
    std::size_t ell = 0; // linkage classes
    std::size_t s = 0;   // rank S
    long delta = 0;      // n - ell - s
    /// Distinct complexes in order of first appearance (reactant before product).
    std::vector<Complex> complexes;
    /// Linkage classes as sorted complex indices, ordered by smallest member.
    std::vector<std::vector<std::size_t>> classes;
    /// Reactant and product complex index of every reaction.
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    /// Index of `c` in `complexes`, or npos.
    std::size_t find(const Complex &c) const;
    /// Linkage class containing complex `index`.
    std::size_t class_of(std::size_t index) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

DeficiencyReport deficiency(const Network &net);

/// Change of deficiency across one fix step, measured twice: from the case
/// definitions of phi and psi, and from scratch.
struct DeltaAudit {
    long dn = 0, dl = 0, ds = 0, dd = 0; // from scratch
    int phi_bc2 = 0; // phi(B' + C2)
    int phi_p2b = 0; // phi(p2 B)
    int psi_bc2 = 0; // psi([B' + C2])
    int psi_b = 0;   // psi([B'])
    bool c2_empty = false;
    DeficiencyReport before;
    DeficiencyReport after;
};

/// One audit per step. Throws ConsistencyError if phi or psi disagree with
/// the recomputed changes.
std::vector<DeltaAudit> delta_audit(const FixReport &report);

/// True iff, for every bad class, the column holding its positive entry has
/// no other positive entry.
bool check_single_positive_column(const Network &net);

/// S v(x) = Y A_k psi(x) for mass action in reaction form.
struct ComplexesDecomposition {
    std::vector<Complex> complexes;
    RationalMatrix y_exact; // species x complexes
    Eigen::MatrixXd y;
    Eigen::MatrixXd a_k; // complexes x complexes, zero column sums

    /// psi(x)_c = prod_j x_j^Y_jc.
    Eigen::VectorXd psi(const Eigen::VectorXd &x) const;
    Eigen::VectorXd evaluate(const Eigen::VectorXd &x) const { return y * a_k * psi(x); }
};

/// Throws ModelError unless the network is in reaction form.
ComplexesDecomposition complexes_decomposition(const MassActionSystem &sys);

/// Largest relative error of the identity over random positive points:
/// ||S v - Y A psi||_inf / ||abs(S) v||_inf.
double verify_decomposition(const MassActionSystem &sys, const ComplexesDecomposition &dec,
                            std::size_t samples, std::uint64_t seed);

} // namespace crnsign
