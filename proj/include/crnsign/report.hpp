#pragma once

#include "crnsign/deficiency.hpp"
#include "crnsign/exactla.hpp"
#include "crnsign/graphio.hpp"
#include "crnsign/kinetics.hpp"
#include "crnsign/signcheck.hpp"
#include "crnsign/signfix.hpp"
#include "crnsign/spectra.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace crnsign::report {

/// Key order is insertion order, so equal inputs give byte-identical text.
using Json = nlohmann::ordered_json;

// Matrix fields carry the suffix _exact (rows of "p/q" strings) or _f64
// (rows of doubles). Reactions are numbered from 1 in every report.

Json exact(const RationalMatrix &m);
Json exact(const RationalVector &v);
Json f64(const Eigen::MatrixXd &m);
Json f64(const Eigen::VectorXd &v);
Json f64(const std::vector<double> &v);
Json status(const StatusMatrix &m);
Json complex_number(const Complexd &z); // [re, im]

Json network(const Network &net);

struct SignCheckInput {
    std::size_t samples = 100;
    std::uint64_t seed = 0;
};
Json signcheck(const Network &net, const SignCheckInput &in);

Json badclasses(const Network &net, const std::vector<BadClass> &classes);

/// Per-step exact matrices and the kernel correspondence verdict of each step.
Json fixreport(const FixReport &rep);

Json kernels(const RationalMatrix &s);
/// {original, fixed, correspondence}.
Json kernels(const FixReport &rep);

Json deficiency(const Network &net);
/// Deficiency of the input and result plus the per-step audit.
Json deficiency(const FixReport &rep);

Json altfix(const Network &net, const AltFixReport &alt);

struct EquilibriaInput {
    std::vector<double> rates;
    Eigen::VectorXd x0;
    EquilibriumOptions options;
};
Json equilibria(const FixReport &rep, const EquilibriaInput &in, const EquilibriumResult &eq,
                const std::optional<EquilibriumPair> &lifted, double project_error);

struct SpectraInput {
    std::size_t class_index = 0;
    std::vector<double> rates;
    std::vector<Rational> rates_exact;
    Eigen::VectorXd x_hat;
    std::vector<Rational> x_hat_exact;
    std::vector<double> k_grid;
    std::size_t det_samples = 20;
    std::uint64_t seed = 0;
};
/// Also returns whether every spectral check passed.
Json spectra(const FixReport &single, const SpectraInput &in, bool &passed);

Json graph(const Network &net, const SRGraph &g, const std::vector<BadCycle> &cycles);

Json decomposition(const Network &net, const ComplexesDecomposition &dec, double error,
                   std::size_t samples, std::uint64_t seed);

/// True iff the cycles and the bad submatrices of `s` correspond one to one.
bool cycles_match_submatrices(const RationalMatrix &s, const std::vector<BadCycle> &cycles);

} // namespace crnsign::report
