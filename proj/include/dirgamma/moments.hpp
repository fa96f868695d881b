#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dirgamma/dg_model.hpp"
#include "dirgamma/rng.hpp"

namespace dirgamma {

/// Orders (n₁..n_p) of a product moment E[∏ X_i^{n_i}].
using MomentOrder = std::vector<unsigned>;

/// Dirichlet-type integral over Ω_p of ∏ u_i^{α_i−1} (1 − Σu_i)^ζ, evaluated
/// as the telescoping product of beta functions ∏_{i<p} B(α_i, Σ_{j>i} α_j + ζ + 1) · B(α_p, ζ + 1).
/// Requires ζ > −1.
double dirichlet_integral_I(std::span<const double> alpha_head, double zeta);
double log_dirichlet_integral_I(std::span<const double> alpha_head, double zeta);

/// Closed-form product moment with exponent (α_{p+1} − 1)/p on the simplex
/// remainder and no 1/B(α) normalizer. Known to disagree with simulation;
/// see MomentReport.
double product_moment_formula(const MomentOrder& n, const DGParams& params);

struct MomentEstimate {
  double value;
  double std_error;
};

/// Sample mean and standard error of ∏ X_i^{n_i} over N draws of dg_sample.
MomentEstimate product_moment_mc(const MomentOrder& n, const DGParams& params, std::size_t N,
                                 RngSeed seed);

/// Monte-Carlo estimate of E[exp(t·X)].
MomentEstimate mgf_mc(std::span<const double> t, const DGParams& params, std::size_t N,
                      RngSeed seed);

/// Side-by-side comparison of the closed form against the simulation oracle.
struct MomentReport {
  MomentOrder order;
  double formula_value;
  double mc_value;
  double mc_stderr;
  double relative_gap;  // |formula − mc| / max(|mc|, ε)
  bool discrepancy;     // gap beyond 4 standard errors and 1 % relative
};

MomentReport moment_report(const MomentOrder& n, const DGParams& params, std::size_t N,
                           RngSeed seed);

/// Partial sum through order M of the series mgf, with the 1/B(α) prefactor.
/// Compositions of each m into p parts are enumerated exhaustively;
/// throws ContractError beyond 2·10⁶ terms.
double mgf_truncated(std::span<const double> t, const DGParams& params, std::size_t order);

/// Number of series terms mgf_truncated would evaluate.
std::size_t mgf_term_count(std::size_t p, std::size_t order);

inline constexpr std::size_t kMgfTermCap = 2'000'000;

}  // namespace dirgamma
