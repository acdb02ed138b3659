#pragma once

#include <cstdint>
#include <vector>

#include "regdet/spectra.hpp"

namespace regdet {

/// Laplace modes with eigenvalue <= lambda_max, one entry per coefficient
/// (a line of multiplicity k contributes k entries).
struct ModeSet {
  SurfaceModel model;
  double lambda_max = 0.0;
  std::vector<SpectralLine> lines;
  std::vector<double> eigenvalues;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

ModeSet make_modes(const SurfaceModel& model, double lambda_max);

/// One truncated free-field draw. Sample `index` comes from the generator
/// seeded by (seed, chunk) at position index - chunk * chunk_size.
struct FieldSample {
  std::vector<double> phi;
  double mass_sq = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t chunk = 0;
  std::uint64_t index = 0;
};

inline constexpr std::size_t kDefaultSampleChunk = 4096;

/// n independent draws with phi_k ~ N(0, 1 / (m^2 + lambda_k)).
std::vector<FieldSample> sample_fields(const ModeSet& modes, double mass_sq, std::uint64_t seed, std::size_t n,
                                       std::size_t chunk_size = kDefaultSampleChunk);

enum class WickOrdering { C, C0 };

/// W_C = sum_k (phi_k^2 - 1 / (m0^2 + lambda_k)); the C0 ordering adds A cf_mean(m0^2).
double wick_mass_term(const ModeSet& modes, const FieldSample& sample, double m0_sq, WickOrdering ordering);

/// A cf_mean(m0^2), the constant separating the two orderings.
double wick_c0_shift(const SurfaceModel& model, double m0_sq);

/// sum_k e^{-2 t lambda_k} (phi_k^2 - 1 / (m0^2 + lambda_k)).
double smoothed_wick(const ModeSet& modes, const FieldSample& sample, double m0_sq, double t);

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  double target = 0.0;
  double z_score = 0.0;
};

struct MeasureIdentityResult {
  /// E[exp(-m1^2 W_C / 2)] under the m0 field vs the truncated det_2^{-1/2}.
  MCEstimate estimate;
  /// The same target through the det_2 eigen-product with no tail correction.
  double det2_target = 0.0;
  double target_mismatch = 0.0;  // |target / det2_target - 1|
  /// Reweighted second moment of each coefficient against 1 / (m0^2 + m1^2 + lambda).
  std::vector<MCEstimate> reweighted_variance;
  double max_abs_variance_z = 0.0;
  std::size_t modes = 0;
};

/// Monte Carlo check of the finite-dimensional Gaussian identity
///   E_{m0}[exp(-m1^2 W_C / 2)] = prod_k ((1 + x_k) e^{-x_k})^{-1/2},  x_k = m1^2 / (m0^2 + lambda_k).
/// Log weights are shifted by their a-priori maximum m1^2 sum_k c_k / 2 before
/// exponentiation. Results depend on (seed, chunk_size) only.
MeasureIdentityResult verify_measure_identity(const SurfaceModel& model, double m0, double m1, double lambda_max,
                                              std::size_t n, std::uint64_t seed,
                                              std::size_t chunk_size = kDefaultSampleChunk);

}  // namespace regdet
