#include "regdet/gff.hpp"

#include <cmath>
#include <random>

#include "regdet/error.hpp"
#include "regdet/green.hpp"
#include "regdet/summation.hpp"

namespace regdet {

namespace {

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

void require_mass(double mass_sq, const char* name) {
  if (!(mass_sq > 0.0) || !std::isfinite(mass_sq)) {
    throw InvalidArgument(name, "field mass must be positive; at m^2 = 0 the zero mode has infinite variance");
  }
}

void draw(std::mt19937_64& engine, const std::vector<double>& sd, std::vector<double>& phi) {
  std::normal_distribution<double> normal;
  phi.resize(sd.size());
  for (std::size_t k = 0; k < sd.size(); ++k) phi[k] = sd[k] * normal(engine);
}

std::vector<double> standard_deviations(const ModeSet& modes, double mass_sq) {
  std::vector<double> sd;
  sd.reserve(modes.size());
  for (double lambda : modes.eigenvalues) sd.push_back(1.0 / std::sqrt(mass_sq + lambda));
  return sd;
}

// Per-chunk accumulators for the weighted estimators.
struct WeightSums {
  CompensatedSum w;
  CompensatedSum w2;
  std::vector<CompensatedSum> w_phi2;
  std::vector<CompensatedSum> w2_phi2;
  std::vector<CompensatedSum> w2_phi4;

  void merge(const WeightSums& o) {
    w.merge(o.w);
    w2.merge(o.w2);
    for (std::size_t k = 0; k < w_phi2.size(); ++k) {
      w_phi2[k].merge(o.w_phi2[k]);
      w2_phi2[k].merge(o.w2_phi2[k]);
      w2_phi4[k].merge(o.w2_phi4[k]);
    }
  }
};

}  // namespace

ModeSet make_modes(const SurfaceModel& model, double lambda_max) {
  ModeSet m;
  m.model = model;
  m.lambda_max = lambda_max;
  m.lines = spectrum(model, lambda_max);
  if (m.lines.size() < 2) throw InvalidArgument("lambda_max", "cutoff must cover at least two spectral lines");
  for (const auto& line : m.lines) m.eigenvalues.insert(m.eigenvalues.end(), line.multiplicity, line.eigenvalue);
  return m;
}

std::vector<FieldSample> sample_fields(const ModeSet& modes, double mass_sq, std::uint64_t seed, std::size_t n,
                                       std::size_t chunk_size) {
  require_mass(mass_sq, "m2");
  if (n == 0) throw InvalidArgument("n", "need at least one sample");
  if (chunk_size == 0) throw InvalidArgument("chunk_size", "chunk size must be positive");
  const auto sd = standard_deviations(modes, mass_sq);
  std::vector<FieldSample> out(n);
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  detail::run_chunks(chunks, [&](std::size_t c) {
    auto engine = chunk_engine(seed, c);
    const std::size_t end = std::min(n, (c + 1) * chunk_size);
    for (std::size_t i = c * chunk_size; i < end; ++i) {
      FieldSample& s = out[i];
      draw(engine, sd, s.phi);
      s.mass_sq = mass_sq;
      s.seed = seed;
      s.chunk = c;
      s.index = i;
    }
  });
  return out;
}

double wick_mass_term(const ModeSet& modes, const FieldSample& sample, double m0_sq, WickOrdering ordering) {
  require_mass(m0_sq, "m0");
  if (sample.phi.size() != modes.size()) throw InvalidArgument("sample", "sample does not match the mode set");
  CompensatedSum w;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    w += sample.phi[k] * sample.phi[k] - 1.0 / (m0_sq + modes.eigenvalues[k]);
  }
  if (ordering == WickOrdering::C0) w += wick_c0_shift(modes.model, m0_sq);
  return w.value();
}

double wick_c0_shift(const SurfaceModel& model, double m0_sq) { return model.area * cf_mean(model, m0_sq).cf_mean; }

double smoothed_wick(const ModeSet& modes, const FieldSample& sample, double m0_sq, double t) {
  require_mass(m0_sq, "m0");
  if (!(t >= 0.0)) throw InvalidArgument("t", "smoothing time must be nonnegative");
  if (sample.phi.size() != modes.size()) throw InvalidArgument("sample", "sample does not match the mode set");
  CompensatedSum w;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const double lambda = modes.eigenvalues[k];
    w += std::exp(-2.0 * t * lambda) * (sample.phi[k] * sample.phi[k] - 1.0 / (m0_sq + lambda));
  }
  return w.value();
}

MeasureIdentityResult verify_measure_identity(const SurfaceModel& model, double m0, double m1, double lambda_max,
                                              std::size_t n, std::uint64_t seed, std::size_t chunk_size) {
  if (!(m0 > 0.0)) throw InvalidArgument("m0", "m0 must be positive");
  if (!(m1 >= 0.0)) throw InvalidArgument("m1", "m1 must be nonnegative");
  if (n < 2) throw InvalidArgument("samples", "need at least two samples");
  if (chunk_size == 0) throw InvalidArgument("chunk_size", "chunk size must be positive");
  const double m0_sq = m0 * m0;
  const double m1_sq = m1 * m1;
  const ModeSet modes = make_modes(model, lambda_max);
  const std::size_t dim = modes.size();
  const auto sd = standard_deviations(modes, m0_sq);

  std::vector<double> counter(dim);
  CompensatedSum counter_total;
  CompensatedSum log_target;
  for (std::size_t k = 0; k < dim; ++k) {
    counter[k] = 1.0 / (m0_sq + modes.eigenvalues[k]);
    counter_total += counter[k];
    const double x = m1_sq * counter[k];
    log_target += -0.5 * (std::log1p(x) - x);
  }
  // W_C >= -sum c_k, so log w = -m1^2 W_C / 2 <= m1^2 sum c_k / 2.
  const double log_shift = 0.5 * m1_sq * counter_total.value();

  WeightSums init;
  init.w_phi2.resize(dim);
  init.w2_phi2.resize(dim);
  init.w2_phi4.resize(dim);
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  const WeightSums sums = chunked_reduce<WeightSums>(
      chunks, 1,
      [&](std::size_t c, std::size_t) {
        WeightSums acc = init;
        auto engine = chunk_engine(seed, c);
        std::vector<double> phi;
        const std::size_t end = std::min(n, (c + 1) * chunk_size);
        for (std::size_t i = c * chunk_size; i < end; ++i) {
          draw(engine, sd, phi);
          CompensatedSum wick;
          for (std::size_t k = 0; k < dim; ++k) wick += phi[k] * phi[k] - counter[k];
          const double w = std::exp(-0.5 * m1_sq * wick.value() - log_shift);
          acc.w += w;
          acc.w2 += w * w;
          for (std::size_t k = 0; k < dim; ++k) {
            const double p2 = phi[k] * phi[k];
            acc.w_phi2[k] += w * p2;
            acc.w2_phi2[k] += w * w * p2;
            acc.w2_phi4[k] += w * w * p2 * p2;
          }
        }
        return acc;
      },
      [](WeightSums& into, const WeightSums& part) { into.merge(part); }, init);

  MeasureIdentityResult r;
  r.modes = dim;
  const double nn = static_cast<double>(n);
  const double scale = std::exp(log_shift);
  const double mean_scaled = sums.w.value() / nn;
  const double var_scaled = std::max(0.0, (sums.w2.value() / nn - mean_scaled * mean_scaled) * nn / (nn - 1.0));
  r.estimate.mean = scale * mean_scaled;
  r.estimate.std_error = scale * std::sqrt(var_scaled / nn);
  r.estimate.n_samples = n;
  r.estimate.target = std::exp(log_target.value());
  r.estimate.z_score = r.estimate.std_error > 0.0 ? (r.estimate.mean - r.estimate.target) / r.estimate.std_error : 0.0;

  Det2Options opt;
  opt.lambda_max = lambda_max;
  opt.tail_correction = false;
  r.det2_target = std::pow(det2(model, m0_sq, m1_sq, opt).value, -0.5);
  r.target_mismatch = std::abs(r.estimate.target / r.det2_target - 1.0);

  // Ratio estimator sum w phi^2 / sum w with a delta-method standard error.
  const double sw = sums.w.value();
  for (std::size_t k = 0; k < dim; ++k) {
    MCEstimate e;
    const double ratio = sums.w_phi2[k].value() / sw;
    const double resid2 =
        sums.w2_phi4[k].value() - 2.0 * ratio * sums.w2_phi2[k].value() + ratio * ratio * sums.w2.value();
    e.mean = ratio;
    e.std_error = std::sqrt(std::max(resid2, 0.0)) / sw;
    e.n_samples = n;
    e.target = 1.0 / (m0_sq + m1_sq + modes.eigenvalues[k]);
    e.z_score = e.std_error > 0.0 ? (e.mean - e.target) / e.std_error : 0.0;
    r.max_abs_variance_z = std::max(r.max_abs_variance_z, std::abs(e.z_score));
    r.reweighted_variance.push_back(e);
  }
  return r;
}

}  // namespace regdet
