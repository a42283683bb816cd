#include "garma/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "garma/error.hpp"
#include "garma/random.hpp"

namespace garma {

namespace {

// Simulated maxima within this relative distance of the observed maximum
// count as ties (permutations such as reversal reproduce it up to rounding).
constexpr double kTieTolerance = 1e-10;

struct Preprocessed {
  std::vector<Complex> values;
  std::size_t dof = 0;
};

Preprocessed preprocess(std::vector<Complex> x, bool centred, bool scaled) {
  if (x.empty()) throw Error(ErrorCode::EmptyInput, "series is empty");
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::InvalidParam, "intensity needs a series of length at least 2");
  for (const auto& v : x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::InvalidParam, "series values must be finite");
    }
  }
  double raw_ss = 0.0;
  for (const auto& v : x) raw_ss += std::norm(v);

  Preprocessed out;
  out.dof = centred ? n - 1 : n;
  if (centred) {
    Complex mean{};
    for (const auto& v : x) mean += v;
    mean /= static_cast<double>(n);
    for (auto& v : x) v -= mean;
  }
  if (scaled) {
    double ss = 0.0;
    for (const auto& v : x) ss += std::norm(v);
    if (ss == 0.0 || ss <= 1e-26 * raw_ss) {
      throw Error(ErrorCode::ZeroVariance, "cannot scale a series with zero variance");
    }
    const double s = std::sqrt(ss / static_cast<double>(out.dof));
    for (auto& v : x) v /= s;
  }
  out.values = std::move(x);
  return out;
}

std::vector<Complex> to_complex(std::span<const double> x) { return {x.begin(), x.end()}; }

IntensityVector intensity_impl(std::vector<Complex> x, bool complex_input, const IntensityOptions& options) {
  const std::size_t n = x.size();
  auto pre = preprocess(std::move(x), options.centred, options.scaled);
  DftPlan plan(n);
  std::vector<Complex> scratch;
  plan.forward(pre.values, scratch);

  IntensityVector out;
  out.series_length = n;
  out.centred = options.centred;
  out.scaled = options.scaled;
  out.complex_input = complex_input;
  out.nyquist_truncated = options.nyquist && !complex_input;
  out.dof = pre.dof;
  const std::size_t len = out.nyquist_truncated ? n / 2 + 1 : n;
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  out.values.resize(len);
  out.frequencies.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    out.values[k] = std::abs(pre.values[k]) * norm;
    out.frequencies[k] = k;
  }
  if (options.centred) out.values[0] = 0.0;
  return out;
}

void shuffle(std::vector<Complex>& v, Rng& rng) {
  for (std::size_t i = v.size() - 1; i > 0; --i) {
    std::swap(v[i], v[static_cast<std::size_t>(rng.below(i + 1))]);
  }
}

SpectrumTestResult spectrum_test_impl(std::vector<Complex> x, bool complex_input,
                                      const SpectrumTestOptions& options) {
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::InvalidParam, "spectrum test needs a series of length at least 3");
  if (options.sims < 1) throw Error(ErrorCode::InvalidParam, "sims must be at least 1");

  SpectrumTestResult out;
  out.intensity = intensity_impl(x, complex_input, {});
  out.statistic = *std::max_element(out.intensity.values.begin() + 1, out.intensity.values.end());
  out.sims = options.sims;
  out.seed = options.seed;
  out.series_len = n;
  out.complex_input = complex_input;
  out.null_sample.assign(options.sims, 0.0);

  // Centring and scaling commute with permutation, so the null statistics are
  // computed from permutations of the preprocessed series.
  const auto base = preprocess(std::move(x), true, true).values;
  const std::size_t max_k = complex_input ? n - 1 : n / 2;
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  const DftPlan plan(n);

  const std::size_t blocks = (options.sims + kSpectrumTestBlock - 1) / kSpectrumTestBlock;
  std::atomic<std::size_t> next_block{0};
  std::mutex progress_mutex;
  std::size_t done = 0;
  std::size_t last_reported = 0;

  auto worker = [&] {
    std::vector<Complex> work, buffer, scratch;
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= blocks) return;
      const std::size_t first = b * kSpectrumTestBlock;
      const std::size_t last = std::min(options.sims, first + kSpectrumTestBlock);
      Rng rng(derive_seed(options.seed, b));
      work = base;
      for (std::size_t s = first; s < last; ++s) {
        shuffle(work, rng);
        buffer = work;
        plan.forward(buffer, scratch);
        double peak = 0.0;
        for (std::size_t k = 1; k <= max_k; ++k) peak = std::max(peak, std::abs(buffer[k]));
        out.null_sample[s] = peak * norm;
      }
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        done += last - first;
        if (done - last_reported >= options.progress_interval || done == options.sims) {
          last_reported = done;
          options.progress(done, options.sims);
        }
      }
    }
  };

  std::size_t threads = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min(threads, blocks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  const double threshold = out.statistic * (1.0 - kTieTolerance);
  const auto exceed = std::count_if(out.null_sample.begin(), out.null_sample.end(),
                                    [threshold](double t) { return t >= threshold; });
  out.p_value = (1.0 + static_cast<double>(exceed)) / (static_cast<double>(options.sims) + 1.0);
  return out;
}

}  // namespace

std::string IntensityVector::label(std::size_t i) const {
  return "Freq[" + std::to_string(frequencies.at(i)) + "/" + std::to_string(series_length) + "]";
}

IntensityVector intensity(std::span<const double> x, const IntensityOptions& options) {
  return intensity_impl(to_complex(x), false, options);
}

IntensityVector intensity(std::span<const Complex> x, const IntensityOptions& options) {
  return intensity_impl({x.begin(), x.end()}, true, options);
}

std::vector<IntensityVector> intensity(const Eigen::MatrixXd& rows, const IntensityOptions& options) {
  std::vector<IntensityVector> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  std::vector<double> row(static_cast<std::size_t>(rows.cols()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) row[static_cast<std::size_t>(c)] = rows(r, c);
    out.push_back(intensity(row, options));
  }
  return out;
}

SpectrumTestResult spectrum_test(std::span<const double> x, const SpectrumTestOptions& options) {
  return spectrum_test_impl(to_complex(x), false, options);
}

SpectrumTestResult spectrum_test(std::span<const Complex> x, const SpectrumTestOptions& options) {
  return spectrum_test_impl({x.begin(), x.end()}, true, options);
}

}  // namespace garma
