#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace garma {

using Complex = std::complex<double>;

/// Precomputed discrete Fourier transform of a fixed length,
/// X_k = sum_t x_t exp(-2 pi i k t / n). Powers of two use an iterative
/// radix-2 transform, other lengths use Bluestein's chirp-z convolution.
/// A plan is immutable; callers supply the scratch buffer.
class DftPlan {
 public:
  explicit DftPlan(std::size_t n);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  /// Transforms `data` in place; `scratch` is resized as needed.
  void forward(std::span<Complex> data, std::vector<Complex>& scratch) const;

 private:
  std::size_t n_;
  std::size_t fft_size_;  // power-of-two size of the underlying FFT
  std::vector<std::size_t> bit_reverse_;
  std::vector<Complex> twiddles_;  // exp(-2 pi i j / fft_size_), j < fft_size_ / 2
  std::vector<Complex> chirp_;     // Bluestein only
  std::vector<Complex> kernel_fft_;

  void fft(std::span<Complex> a, bool inverse) const;
};

/// One-shot transform. Throws EmptyInput for an empty vector.
[[nodiscard]] std::vector<Complex> dft(std::span<const Complex> x);

struct IntensityOptions {
  bool centred = true;
  bool scaled = true;
  bool nyquist = true;  // ignored for complex input
};

/// Fourier intensity |X_k| / sqrt(n) of a preprocessed series. With
/// centring the mean is removed (dof = n - 1); with scaling the series is
/// divided by s, s^2 = sum |x'|^2 / dof, so the full intensity vector has
/// squared norm dof.
struct IntensityVector {
  std::vector<double> values;
  std::vector<std::size_t> frequencies;  // k for frequency k / n
  std::size_t series_length = 0;
  bool centred = true;
  bool scaled = true;
  bool nyquist_truncated = false;
  bool complex_input = false;
  std::size_t dof = 0;

  /// "Freq[k/n]"
  [[nodiscard]] std::string label(std::size_t i) const;
};

[[nodiscard]] IntensityVector intensity(std::span<const double> x, const IntensityOptions& options = {});
[[nodiscard]] IntensityVector intensity(std::span<const Complex> x, const IntensityOptions& options = {});

/// Row-wise intensity of a matrix (one series per row).
[[nodiscard]] std::vector<IntensityVector> intensity(const Eigen::MatrixXd& rows,
                                                     const IntensityOptions& options = {});

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

struct SpectrumTestOptions {
  std::size_t sims = 1'000'000;
  std::uint64_t seed = 0;
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  std::size_t threads = 1;
  /// Called (serialized) roughly every `progress_interval` simulations.
  ProgressCallback progress;
  std::size_t progress_interval = 10'000;
};

struct SpectrumTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t sims = 0;
  std::vector<double> null_sample;
  std::uint64_t seed = 0;
  std::size_t series_len = 0;
  bool complex_input = false;
  /// Canonical (centred, scaled, Nyquist-truncated for real input) intensity.
  IntensityVector intensity;
};

/// Permutation-spectrum test of exchangeability against periodic signals.
/// The statistic is the maximum canonical intensity over nonzero
/// frequencies; the null distribution comes from `sims` uniformly random
/// permutations and p = (1 + #{T_sim >= T_obs}) / (sims + 1).
[[nodiscard]] SpectrumTestResult spectrum_test(std::span<const double> x, const SpectrumTestOptions& options);
[[nodiscard]] SpectrumTestResult spectrum_test(std::span<const Complex> x, const SpectrumTestOptions& options);

/// Simulations per independently seeded block of the null distribution.
inline constexpr std::size_t kSpectrumTestBlock = 1024;

}  // namespace garma
