#include <cmath>
#include <numbers>

#include "garma/error.hpp"
#include "garma/spectral.hpp"

namespace garma {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// exp(-2 pi i num / den) with num reduced first so large arguments keep full precision.
Complex unit_root(std::size_t num, std::size_t den) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(num % den) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

DftPlan::DftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorCode::EmptyInput, "DFT length must be positive");
  fft_size_ = is_power_of_two(n) ? n : next_power_of_two(2 * n - 1);

  bit_reverse_.resize(fft_size_);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < fft_size_) ++bits;
  for (std::size_t i = 0; i < fft_size_; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
  twiddles_.resize(fft_size_ / 2);
  for (std::size_t j = 0; j < twiddles_.size(); ++j) twiddles_[j] = unit_root(j, fft_size_);

  if (fft_size_ != n_) {
    // chirp_k = exp(-i pi k^2 / n); k^2 is reduced modulo 2n before scaling.
    chirp_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) chirp_[k] = unit_root((k * k) % (2 * n_), 2 * n_);
    kernel_fft_.assign(fft_size_, Complex{});
    kernel_fft_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n_; ++k) {
      kernel_fft_[k] = std::conj(chirp_[k]);
      kernel_fft_[fft_size_ - k] = std::conj(chirp_[k]);
    }
    fft(kernel_fft_, false);
  }
}

void DftPlan::fft(std::span<Complex> a, bool inverse) const {
  const std::size_t n = fft_size_;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < bit_reverse_[i]) std::swap(a[i], a[bit_reverse_[i]]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex w = inverse ? std::conj(twiddles_[j * stride]) : twiddles_[j * stride];
        const Complex u = a[start + j];
        const Complex v = a[start + j + half] * w;
        a[start + j] = u + v;
        a[start + j + half] = u - v;
      }
    }
  }
}

void DftPlan::forward(std::span<Complex> data, std::vector<Complex>& scratch) const {
  if (data.size() != n_) throw Error(ErrorCode::DimensionMismatch, "DFT input length does not match plan");
  if (fft_size_ == n_) {
    fft(data, false);
    return;
  }
  scratch.assign(fft_size_, Complex{});
  for (std::size_t k = 0; k < n_; ++k) scratch[k] = data[k] * chirp_[k];
  fft(scratch, false);
  for (std::size_t k = 0; k < fft_size_; ++k) scratch[k] *= kernel_fft_[k];
  fft(scratch, true);
  const double inv = 1.0 / static_cast<double>(fft_size_);
  for (std::size_t k = 0; k < n_; ++k) data[k] = scratch[k] * chirp_[k] * inv;
}

std::vector<Complex> dft(std::span<const Complex> x) {
  if (x.empty()) throw Error(ErrorCode::EmptyInput, "DFT input is empty");
  DftPlan plan(x.size());
  std::vector<Complex> out(x.begin(), x.end());
  std::vector<Complex> scratch;
  plan.forward(out, scratch);
  return out;
}

}  // namespace garma
