#ifndef LSTS_PATTERN_FFT_HPP
#define LSTS_PATTERN_FFT_HPP

#include "lsts/errors.hpp"
#include "lsts/lattice.hpp"
#include "lsts/types.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

namespace lsts {

/// Scaling convention of a pattern transform.
enum class Normalization {
  /// F(M) = m^{-1/2} (e^{-2 pi i h.y}): unitary pair.
  unitary,
  /// sqrt(m) F(M) forward, its inverse backward (translate coefficients).
  coefficient,
};

namespace detail {
// FFTW's planner is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex mutex;
  return mutex;
}
}  // namespace detail

/**
 * Fast Fourier transform between values on P(M) and G(M^T).
 *
 * Pattern points and frequencies are both laid out row-major in their Smith
 * grid coordinates, so the pattern transform is a plain multidimensional DFT
 * over the elementary divisors (d_1, ..., d_D). Plans are created with
 * FFTW_ESTIMATE so results are bit-reproducible run to run.
 */
template <int D>
class PatternFft {
 public:
  explicit PatternFft(const Lattice<D>& lattice) : size_(lattice.size()) {
    std::array<int, D> dims;
    for (int i = 0; i < D; ++i) dims[i] = static_cast<int>(lattice.smith().divisors(i));
    std::vector<Complex> scratch(size_);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(detail::fftw_planner_mutex());
    forward_ = fftw_plan_dft(D, dims.data(), buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft(D, dims.data(), buf, buf, FFTW_BACKWARD, flags);
  }

  PatternFft(const PatternFft&) = delete;
  PatternFft& operator=(const PatternFft&) = delete;

  ~PatternFft() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  std::size_t size() const { return size_; }

  /// In-place forward transform, values on P(M) -> spectrum on G(M^T).
  void forward(std::span<Complex> data, Normalization norm = Normalization::unitary) const {
    check(data.size());
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(forward_, p, p);
    const double s = norm == Normalization::unitary ? 1.0 / std::sqrt(double(size_)) : 1.0;
    if (s != 1.0)
      for (auto& v : data) v *= s;
  }

  /// In-place inverse of forward() under the same normalisation.
  void backward(std::span<Complex> data, Normalization norm = Normalization::unitary) const {
    check(data.size());
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(backward_, p, p);
    const double s = norm == Normalization::unitary ? 1.0 / std::sqrt(double(size_))
                                                    : 1.0 / double(size_);
    for (auto& v : data) v *= s;
  }

 private:
  void check(std::size_t n) const {
    if (n != size_) throw LengthMismatch(size_, n);
  }

  std::size_t size_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

/// Direct O(m^2) evaluation of F(M) a. Reference for the fast transform.
template <int D>
std::vector<Complex> pattern_dft(const Lattice<D>& lattice, std::span<const Complex> a) {
  const std::size_t m = lattice.size();
  if (a.size() != m) throw LengthMismatch(m, a.size());
  const Integer denom = static_cast<Integer>(m);
  const auto& freqs = lattice.frequencies();
  const auto& pattern = lattice.pattern();
  std::vector<Complex> out(m);
  const double scale = 1.0 / std::sqrt(double(m));
  for (std::size_t hi = 0; hi < m; ++hi) {
    Complex acc = 0.0;
    for (std::size_t yi = 0; yi < m; ++yi) {
      // h.y = (h . r) / m, reduced exactly before taking the angle.
      const Integer phase = detail::floor_mod(freqs[hi].dot(pattern.numerator(yi)), denom);
      const double angle = -2.0 * std::numbers::pi * double(phase) / double(denom);
      acc += a[yi] * Complex(std::cos(angle), std::sin(angle));
    }
    out[hi] = acc * scale;
  }
  return out;
}

/// Inverse of pattern_dft (conjugate transpose of F(M)).
template <int D>
std::vector<Complex> pattern_idft(const Lattice<D>& lattice, std::span<const Complex> ahat) {
  const std::size_t m = lattice.size();
  if (ahat.size() != m) throw LengthMismatch(m, ahat.size());
  const Integer denom = static_cast<Integer>(m);
  const auto& freqs = lattice.frequencies();
  const auto& pattern = lattice.pattern();
  std::vector<Complex> out(m);
  const double scale = 1.0 / std::sqrt(double(m));
  for (std::size_t yi = 0; yi < m; ++yi) {
    Complex acc = 0.0;
    for (std::size_t hi = 0; hi < m; ++hi) {
      const Integer phase = detail::floor_mod(freqs[hi].dot(pattern.numerator(yi)), denom);
      const double angle = 2.0 * std::numbers::pi * double(phase) / double(denom);
      acc += ahat[hi] * Complex(std::cos(angle), std::sin(angle));
    }
    out[yi] = acc * scale;
  }
  return out;
}

template <int D>
std::vector<Complex> pattern_fft(const Lattice<D>& lattice, std::span<const Complex> a,
                                 Normalization norm = Normalization::unitary) {
  if (a.size() != lattice.size()) throw LengthMismatch(lattice.size(), a.size());
  std::vector<Complex> out(a.begin(), a.end());
  PatternFft<D>(lattice).forward(out, norm);
  return out;
}

template <int D>
std::vector<Complex> pattern_ifft(const Lattice<D>& lattice, std::span<const Complex> ahat,
                                  Normalization norm = Normalization::unitary) {
  if (ahat.size() != lattice.size()) throw LengthMismatch(lattice.size(), ahat.size());
  std::vector<Complex> out(ahat.begin(), ahat.end());
  PatternFft<D>(lattice).backward(out, norm);
  return out;
}

}  // namespace lsts

#endif  // LSTS_PATTERN_FFT_HPP
