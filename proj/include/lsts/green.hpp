#ifndef LSTS_GREEN_HPP
#define LSTS_GREEN_HPP

#include "lsts/errors.hpp"
#include "lsts/field.hpp"
#include "lsts/io.hpp"
#include "lsts/kernels.hpp"
#include "lsts/lattice.hpp"
#include "lsts/pattern_fft.hpp"
#include "lsts/tensor.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace lsts {

/// (i/2)(k u^T + u k^T).
template <int D>
Eigen::Matrix<Complex, D, D> grad_sym_multiplier(const IntVector<D>& k,
                                                 const Eigen::Matrix<Complex, D, 1>& u) {
  const Eigen::Matrix<Complex, D, 1> kc = k.template cast<double>().template cast<Complex>();
  return Complex(0.0, 0.5) * (kc * u.transpose() + u * kc.transpose());
}

/// Fourier multiplier of the Green operator for reference stiffness c0 at
/// frequency k, in Mandel form. Zero at k = 0.
template <int D>
SymTensor4<D> green_multiplier(const IndexTensor4<D>& c0, const IntVector<D>& k) {
  if (k.isZero()) return SymTensor4<D>::Zero();
  // The multiplier is homogeneous of degree 0; work with the unit direction.
  const RealVector<D> xi = k.template cast<double>().normalized();
  RealMatrix<D> acoustic = RealMatrix<D>::Zero();
  for (int p = 0; p < D; ++p)
    for (int q = 0; q < D; ++q)
      for (int j = 0; j < D; ++j)
        for (int l = 0; l < D; ++l) acoustic(p, q) += c0[flat4<D>(p, j, q, l)] * xi(j) * xi(l);
  Eigen::FullPivLU<RealMatrix<D>> lu(acoustic);
  if (!lu.isInvertible())
    throw SingularAcousticTensor("acoustic tensor is singular at k = " + to_string(k));
  const RealMatrix<D> inv = lu.inverse();
  IndexTensor4<D> g{};
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int p = 0; p < D; ++p)
        for (int q = 0; q < D; ++q)
          g[flat4<D>(i, j, p, q)] = 0.25 * (inv(i, p) * xi(j) * xi(q) + inv(j, p) * xi(i) * xi(q) +
                                            inv(i, q) * xi(j) * xi(p) + inv(j, q) * xi(i) * xi(p));
  return from_index_form<D>(g);
}

template <int D>
SymTensor4<D> green_multiplier(const SymTensor4<D>& c0, const IntVector<D>& k) {
  return green_multiplier<D>(to_index_form<D>(c0), k);
}

/**
 * Per-class Green matrices on a pattern, with the FFT plan used to apply
 * them. The matrices are real symmetric because the continuous multiplier is.
 */
template <int D>
class GreenTable {
 public:
  GreenTable(std::shared_ptr<const Lattice<D>> lattice, const SymTensor4<D>& reference,
             std::vector<SymTensor4<D>> blocks)
      : lattice_(std::move(lattice)),
        fft_(std::make_shared<PatternFft<D>>(*lattice_)),
        reference_(reference),
        blocks_(std::move(blocks)) {
    if (blocks_.size() != lattice_->size()) throw LengthMismatch(lattice_->size(), blocks_.size());
  }

  const Lattice<D>& lattice() const { return *lattice_; }
  const std::shared_ptr<const Lattice<D>>& lattice_ptr() const { return lattice_; }
  const PatternFft<D>& fft() const { return *fft_; }
  const SymTensor4<D>& reference() const { return reference_; }
  std::size_t size() const { return blocks_.size(); }
  const SymTensor4<D>& operator[](std::size_t cls) const { return blocks_[cls]; }

 private:
  std::shared_ptr<const Lattice<D>> lattice_;
  std::shared_ptr<PatternFft<D>> fft_;
  SymTensor4<D> reference_;
  std::vector<SymTensor4<D>> blocks_;
};

/// Green table with the plain multiplier at each canonical representative.
template <int D>
GreenTable<D> green_table(std::shared_ptr<const Lattice<D>> lattice, const SymTensor4<D>& c0) {
  const auto idx = to_index_form<D>(c0);
  std::vector<SymTensor4<D>> blocks(lattice->size());
  for (std::size_t h = 0; h < blocks.size(); ++h)
    blocks[h] = green_multiplier<D>(idx, lattice->frequencies()[h]);
  blocks[lattice->frequencies().index_of(IntVector<D>::Zero())].setZero();
  return GreenTable<D>(std::move(lattice), c0, std::move(blocks));
}

/// m sum_{k in class h} |c_k|^2 Gamma0(k), zero on the zero class.
template <int D>
GreenTable<D> periodised_green_table(const SymTensor4<D>& c0, const CoefficientTable<D>& kernel) {
  const double defect = kernel.orthonormality_defect();
  if (!(defect <= 1e-10)) throw KernelNotOrthonormal(defect);
  if (!ellipticity_bounds<D>(c0).elliptic())
    throw NonElliptic("reference stiffness is not elliptic");
  const auto idx = to_index_form<D>(c0);
  const double m = double(kernel.size());
  std::vector<SymTensor4<D>> blocks(kernel.size());
  for (std::size_t h = 0; h < blocks.size(); ++h) {
    SymTensor4<D> acc = SymTensor4<D>::Zero();
    kernel.for_each_term(h, [&](const IntVector<D>& k, double c) {
      if (!k.isZero()) acc += (c * c) * green_multiplier<D>(idx, k);
    });
    blocks[h] = m * acc;
  }
  blocks[kernel.lattice().frequencies().index_of(IntVector<D>::Zero())].setZero();
  return GreenTable<D>(kernel.lattice_ptr(), c0, std::move(blocks));
}

/// Gamma applied to a field: FFT per component, class-wise multiply, inverse FFT.
template <int D>
SymField<D> apply_green(const GreenTable<D>& table, const SymField<D>& field) {
  if (!same_pattern(table.lattice(), field.lattice()) || field.size() != table.size())
    throw ShapeMismatch("field and Green table live on different patterns");
  constexpr int ns = sym_size<D>;
  typename SymField<D>::Data work = field.data();
  // A constant shift only moves the zero class. When that class is
  // annihilated, shifting by the first value sends constant fields to an
  // exact zero instead of FFT round-off.
  if (table[0].isZero(0.0)) {
    const auto first = work.row(0).eval();
    work.rowwise() -= first;
  }
  for (int a = 0; a < ns; ++a)
    table.fft().forward(std::span<Complex>(work.col(a).data(), table.size()));
  for (std::size_t h = 0; h < table.size(); ++h) {
    const auto row = static_cast<Eigen::Index>(h);
    const SymTensor2<D, Complex> v = work.row(row).transpose();
    work.row(row) = (table[h].template cast<Complex>() * v).transpose();
  }
  for (int a = 0; a < ns; ++a)
    table.fft().backward(std::span<Complex>(work.col(a).data(), table.size()));
  SymField<D> out(field.lattice_ptr());
  out.data() = std::move(work);
  return out;
}

/// Writes the table as raw little-endian doubles: class after class, each an
/// n_s x n_s matrix in row-major order.
template <int D>
void dump_green_table(const GreenTable<D>& table, const std::filesystem::path& path) {
  constexpr int ns = sym_size<D>;
  std::vector<char> bytes;
  bytes.reserve(table.size() * ns * ns * sizeof(double));
  for (std::size_t h = 0; h < table.size(); ++h)
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < ns; ++j) {
        std::uint64_t bits;
        const double v = table[h](i, j);
        std::memcpy(&bits, &v, sizeof bits);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        char buf[8];
        std::memcpy(buf, &bits, sizeof bits);
        bytes.insert(bytes.end(), buf, buf + 8);
      }
  write_atomic(path, std::string_view(bytes.data(), bytes.size()));
}

}  // namespace lsts

#endif  // LSTS_GREEN_HPP
