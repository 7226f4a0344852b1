#ifndef LSTS_TOOLS_SELFTEST_HPP
#define LSTS_TOOLS_SELFTEST_HPP

#include "lsts/lsts.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace lsts::tools {

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

inline IntMatrix<2> random_pattern_matrix(std::mt19937_64& rng, Integer max_det) {
  std::uniform_int_distribution<Integer> entry(-12, 12);
  while (true) {
    IntMatrix<2> m;
    m << entry(rng), entry(rng), entry(rng), entry(rng);
    const Integer det = determinant<2>(m);
    if (det != 0 && std::abs(det) <= max_det) return m;
  }
}

/// Isotropic Green multiplier in closed form, written out by index.
inline SymTensor4<2> isotropic_green_closed_form(double lambda, double mu, const IntVector<2>& k) {
  const RealVector<2> xi = k.cast<double>().normalized();
  IndexTensor4<2> g{};
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          g[flat4<2>(i, j, p, q)] =
              (delta(i, p) * xi(j) * xi(q) + delta(j, p) * xi(i) * xi(q) + delta(i, q) * xi(j) * xi(p) +
               delta(j, q) * xi(i) * xi(p)) / (4.0 * mu) -
              (lambda + mu) / (mu * (lambda + 2.0 * mu)) * xi(i) * xi(j) * xi(p) * xi(q);
  return from_index_form<2>(g);
}

inline std::vector<Check> run_selftest(std::uint64_t seed) {
  std::vector<Check> checks;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      auto lattice = Lattice<2>::make(random_pattern_matrix(rng, 256));
      std::vector<Complex> a(lattice->size());
      for (auto& v : a) v = Complex(normal(rng), normal(rng));
      const auto fast = pattern_fft<2>(*lattice, a);
      const auto slow = pattern_dft<2>(*lattice, a);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(fast[i] - slow[i]);
        den += std::norm(slow[i]);
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    checks.push_back({"pattern FFT matches direct DFT", worst <= 1e-12, "max rel err " + format_double(worst)});
  }

  {
    const double lambda = 0.75, mu = 0.4;
    const auto c0 = isotropic_from_lame<2>(lambda, mu);
    double worst = 0.0;
    for (Integer k1 = -10; k1 <= 10; ++k1)
      for (Integer k2 = -10; k2 <= 10; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        const IntVector<2> k(k1, k2);
        worst = std::max(worst, (green_multiplier<2>(c0, k) - isotropic_green_closed_form(lambda, mu, k))
                                    .cwiseAbs()
                                    .maxCoeff());
      }
    checks.push_back({"Green multiplier matches isotropic closed form", worst <= 1e-12,
                      "max abs err " + format_double(worst)});
  }

  {
    IntMatrix<2> mat;
    mat << 16, 0, 0, 16;
    auto lattice = Lattice<2>::make(mat);
    const auto c0 = isotropic_stiffness<2>(3.0, 0.3);
    const auto dir = periodised_green_table<2>(c0, orthonormalize(CoefficientTable<2>(lattice, KernelSpec<2>::dirichlet())));
    const auto plain = green_table<2>(lattice, c0);
    double worst = 0.0;
    for (std::size_t h = 0; h < dir.size(); ++h)
      worst = std::max(worst, (dir[h] - plain[h]).cwiseAbs().maxCoeff());
    checks.push_back({"Dirichlet periodised Green table equals Green multiplier", worst <= 1e-14,
                      "max abs err " + format_double(worst)});

    SymField<2> gamma(lattice);
    for (Eigen::Index i = 0; i < gamma.data().size(); ++i)
      gamma.data().data()[i] = Complex(normal(rng), normal(rng));
    const auto once = apply_green(dir, apply_constant<2>(c0, gamma));
    const auto twice = apply_green(dir, apply_constant<2>(c0, once));
    const double defect = (twice - once).norm() / gamma.norm();
    checks.push_back({"Dirichlet Gamma C0 is idempotent", defect <= 1e-10, "defect " + format_double(defect)});
  }
  return checks;
}

}  // namespace lsts::tools

#endif  // LSTS_TOOLS_SELFTEST_HPP
