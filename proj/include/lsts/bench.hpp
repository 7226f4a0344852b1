#ifndef LSTS_BENCH_HPP
#define LSTS_BENCH_HPP

#include "lsts/errors.hpp"
#include "lsts/field.hpp"
#include "lsts/lattice.hpp"
#include "lsts/solver.hpp"
#include "lsts/tensor.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace lsts {

/// Stiffness field together with the phase label of every pattern point.
template <int D>
struct Rasterization {
  StiffnessField<D> stiffness;
  std::vector<int> phases;
};

/// Assigns materials[phase(y)] to every pattern point y.
template <int D>
Rasterization<D> rasterize(std::shared_ptr<const Lattice<D>> lattice,
                           const std::function<int(const Lattice<D>&, std::size_t)>& phase,
                           const std::vector<SymTensor4<D>>& materials) {
  Rasterization<D> out{StiffnessField<D>(lattice), std::vector<int>(lattice->size())};
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    const int p = phase(*lattice, i);
    if (p < 0 || p >= static_cast<int>(materials.size()))
      throw InvalidGeometry("phase label " + std::to_string(p) + " has no material");
    out.phases[i] = p;
    out.stiffness[i] = materials[static_cast<std::size_t>(p)];
  }
  return out;
}

// ---------------------------------------------------------------- Hashin

enum HashinPhase { hashin_core = 0, hashin_coating = 1, hashin_matrix = 2 };

/// Two confocal ellipses (core and coating) in a matrix, rotated about the
/// cell centre. Semi-axes of the core are c1, c2; the coating adds rho to
/// both squared semi-axes.
struct HashinGeometry {
  double c1 = 0.05;
  double c2 = 0.35;
  double rho = 0.09;
  double rotation_degrees = 60.0;
  SymTensor4<2> core = isotropic_stiffness<2>(1.0, 0.3);
  SymTensor4<2> coating = isotropic_stiffness<2>(10.0, 0.3);
  SymTensor4<2> matrix = isotropic_stiffness<2>(5.0, 0.3);

  void validate() const {
    if (!(c1 > 0.0 && c1 < c2)) throw InvalidGeometry("Hashin geometry needs 0 < c1 < c2");
    if (!(rho > 0.0)) throw InvalidGeometry("Hashin geometry needs rho > 0");
    if (!std::isfinite(rotation_degrees)) throw InvalidGeometry("rotation must be finite");
  }
};

namespace detail {

/// cos and sin of an angle in degrees, exact for multiples of 90.
inline std::pair<double, double> cos_sin_degrees(double deg) {
  const double q = deg / 90.0;
  if (q == std::round(q)) {
    const long k = ((static_cast<long>(std::round(q)) % 4) + 4) % 4;
    constexpr double c[4] = {1.0, 0.0, -1.0, 0.0};
    constexpr double s[4] = {0.0, 1.0, 0.0, -1.0};
    return {c[k], s[k]};
  }
  const double r = deg * std::numbers::pi / 180.0;
  return {std::cos(r), std::sin(r)};
}

}  // namespace detail

/// Phase of a point y of the unit cell, with periodic images.
inline int hashin_phase(const HashinGeometry& g, const RealVector<2>& y) {
  const auto [c, s] = detail::cos_sin_degrees(g.rotation_degrees);
  const double a1 = g.c1 * g.c1, a2 = g.c2 * g.c2;
  int best = hashin_matrix;
  for (int z1 = -1; z1 <= 1; ++z1)
    for (int z2 = -1; z2 <= 1; ++z2) {
      const double p1 = y(0) + z1, p2 = y(1) + z2;
      // rotate by -theta
      const double x1 = c * p1 + s * p2;
      const double x2 = -s * p1 + c * p2;
      if (x1 * x1 / a1 + x2 * x2 / a2 <= 1.0) return hashin_core;
      if (x1 * x1 / (a1 + g.rho) + x2 * x2 / (a2 + g.rho) <= 1.0) best = hashin_coating;
    }
  return best;
}

inline Rasterization<2> rasterize_hashin(std::shared_ptr<const Lattice<2>> lattice,
                                         const HashinGeometry& g) {
  g.validate();
  return rasterize<2>(
      std::move(lattice),
      [&g](const Lattice<2>& l, std::size_t i) { return hashin_phase(g, l.pattern().point(i)); },
      {g.core, g.coating, g.matrix});
}

// -------------------------------------------------------------- laminate

/// Two layers stacked along a coordinate axis: phase 0 where the normal
/// coordinate lies in [-1/2, -1/2 + fraction), phase 1 elsewhere.
template <int D>
struct LaminateGeometry {
  int normal_axis = 0;
  double fraction = 0.5;
  SymTensor4<D> phase1 = isotropic_stiffness<D>(1.0, 0.3);
  SymTensor4<D> phase2 = isotropic_stiffness<D>(10.0, 0.3);

  void validate() const {
    if (normal_axis < 0 || normal_axis >= D)
      throw InvalidGeometry("laminate normal must be a coordinate axis 1.." + std::to_string(D));
    if (!(fraction >= 0.0 && fraction <= 1.0))
      throw InvalidGeometry("laminate volume fraction must lie in [0, 1]");
  }

  RealVector<D> normal() const { return RealVector<D>::Unit(normal_axis); }
};

template <int D>
int laminate_phase(const LaminateGeometry<D>& g, const Lattice<D>& lattice, std::size_t i) {
  const auto& r = lattice.pattern().numerator(i);
  const double s = double(r(g.normal_axis)) / double(lattice.pattern().denominator());
  return s + 0.5 < g.fraction ? 0 : 1;
}

template <int D>
Rasterization<D> rasterize_laminate(std::shared_ptr<const Lattice<D>> lattice,
                                    const LaminateGeometry<D>& g) {
  g.validate();
  return rasterize<D>(
      std::move(lattice),
      [&g](const Lattice<D>& l, std::size_t i) { return laminate_phase<D>(g, l, i); },
      {g.phase1, g.phase2});
}

/// Exact laminate response to a macroscopic strain: the constant strain in
/// each layer. Jumps are sym(a_i (x) n) with f1 a1 + f2 a2 = 0 and continuous
/// normal traction.
template <int D>
std::pair<SymTensor2<D>, SymTensor2<D>> laminate_phase_strains(const LaminateGeometry<D>& g,
                                                              const SymTensor2<D>& eps) {
  g.validate();
  if (!ellipticity_bounds<D>(g.phase1).elliptic() || !ellipticity_bounds<D>(g.phase2).elliptic())
    throw NonElliptic("laminate phases must be elliptic");
  const auto c1 = to_index_form<D>(g.phase1);
  const auto c2 = to_index_form<D>(g.phase2);
  const RealVector<D> n = g.normal();
  auto acoustic = [&](const IndexTensor4<D>& c) {
    RealMatrix<D> a = RealMatrix<D>::Zero();
    for (int p = 0; p < D; ++p)
      for (int q = 0; q < D; ++q)
        for (int j = 0; j < D; ++j)
          for (int l = 0; l < D; ++l) a(p, q) += c[flat4<D>(p, j, q, l)] * n(j) * n(l);
    return a;
  };
  const double f1 = g.fraction, f2 = 1.0 - g.fraction;
  Eigen::Matrix<double, 2 * D, 2 * D> sys = Eigen::Matrix<double, 2 * D, 2 * D>::Zero();
  sys.template topLeftCorner<D, D>() = f1 * RealMatrix<D>::Identity();
  sys.template topRightCorner<D, D>() = f2 * RealMatrix<D>::Identity();
  sys.template bottomLeftCorner<D, D>() = acoustic(c1);
  sys.template bottomRightCorner<D, D>() = -acoustic(c2);
  const RealMatrix<D> jump = from_mandel<D, double>(SymTensor2<D>((g.phase2 - g.phase1) * eps));
  Eigen::Matrix<double, 2 * D, 1> rhs = Eigen::Matrix<double, 2 * D, 1>::Zero();
  rhs.template tail<D>() = jump * n;
  const Eigen::Matrix<double, 2 * D, 1> a = sys.fullPivLu().solve(rhs);
  auto strain = [&](const RealVector<D>& v) {
    const RealMatrix<D> s = 0.5 * (v * n.transpose() + n * v.transpose());
    return SymTensor2<D>(eps + to_mandel<D, double>(s));
  };
  return {strain(a.template head<D>()), strain(a.template tail<D>())};
}

/// Effective stiffness of the laminate from the layer-wise exact solution.
template <int D>
SymTensor4<D> laminate_effective_oracle(const LaminateGeometry<D>& g) {
  constexpr int ns = sym_size<D>;
  SymTensor4<D> out;
  for (int b = 0; b < ns; ++b) {
    const auto [e1, e2] = laminate_phase_strains<D>(g, SymTensor2<D>::Unit(b));
    out.col(b) = g.fraction * (g.phase1 * e1) + (1.0 - g.fraction) * (g.phase2 * e2);
  }
  return out;
}

// ------------------------------------------------------------- inclusion

/// Ball (disk in 2-D) of the given radius at the cell centre, phase 0 inside.
template <int D>
struct InclusionGeometry {
  double radius = 0.25;
  SymTensor4<D> inclusion = isotropic_stiffness<D>(10.0, 0.3);
  SymTensor4<D> host = isotropic_stiffness<D>(1.0, 0.3);
};

template <int D>
Rasterization<D> rasterize_inclusion(std::shared_ptr<const Lattice<D>> lattice,
                                     const InclusionGeometry<D>& g) {
  if (!(g.radius > 0.0 && g.radius <= 0.5)) throw InvalidGeometry("inclusion radius must lie in (0, 1/2]");
  return rasterize<D>(
      std::move(lattice),
      [&g](const Lattice<D>& l, std::size_t i) {
        return l.pattern().point(i).norm() <= g.radius ? 0 : 1;
      },
      {g.inclusion, g.host});
}

// --------------------------------------------------------------- metrics

/// Restriction of a field on a fine pattern to the points of a coarser
/// pattern contained in it.
template <int D>
SymField<D> restrict_field(const SymField<D>& fine, std::shared_ptr<const Lattice<D>> coarse) {
  const Lattice<D>& fl = fine.lattice();
  const Integer mf = fl.pattern().denominator();
  const Integer mc = coarse->pattern().denominator();
  if (mf % mc != 0)
    throw PatternMismatch("pattern of size " + std::to_string(mc) +
                          " is not contained in the pattern of size " + std::to_string(mf));
  const IntMatrix<D>& fm = fl.matrix().matrix();
  SymField<D> out(coarse);
  for (std::size_t i = 0; i < coarse->size(); ++i) {
    const IntVector<D> r = coarse->pattern().numerator(i) * (mf / mc);
    const IntVector<D> test = fm * r;
    for (int a = 0; a < D; ++a)
      if (detail::floor_mod(test(a), mf) != 0)
        throw PatternMismatch("pattern point " + to_string(coarse->pattern().point(i)) +
                              " is not on the fine pattern");
    out.set(i, fine.at(fl.pattern().index_of(r)));
  }
  return out;
}

enum class EffectiveMetric {
  /// Mean stress (1/m) sum C : (E + eps0) against the reference action.
  mean_stress,
  /// sum C : E against the reference action, without mean or eps0.
  literal,
};

struct ErrorMetrics {
  double e_eff = 0.0;
  double e_l2 = 0.0;
  std::vector<double> e_log;
};

/// e_eff, relative l2 error of the total strain, and log(1 + |d eps_11|).
template <int D>
ErrorMetrics error_metrics(const SymField<D>& solution, const SymField<D>& reference,
                           const StiffnessField<D>& c, const SymTensor2<D>& eps0,
                           const SymTensor2<D>& reference_action,
                           EffectiveMetric mode = EffectiveMetric::mean_stress) {
  if (!same_pattern(solution.lattice(), reference.lattice()) ||
      !same_pattern(solution.lattice(), c.lattice()))
    throw PatternMismatch("solution, reference and stiffness must share one pattern");
  ErrorMetrics out;
  const SymTensor2<D> action = mode == EffectiveMetric::mean_stress
                                   ? effective_action<D>(c, solution, eps0)
                                   : fluctuation_action<D>(c, solution);
  const double ref_norm = reference_action.norm();
  out.e_eff = ref_norm > 0.0 ? (reference_action - action).norm() / ref_norm
                             : (reference_action - action).norm();
  double diff = 0.0, ref = 0.0;
  out.e_log.resize(solution.size());
  for (std::size_t i = 0; i < solution.size(); ++i) {
    const SymTensor2<D> a = solution.at(i).real() + eps0;
    const SymTensor2<D> b = reference.at(i).real() + eps0;
    diff += (a - b).squaredNorm();
    ref += b.squaredNorm();
    out.e_log[i] = std::log1p(std::abs(b(0) - a(0)));
  }
  out.e_l2 = ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
  return out;
}

}  // namespace lsts

#endif  // LSTS_BENCH_HPP
