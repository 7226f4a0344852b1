#ifndef LSTS_SOLVER_HPP
#define LSTS_SOLVER_HPP

#include "lsts/errors.hpp"
#include "lsts/field.hpp"
#include "lsts/green.hpp"
#include "lsts/tensor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

namespace lsts {

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 5000;
};

template <int D>
struct SolveReport {
  SymField<D> strain;
  int iterations = 0;
  /// Relative Cauchy error after each iteration.
  std::vector<double> residual_history;
  SymTensor2<D> effective_action;
  /// False if the Cauchy error ever increased after the first iteration.
  bool monotone = true;
  double imaginary_norm = 0.0;
  double wall_time = 0.0;
};

/// Isotropic reference with Lame parameters halfway between the extreme
/// values found in the field (each point projected onto isotropic tensors).
template <int D>
SymTensor4<D> default_reference_stiffness(const StiffnessField<D>& c) {
  double lmin = std::numeric_limits<double>::infinity(), lmax = -lmin;
  double mmin = lmin, mmax = -lmin;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Lame l = lame_projection<D>(c[i]);
    lmin = std::min(lmin, l.lambda);
    lmax = std::max(lmax, l.lambda);
    mmin = std::min(mmin, l.mu);
    mmax = std::max(mmax, l.mu);
  }
  return isotropic_from_lame<D>(0.5 * (lmin + lmax), 0.5 * (mmin + mmax));
}

namespace detail {

template <int D>
void check_shapes(const StiffnessField<D>& c, const GreenTable<D>& green) {
  if (!same_pattern(c.lattice(), green.lattice()) || c.size() != green.size())
    throw ShapeMismatch("stiffness field and Green table live on different patterns");
}

/// (C(y) - C0) : (E_y + eps0) at every point.
template <int D>
SymField<D> polarisation(const StiffnessField<D>& c, const SymTensor4<D>& c0,
                         const SymField<D>& e, const SymTensor2<D>& eps0) {
  const SymTensor2<D, Complex> e0 = eps0.template cast<Complex>();
  SymField<D> tau(e.lattice_ptr());
  for (std::size_t i = 0; i < e.size(); ++i)
    tau.set(i, (c[i] - c0).template cast<Complex>() * (e.at(i) + e0));
  return tau;
}

template <int D>
SymField<D> total_strain(const SymField<D>& e, const SymTensor2<D>& eps0) {
  SymField<D> t = e;
  t.add_constant(eps0.template cast<Complex>());
  return t;
}

}  // namespace detail

/// Mean stress (1/m) sum_y C(y) : (E_y + eps0), real part.
template <int D>
SymTensor2<D> effective_action(const StiffnessField<D>& c, const SymField<D>& e,
                               const SymTensor2<D>& eps0) {
  if (!same_pattern(c.lattice(), e.lattice()) || c.size() != e.size())
    throw ShapeMismatch("stiffness and strain fields live on different patterns");
  // Shifted sum: deviations from the first point's stress, so a uniform
  // stress comes out bit-exact.
  const SymTensor2<D> base = c[0] * (e.at(0).real() + eps0);
  SymTensor2<D> acc = SymTensor2<D>::Zero();
  for (std::size_t i = 1; i < e.size(); ++i)
    acc += c[i] * (e.at(i).real() + eps0) - base;
  return base + acc / double(e.size());
}

/// sum_y C(y) : E_y without mean or macroscopic strain, real part.
template <int D>
SymTensor2<D> fluctuation_action(const StiffnessField<D>& c, const SymField<D>& e) {
  if (!same_pattern(c.lattice(), e.lattice()) || c.size() != e.size())
    throw ShapeMismatch("stiffness and strain fields live on different patterns");
  SymTensor2<D> acc = SymTensor2<D>::Zero();
  for (std::size_t i = 0; i < e.size(); ++i) acc += c[i] * e.at(i).real();
  return acc;
}

/// || E + Gamma (C - C0) : (E + eps0) ||.
template <int D>
double residual_ls(const SymField<D>& e, const StiffnessField<D>& c, const SymTensor4<D>& c0,
                   const SymTensor2<D>& eps0, const GreenTable<D>& green) {
  detail::check_shapes(c, green);
  SymField<D> r = apply_green(green, detail::polarisation(c, c0, e, eps0));
  r += e;
  return r.norm();
}

/// || C0 Gamma C : (E + eps0) ||.
template <int D>
double residual_variational(const SymField<D>& e, const StiffnessField<D>& c,
                            const SymTensor4<D>& c0, const SymTensor2<D>& eps0,
                            const GreenTable<D>& green) {
  detail::check_shapes(c, green);
  const SymField<D> stress = c.apply(detail::total_strain(e, eps0));
  return apply_constant(c0, apply_green(green, stress)).norm();
}

/**
 * Basic scheme: E <- -Gamma (C - C0) : (E + eps0), starting from E = 0,
 * until ||E_new - E|| <= tol ||E_new + eps0||. The reference stiffness of
 * the Green table is the C0 used in the polarisation.
 */
template <int D>
SolveReport<D> basic_scheme(const StiffnessField<D>& c, const SymTensor2<D>& eps0,
                            const GreenTable<D>& green, const SolverOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::check_shapes(c, green);
  if (!(opts.tolerance > 0.0)) throw InvalidSpec("tolerance must be positive");
  const SymTensor4<D>& c0 = green.reference();
  if (!ellipticity_bounds<D>(c0).elliptic()) throw NonElliptic("reference stiffness is not elliptic");
  if (!c.bounds().elliptic()) throw NonElliptic("stiffness field is not elliptic at every point");

  SolveReport<D> report{SymField<D>(c.lattice_ptr()), 0, {}, SymTensor2<D>::Zero(), true, 0.0, 0.0};
  SymField<D>& e = report.strain;
  bool converged = false;
  while (report.iterations < opts.max_iterations) {
    SymField<D> next = apply_green(green, detail::polarisation(c, c0, e, eps0));
    next *= -1.0;
    const double change = (next - e).norm();
    const double scale = detail::total_strain(next, eps0).norm();
    const double err = change == 0.0 ? 0.0 : change / scale;
    e = std::move(next);
    ++report.iterations;
    const auto& hist = report.residual_history;
    if (hist.size() >= 2 && err > hist.back() && err > 1e-14) report.monotone = false;
    report.residual_history.push_back(err);
    if (err <= opts.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NotConverged(report.iterations,
                       report.residual_history.empty() ? 0.0 : report.residual_history.back());
  report.effective_action = effective_action(c, e, eps0);
  report.imaginary_norm = e.imaginary_norm();
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

template <int D>
struct EffectiveTensor {
  SymTensor4<D> tensor;
  /// ||A - A^T|| / ||A|| of the raw column assembly.
  double asymmetry = 0.0;
  std::vector<int> iterations;
};

/// One solve per Mandel unit strain; column b is the resulting mean stress.
template <int D>
EffectiveTensor<D> effective_tensor(const StiffnessField<D>& c, const GreenTable<D>& green,
                                    const SolverOptions& opts = {}) {
  constexpr int ns = sym_size<D>;
  SymTensor4<D> raw;
  EffectiveTensor<D> out;
  for (int b = 0; b < ns; ++b) {
    const SymTensor2<D> eps0 = SymTensor2<D>::Unit(b);
    const auto rep = basic_scheme(c, eps0, green, opts);
    raw.col(b) = rep.effective_action;
    out.iterations.push_back(rep.iterations);
  }
  const double n = raw.norm();
  out.asymmetry = n > 0.0 ? (raw - raw.transpose()).norm() / n : 0.0;
  out.tensor = 0.5 * (raw + raw.transpose());
  return out;
}

}  // namespace lsts

#endif  // LSTS_SOLVER_HPP
