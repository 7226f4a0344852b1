#ifndef LSTS_KERNELS_HPP
#define LSTS_KERNELS_HPP

#include "lsts/errors.hpp"
#include "lsts/lattice.hpp"
#include "lsts/pattern_fft.hpp"
#include "lsts/types.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace lsts {

enum class KernelKind { dirichlet, dlvp, box_spline };

inline std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::dirichlet: return "dirichlet";
    case KernelKind::dlvp: return "dlvp";
    case KernelKind::box_spline: return "boxspline";
  }
  return "?";
}

/**
 * Generator of a space of translates.
 *
 * - dirichlet: flat spectrum on the generating set.
 * - dlvp: de la Vallee Poussin mean with tensor-product trapezoid window of
 *   slopes alpha (alpha_i = 0 gives the modified Dirichlet kernel).
 * - box_spline: periodised pattern Box spline with direction matrix Xi, whose
 *   bracket sums are truncated to shifts z in [-radius, radius]^d.
 */
template <int D>
struct KernelSpec {
  using Directions = Eigen::Matrix<double, D, Eigen::Dynamic>;

  KernelKind kind = KernelKind::dirichlet;
  RealVector<D> alpha = RealVector<D>::Zero();
  Directions directions;
  int radius = 16;

  static KernelSpec dirichlet() { return {}; }

  static KernelSpec dlvp(const RealVector<D>& alpha) {
    KernelSpec s;
    s.kind = KernelKind::dlvp;
    s.alpha = alpha;
    s.validate();
    return s;
  }

  static KernelSpec box_spline(const Directions& xi, int radius = 16) {
    KernelSpec s;
    s.kind = KernelKind::box_spline;
    s.directions = xi;
    s.radius = radius;
    s.validate();
    return s;
  }

  /// p copies of (1,0), q of (0,1) and r of (1,1).
  static KernelSpec three_direction(int p, int q, int r, int radius = 16)
    requires(D == 2)
  {
    if (p < 0 || q < 0 || r < 0) throw InvalidSpec("direction multiplicities must be >= 0");
    Directions xi(2, p + q + r);
    int c = 0;
    for (int i = 0; i < p; ++i) xi.col(c++) << 1, 0;
    for (int i = 0; i < q; ++i) xi.col(c++) << 0, 1;
    for (int i = 0; i < r; ++i) xi.col(c++) << 1, 1;
    return box_spline(xi, radius);
  }

  void validate() const {
    switch (kind) {
      case KernelKind::dirichlet: return;
      case KernelKind::dlvp:
        for (int i = 0; i < D; ++i)
          if (!(alpha(i) >= 0.0 && alpha(i) <= 0.5))
            throw InvalidSpec("de la Vallee Poussin slopes must lie in [0, 1/2], got " +
                              lsts::to_string(alpha));
        return;
      case KernelKind::box_spline: {
        if (radius < 0) throw InvalidSpec("Box spline truncation radius must be >= 0");
        if (directions.cols() < D || !directions.allFinite())
          throw InvalidSpec("Box spline needs at least d finite direction vectors");
        Eigen::FullPivLU<Eigen::MatrixXd> lu(directions);
        if (lu.rank() < D) throw InvalidSpec("Box spline directions do not span R^d");
        if constexpr (D == 2) {
          int p = 0, q = 0, r = 0;
          bool three_dir = true;
          for (Eigen::Index c = 0; c < directions.cols(); ++c) {
            const auto v = directions.col(c);
            if (v(0) == 1 && v(1) == 0) ++p;
            else if (v(0) == 0 && v(1) == 1) ++q;
            else if (v(0) == 1 && v(1) == 1) ++r;
            else three_dir = false;
          }
          if (three_dir && (p > 0) + (q > 0) + (r > 0) < 2)
            throw InvalidSpec("three-direction Box spline needs at least two of p, q, r > 0");
        }
        return;
      }
    }
  }

  std::string describe() const {
    std::ostringstream os;
    os << to_string(kind);
    if (kind == KernelKind::dlvp) os << " alpha=" << lsts::to_string(alpha);
    if (kind == KernelKind::box_spline) os << " s=" << directions.cols() << " R=" << radius;
    return os.str();
  }
};

namespace detail {

inline double sinc_pi(double t) {
  if (t == 0.0) return 1.0;
  const double x = std::numbers::pi * t;
  return std::sin(x) / x;
}

/// One trapezoid factor at t = r / m, exact at the cube boundary.
inline double trapezoid(double alpha, Integer r, Integer m) {
  const Integer twice = 2 * (r < 0 ? -r : r);
  if (alpha == 0.0) return twice < m ? 1.0 : (twice == m ? 0.5 : 0.0);
  const double t = std::abs(double(r) / double(m));
  return std::clamp((0.5 * (1.0 + alpha) - t) / alpha, 0.0, 1.0);
}

inline double trapezoid(double alpha, double t) {
  t = std::abs(t);
  if (alpha == 0.0) return t < 0.5 ? 1.0 : (t == 0.5 ? 0.5 : 0.0);
  return std::clamp((0.5 * (1.0 + alpha) - t) / alpha, 0.0, 1.0);
}

/// Distinct direction vectors with multiplicities, so repeated columns cost one sine.
template <int D>
struct GroupedDirections {
  std::vector<RealVector<D>> dirs;
  std::vector<int> power;

  explicit GroupedDirections(const typename KernelSpec<D>::Directions& xi) {
    for (Eigen::Index c = 0; c < xi.cols(); ++c) {
      const RealVector<D> v = xi.col(c);
      auto it = std::find(dirs.begin(), dirs.end(), v);
      if (it == dirs.end()) {
        dirs.push_back(v);
        power.push_back(1);
      } else {
        ++power[static_cast<std::size_t>(it - dirs.begin())];
      }
    }
  }

  double eval(const RealVector<D>& t) const {
    double v = 1.0;
    for (std::size_t i = 0; i < dirs.size() && v != 0.0; ++i) {
      const double s = sinc_pi(dirs[i].dot(t));
      double p = 1.0;
      for (int e = 0; e < power[i]; ++e) p *= s;
      v *= p;
    }
    return v;
  }
};

}  // namespace detail

/// Admissible window g evaluated at real t (Fourier side of the generator).
/// For Box splines this is the product of sinc(pi xi.t).
template <int D>
double window(const KernelSpec<D>& spec, const RealVector<D>& t) {
  switch (spec.kind) {
    case KernelKind::dirichlet:
      for (int i = 0; i < D; ++i)
        if (!(t(i) >= -0.5 && t(i) < 0.5)) return 0.0;
      return 1.0;
    case KernelKind::dlvp: {
      double v = 1.0;
      for (int i = 0; i < D; ++i) v *= detail::trapezoid(spec.alpha(i), t(i));
      return v;
    }
    case KernelKind::box_spline: {
      double v = 1.0;
      for (Eigen::Index c = 0; c < spec.directions.cols(); ++c)
        v *= detail::sinc_pi(spec.directions.col(c).dot(t));
      return v;
    }
  }
  return 0.0;
}

/// Window at t = r / m with exact boundary decisions for Dirichlet and DlVP.
template <int D>
double window_exact(const KernelSpec<D>& spec, const IntVector<D>& r, Integer m) {
  switch (spec.kind) {
    case KernelKind::dirichlet:
      for (int i = 0; i < D; ++i)
        if (2 * r(i) < -m || 2 * r(i) >= m) return 0.0;
      return 1.0;
    case KernelKind::dlvp: {
      double v = 1.0;
      for (int i = 0; i < D; ++i) v *= detail::trapezoid(spec.alpha(i), r(i), m);
      return v;
    }
    case KernelKind::box_spline:
      return window<D>(spec, RealVector<D>(r.template cast<double>() / double(m)));
  }
  return 0.0;
}

/// Unnormalised Fourier coefficient c_k(f) of the generator.
template <int D>
double coeff(const KernelSpec<D>& spec, const PatternMatrix<D>& m, const IntVector<D>& k) {
  const double w = window_exact<D>(spec, m.inverse_transpose_times(k), m.size());
  return spec.kind == KernelKind::box_spline ? w : w / std::sqrt(double(m.size()));
}

/**
 * Fourier coefficients of a generator grouped by frequency class.
 *
 * Coefficients are produced on demand: each class h stores only a scale
 * factor and its bracket sums, and for_each_term() regenerates the retained
 * terms k = h + M^T z. This keeps truncated Box-spline tables small.
 */
template <int D>
class CoefficientTable {
 public:
  CoefficientTable(std::shared_ptr<const Lattice<D>> lattice, const KernelSpec<D>& spec)
      : lattice_(std::move(lattice)), spec_(spec) {
    spec_.validate();
    if (spec_.kind == KernelKind::box_spline) grouped_ = detail::GroupedDirections<D>(spec_.directions);
    build_shifts();
    const std::size_t m = lattice_->size();
    scale_.assign(m, 1.0);
    raw_bracket_.assign(m, 0.0);
    raw_signed_.assign(m, 0.0);
    for (std::size_t h = 0; h < m; ++h) {
      double sq = 0.0, sum = 0.0;
      each_raw(h, [&](const IntVector<D>&, double c) {
        sq += c * c;
        sum += c;
      });
      raw_bracket_[h] = sq;
      raw_signed_[h] = sum;
    }
  }

  const Lattice<D>& lattice() const { return *lattice_; }
  const std::shared_ptr<const Lattice<D>>& lattice_ptr() const { return lattice_; }
  const KernelSpec<D>& spec() const { return spec_; }
  std::size_t size() const { return scale_.size(); }
  std::size_t shifts_per_class() const { return shifts_.size(); }

  double scale(std::size_t cls) const { return scale_[cls]; }
  /// [|c|^2]_h.
  double bracket(std::size_t cls) const { return scale_[cls] * scale_[cls] * raw_bracket_[cls]; }
  /// [c]_h, the signed bracket sum.
  double signed_bracket(std::size_t cls) const { return scale_[cls] * raw_signed_[cls]; }

  /// Multiply every coefficient of class cls by factor.
  void scale_class(std::size_t cls, double factor) { scale_[cls] *= factor; }

  /// Calls fn(k, c_k) for every retained nonzero term of class cls.
  template <typename Fn>
  void for_each_term(std::size_t cls, Fn&& fn) const {
    const double s = scale_[cls];
    each_raw(cls, [&](const IntVector<D>& k, double c) { fn(k, s * c); });
  }

  /// c_k for an arbitrary integer frequency (zero outside the retained shifts).
  double coefficient(const IntVector<D>& k) const {
    const auto& mat = lattice_->matrix();
    const IntVector<D> h = lattice_->reduce(k);
    const IntVector<D> zt = k - h;  // = M^T z
    const IntVector<D> z = mat.inverse_transpose_times(zt) / mat.size();
    if (spec_.kind == KernelKind::box_spline && z.cwiseAbs().maxCoeff() > spec_.radius) return 0.0;
    return scale_[lattice_->frequencies().index_of(h)] * coeff<D>(spec_, mat, k);
  }

  /// max_h |m [|c|^2]_h - 1|.
  double orthonormality_defect() const {
    const double m = double(size());
    double worst = 0.0;
    for (std::size_t h = 0; h < size(); ++h) worst = std::max(worst, std::abs(m * bracket(h) - 1.0));
    return worst;
  }

  /// Largest share of a class's |c|^2 mass carried by the outermost shell of
  /// retained shifts; zero for frequency-compact kernels.
  double truncation_tail() const {
    if (spec_.kind != KernelKind::box_spline || spec_.radius == 0) return 0.0;
    const auto& mat = lattice_->matrix();
    double worst = 0.0;
    for (std::size_t h = 0; h < size(); ++h) {
      if (raw_bracket_[h] == 0.0) continue;
      double shell = 0.0;
      each_raw(h, [&](const IntVector<D>& k, double c) {
        const IntVector<D> z = mat.inverse_transpose_times(IntVector<D>(k - lattice_->frequencies()[h])) / mat.size();
        if (z.cwiseAbs().maxCoeff() == spec_.radius) shell += c * c;
      });
      worst = std::max(worst, shell / raw_bracket_[h]);
    }
    return worst;
  }

 private:
  void build_shifts() {
    const int r = spec_.kind == KernelKind::box_spline ? spec_.radius : 1;
    const int w = 2 * r + 1;
    int total = 1;
    for (int i = 0; i < D; ++i) total *= w;
    shifts_.reserve(static_cast<std::size_t>(total));
    for (int idx = 0; idx < total; ++idx) {
      IntVector<D> z;
      int rest = idx;
      for (int i = D - 1; i >= 0; --i) {
        z(i) = rest % w - r;
        rest /= w;
      }
      shifts_.push_back(z);
    }
  }

  template <typename Fn>
  void each_raw(std::size_t cls, Fn&& fn) const {
    const auto& mat = lattice_->matrix();
    const Integer m = mat.size();
    const IntVector<D>& h = lattice_->frequencies()[cls];
    const IntVector<D> rh = mat.inverse_transpose_times(h);
    const double inv_sqrt_m = 1.0 / std::sqrt(double(m));
    for (const auto& z : shifts_) {
      const IntVector<D> r = rh + m * z;
      double c;
      if (spec_.kind == KernelKind::box_spline)
        c = grouped_.eval(RealVector<D>(r.template cast<double>() / double(m)));
      else
        c = window_exact<D>(spec_, r, m) * inv_sqrt_m;
      if (c != 0.0) fn(IntVector<D>(h + mat.transpose() * z), c);
    }
  }

  std::shared_ptr<const Lattice<D>> lattice_;
  KernelSpec<D> spec_;
  detail::GroupedDirections<D> grouped_{typename KernelSpec<D>::Directions(D, 0)};
  std::vector<IntVector<D>> shifts_;
  std::vector<double> scale_;
  std::vector<double> raw_bracket_;
  std::vector<double> raw_signed_;
};

/// Sum over the class of h of weight(k) |c_k|^2.
template <int D, typename Weight>
double bracket_sum(const CoefficientTable<D>& table, const IntVector<D>& h, Weight&& weight) {
  if (!table.lattice().is_reduced(h))
    throw NotReduced("frequency " + to_string(h) + " is not a canonical class representative");
  double sum = 0.0;
  table.for_each_term(table.lattice().frequencies().index_of(h),
                      [&](const IntVector<D>& k, double c) { sum += weight(k) * c * c; });
  return sum;
}

template <int D>
double bracket_sum(const CoefficientTable<D>& table, const IntVector<D>& h) {
  return bracket_sum<D>(table, h, [](const IntVector<D>&) { return 1.0; });
}

/// Rescale every class so that m [|c|^2]_h = 1.
template <int D>
CoefficientTable<D> orthonormalize(const CoefficientTable<D>& table) {
  CoefficientTable<D> out = table;
  const double m = double(table.size());
  for (std::size_t h = 0; h < table.size(); ++h) {
    const double b = m * table.bracket(h);
    if (!(b > 1e-14))
      throw DegenerateClass(h, to_string(table.lattice().frequencies()[h]));
    out.scale_class(h, 1.0 / std::sqrt(b));
  }
  return out;
}

/// c^M_h = (1/m) sum_y f(2 pi y) e^{-2 pi i h.y}.
template <int D>
std::vector<Complex> discrete_coeffs(const Lattice<D>& lattice, std::span<const Complex> samples) {
  auto out = pattern_fft<D>(lattice, samples);
  const double s = 1.0 / std::sqrt(double(lattice.size()));
  for (auto& v : out) v *= s;
  return out;
}

/// a_h = target_h / [c(f)]_h, the expansion of the interpolant of a function
/// whose class sums are target.
template <int D>
std::vector<Complex> interpolant_coeffs(std::span<const Complex> target,
                                        const CoefficientTable<D>& table) {
  if (target.size() != table.size()) throw LengthMismatch(table.size(), target.size());
  std::vector<Complex> out(table.size());
  for (std::size_t h = 0; h < table.size(); ++h) {
    const double den = table.signed_bracket(h);
    if (std::abs(den) <= 1e-14)
      throw NoInterpolant(h, to_string(table.lattice().frequencies()[h]));
    out[h] = target[h] / den;
  }
  return out;
}

/// Expansion of the fundamental interpolant (target class sums 1/m).
template <int D>
std::vector<Complex> fundamental_interpolant_coeffs(const CoefficientTable<D>& table) {
  std::vector<Complex> target(table.size(), Complex(1.0 / double(table.size())));
  return interpolant_coeffs<D>(target, table);
}

/// Evaluates sum_h a_h sum_{k in class h} c_k e^{i k.x} at each point x.
/// An empty expansion means a_h = 1, i.e. the generator itself.
template <int D>
std::vector<Complex> synthesize_complex(const CoefficientTable<D>& table,
                                        std::span<const Complex> expansion,
                                        const std::vector<RealVector<D>>& points) {
  if (!expansion.empty() && expansion.size() != table.size())
    throw LengthMismatch(table.size(), expansion.size());
  std::vector<Complex> out(points.size(), Complex(0.0));
  for (std::size_t h = 0; h < table.size(); ++h) {
    const Complex a = expansion.empty() ? Complex(1.0) : expansion[h];
    if (a == Complex(0.0)) continue;
    table.for_each_term(h, [&](const IntVector<D>& k, double c) {
      const RealVector<D> kd = k.template cast<double>();
      for (std::size_t p = 0; p < points.size(); ++p) {
        const double phase = kd.dot(points[p]);
        out[p] += a * c * Complex(std::cos(phase), std::sin(phase));
      }
    });
  }
  return out;
}

template <int D>
std::vector<double> synthesize(const CoefficientTable<D>& table,
                               std::span<const Complex> expansion,
                               const std::vector<RealVector<D>>& points) {
  const auto z = synthesize_complex<D>(table, expansion, points);
  std::vector<double> out(z.size());
  std::transform(z.begin(), z.end(), out.begin(), [](Complex v) { return v.real(); });
  return out;
}

/// Centred cardinal B-spline of order n (n-fold convolution of the unit box).
inline double cardinal_bspline(int n, double x) {
  if (n <= 0) return 0.0;
  double sum = 0.0;
  double binom = 1.0;
  double fact = 1.0;
  for (int i = 2; i < n; ++i) fact *= i;
  for (int k = 0; k <= n; ++k) {
    const double u = x + 0.5 * n - k;
    if (u >= 0.0) sum += ((k % 2) ? -binom : binom) * std::pow(u, n - 1);
    binom = binom * (n - k) / (k + 1);
  }
  return std::max(0.0, sum / fact);
}

/// Space-domain value of the centred Box spline B_Xi at x. Only direction
/// sets made of coordinate axes are supported (tensor products of B-splines).
template <int D>
double box_spline_value(const KernelSpec<D>& spec, const RealVector<D>& x) {
  if (spec.kind != KernelKind::box_spline) throw InvalidSpec("not a Box spline kernel");
  std::array<int, D> order{};
  for (Eigen::Index c = 0; c < spec.directions.cols(); ++c) {
    int axis = -1;
    for (int i = 0; i < D; ++i) {
      const double v = spec.directions(i, c);
      if (v == 1.0 && axis < 0) axis = i;
      else if (v != 0.0) axis = -2;
    }
    if (axis < 0)
      throw InvalidSpec("space-domain Box spline evaluation needs unit axis directions");
    ++order[static_cast<std::size_t>(axis)];
  }
  double v = 1.0;
  for (int i = 0; i < D; ++i) v *= cardinal_bspline(order[static_cast<std::size_t>(i)], x(i));
  return v;
}

/// |sum_z g(x + z) - 1| for the generator's window (Dirichlet, DlVP) or the
/// space-domain Box spline (axis directions).
template <int D>
double partition_of_unity_defect(const KernelSpec<D>& spec, const RealVector<D>& x) {
  int reach = 2;
  if (spec.kind == KernelKind::box_spline)
    reach = static_cast<int>(spec.directions.cols()) / 2 + 2;
  const int w = 2 * reach + 1;
  int total = 1;
  for (int i = 0; i < D; ++i) total *= w;
  double sum = 0.0;
  for (int idx = 0; idx < total; ++idx) {
    RealVector<D> y = x;
    int rest = idx;
    for (int i = D - 1; i >= 0; --i) {
      y(i) += double(rest % w - reach);
      rest /= w;
    }
    sum += spec.kind == KernelKind::box_spline ? box_spline_value<D>(spec, y) : window<D>(spec, y);
  }
  return std::abs(sum - 1.0);
}

/// Frequency-side partition of unity of a Box spline: max over integer
/// z != 0 with |z|_inf <= reach of |B^(2 pi z)|, together with |B^(0) - 1|.
template <int D>
double box_spline_poisson_defect(const KernelSpec<D>& spec, int reach) {
  const int w = 2 * reach + 1;
  int total = 1;
  for (int i = 0; i < D; ++i) total *= w;
  double worst = 0.0;
  for (int idx = 0; idx < total; ++idx) {
    RealVector<D> z;
    int rest = idx;
    for (int i = D - 1; i >= 0; --i) {
      z(i) = double(rest % w - reach);
      rest /= w;
    }
    const double v = window<D>(spec, z);
    worst = std::max(worst, z.isZero() ? std::abs(v - 1.0) : std::abs(v));
  }
  return worst;
}

}  // namespace lsts

#endif  // LSTS_KERNELS_HPP
