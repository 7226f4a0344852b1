#ifndef LSTS_RUN_HPP
#define LSTS_RUN_HPP

#include "lsts/bench.hpp"
#include "lsts/errors.hpp"
#include "lsts/green.hpp"
#include "lsts/io.hpp"
#include "lsts/kernels.hpp"
#include "lsts/manifest.hpp"
#include "lsts/solver.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

namespace lsts {

struct RunOptions {
  std::filesystem::path output_dir;  // empty: use output.directory from the manifest
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

/// Scalar summary of one solve, independent of the dimension.
struct RunOutcome {
  std::string label;
  int iterations = 0;
  bool monotone = true;
  std::vector<double> effective_action;
  std::vector<double> reference_action;
  double e_eff = std::numeric_limits<double>::quiet_NaN();
  double e_l2 = std::numeric_limits<double>::quiet_NaN();
  double residual_ls = 0.0;
  double residual_variational = 0.0;
  double imaginary_norm = 0.0;
  double truncation_tail = 0.0;
};

namespace detail {

template <int D>
IntMatrix<D> to_int_matrix(const std::vector<std::vector<Integer>>& rows) {
  IntMatrix<D> m;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

template <int D>
SymTensor4<D> material_tensor(const IsotropicMaterial& m) {
  return isotropic_stiffness<D>(m.young, m.poisson);
}

template <int D>
std::vector<double> to_vector(const SymTensor2<D>& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace detail

template <int D>
KernelSpec<D> make_kernel(const Manifest& m) {
  if (m.kernel_type == "dirichlet") return KernelSpec<D>::dirichlet();
  if (m.kernel_type == "dlvp") {
    RealVector<D> a;
    for (int i = 0; i < D; ++i) a(i) = m.alpha[static_cast<std::size_t>(i)];
    return KernelSpec<D>::dlvp(a);
  }
  typename KernelSpec<D>::Directions xi(D, static_cast<Eigen::Index>(m.directions.size()));
  for (std::size_t c = 0; c < m.directions.size(); ++c)
    for (int i = 0; i < D; ++i) xi(i, static_cast<Eigen::Index>(c)) = m.directions[c][static_cast<std::size_t>(i)];
  return KernelSpec<D>::box_spline(xi, m.radius);
}

template <int D>
LaminateGeometry<D> laminate_geometry(const Manifest& m) {
  LaminateGeometry<D> g;
  g.normal_axis = m.normal - 1;
  g.fraction = m.fraction;
  g.phase1 = detail::material_tensor<D>(m.phase1);
  g.phase2 = detail::material_tensor<D>(m.phase2);
  g.validate();
  return g;
}

inline HashinGeometry hashin_geometry(const Manifest& m) {
  HashinGeometry g;
  g.c1 = m.c1;
  g.c2 = m.c2;
  g.rho = m.rho;
  g.rotation_degrees = m.rotation;
  g.core = detail::material_tensor<2>(m.core);
  g.coating = detail::material_tensor<2>(m.coating);
  if (!m.matrix_stiffness.empty()) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g.matrix(i, j) = m.matrix_stiffness[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (!ellipticity_bounds<2>(g.matrix).elliptic()) throw InvalidMaterial("geometry.matrix_stiffness is not elliptic");
  } else {
    g.matrix = detail::material_tensor<2>(m.matrix);
  }
  g.validate();
  return g;
}

template <int D>
Rasterization<D> make_geometry(const Manifest& m, std::shared_ptr<const Lattice<D>> lattice) {
  if (m.geometry_type == "homogeneous") {
    const auto c = detail::material_tensor<D>(m.material);
    return rasterize<D>(lattice, [](const Lattice<D>&, std::size_t) { return 0; }, {c});
  }
  if (m.geometry_type == "laminate") return rasterize_laminate<D>(lattice, laminate_geometry<D>(m));
  if constexpr (D == 2) {
    return rasterize_hashin(lattice, hashin_geometry(m));
  } else {
    throw ValidationError("geometry.type = hashin needs a 2x2 pattern");
  }
}

template <int D>
SymTensor4<D> make_reference_stiffness(const Manifest& m, const StiffnessField<D>& c) {
  if (m.reference_lame) return isotropic_from_lame<D>((*m.reference_lame)[0], (*m.reference_lame)[1]);
  return default_reference_stiffness<D>(c);
}

/// Reference solution used by the error metrics.
template <int D>
struct ReferenceSolution {
  std::optional<SymField<D>> strain;  // fluctuation on the run's pattern
  SymTensor2<D> action = SymTensor2<D>::Zero();
  std::string kind = "none";
};

/// Fine Dirichlet solve if [reference] is given; otherwise the exact
/// solution for homogeneous and laminate geometries; none for Hashin.
template <int D>
ReferenceSolution<D> make_reference_solution(const Manifest& m,
                                             const std::shared_ptr<const Lattice<D>>& lattice,
                                             const Rasterization<D>& ras, const SymTensor2<D>& eps0) {
  ReferenceSolution<D> ref;
  if (!m.reference_pattern.empty()) {
    auto fine = Lattice<D>::make(detail::to_int_matrix<D>(m.reference_pattern));
    const auto fras = make_geometry<D>(m, fine);
    const auto c0 = make_reference_stiffness<D>(m, fras.stiffness);
    const auto table = orthonormalize(CoefficientTable<D>(fine, KernelSpec<D>::dirichlet()));
    const auto green = periodised_green_table<D>(c0, table);
    const auto rep = basic_scheme<D>(fras.stiffness, eps0, green, {m.tolerance, m.max_iter});
    ref.strain = restrict_field<D>(rep.strain, lattice);
    ref.action = rep.effective_action;
    ref.kind = "dirichlet " + to_string(fine->smith().divisors) + " (m = " + std::to_string(fine->size()) + ")";
    return ref;
  }
  if (m.geometry_type == "homogeneous") {
    ref.strain = SymField<D>(lattice);
    ref.action = ras.stiffness[0] * eps0;
    ref.kind = "exact (homogeneous)";
  } else if (m.geometry_type == "laminate") {
    const auto g = laminate_geometry<D>(m);
    const auto [e1, e2] = laminate_phase_strains<D>(g, eps0);
    SymField<D> f(lattice);
    for (std::size_t i = 0; i < lattice->size(); ++i)
      f.set(i, SymTensor2<D>((ras.phases[i] == 0 ? e1 : e2) - eps0).template cast<Complex>());
    ref.strain = std::move(f);
    ref.action = laminate_effective_oracle<D>(g) * eps0;
    ref.kind = "exact (laminate)";
  }
  return ref;
}

/// Everything one solve needs, built once per manifest.
template <int D>
struct Problem {
  std::shared_ptr<const Lattice<D>> lattice;
  Rasterization<D> raster;
  SymTensor4<D> reference_stiffness;
  SymTensor2<D> eps0;
  ReferenceSolution<D> reference;
  SolverOptions solver;
  EffectiveMetric metric;
};

template <int D>
Problem<D> make_problem(const Manifest& m) {
  auto lattice = Lattice<D>::make(detail::to_int_matrix<D>(m.pattern));
  auto raster = make_geometry<D>(m, lattice);
  const auto c0 = make_reference_stiffness<D>(m, raster.stiffness);
  const auto eps0 = mandel_from_components<D>(m.strain);
  auto ref = make_reference_solution<D>(m, lattice, raster, eps0);
  return Problem<D>{lattice, std::move(raster), c0, eps0, std::move(ref),
                    SolverOptions{m.tolerance, m.max_iter},
                    m.metric == "literal" ? EffectiveMetric::literal : EffectiveMetric::mean_stress};
}

template <int D>
struct SolveResult {
  SolveReport<D> report;
  RunOutcome outcome;
  std::optional<ErrorMetrics> metrics;
  std::shared_ptr<const GreenTable<D>> green;
};

template <int D>
SolveResult<D> solve_problem(const Problem<D>& p, const KernelSpec<D>& spec) {
  const auto table = orthonormalize(CoefficientTable<D>(p.lattice, spec));
  auto green = std::make_shared<const GreenTable<D>>(periodised_green_table<D>(p.reference_stiffness, table));
  auto report = basic_scheme<D>(p.raster.stiffness, p.eps0, *green, p.solver);
  RunOutcome o;
  o.label = spec.describe();
  o.iterations = report.iterations;
  o.monotone = report.monotone;
  o.effective_action = detail::to_vector<D>(report.effective_action);
  o.residual_ls = residual_ls<D>(report.strain, p.raster.stiffness, p.reference_stiffness, p.eps0, *green);
  o.residual_variational =
      residual_variational<D>(report.strain, p.raster.stiffness, p.reference_stiffness, p.eps0, *green);
  o.imaginary_norm = report.imaginary_norm;
  o.truncation_tail = table.truncation_tail();
  std::optional<ErrorMetrics> metrics;
  if (p.reference.strain) {
    metrics = error_metrics<D>(report.strain, *p.reference.strain, p.raster.stiffness, p.eps0,
                               p.reference.action, p.metric);
    o.reference_action = detail::to_vector<D>(p.reference.action);
    o.e_eff = metrics->e_eff;
    o.e_l2 = metrics->e_l2;
  }
  return {std::move(report), std::move(o), std::move(metrics), std::move(green)};
}

namespace detail {

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
  return s;
}

inline std::filesystem::path output_dir(const Manifest& m, const RunOptions& opts) {
  return opts.output_dir.empty() ? std::filesystem::path(m.output_dir) : opts.output_dir;
}

inline std::vector<std::string> mandel_labels(int d) {
  if (d == 2) return {"11", "22", "12"};
  return {"11", "22", "33", "23", "13", "12"};
}

template <int D>
void write_phase_map(const Problem<D>& p, const Manifest& m, const std::filesystem::path& dir) {
  std::vector<std::string> header;
  for (int i = 0; i < D; ++i) header.push_back("y" + std::to_string(i + 1));
  header.push_back("phase");
  CsvWriter csv(header);
  for (std::size_t i = 0; i < p.lattice->size(); ++i) {
    std::vector<std::string> row;
    const auto y = p.lattice->pattern().point(i);
    for (int k = 0; k < D; ++k) row.push_back(format_double(y(k)));
    row.push_back(std::to_string(p.raster.phases[i]));
    csv.row(row);
  }
  csv.save(dir / "phases.csv");
  if constexpr (D == 2) {
    int w = m.width, h = m.height;
    if (w <= 0) std::tie(w, h) = balanced_raster(p.lattice->size());
    const int top = std::max(1, *std::max_element(p.raster.phases.begin(), p.raster.phases.end()));
    const NearestPatternPoint nearest(*p.lattice);
    std::vector<std::uint8_t> px;
    for (int row = 0; row < h; ++row)
      for (int col = 0; col < w; ++col)
        px.push_back(static_cast<std::uint8_t>(255 * p.raster.phases[nearest(raster_position(col, row, w, h))] / top));
    write_pgm(dir / "phases.pgm", w, h, px);
  }
}

}  // namespace detail

/// solve: one run, summary and artifacts in the output directory.
template <int D>
RunOutcome run_solve(const Manifest& m, const RunOptions& opts, std::ostream& log) {
  const Problem<D> p = make_problem<D>(m);
  const auto result = solve_problem<D>(p, make_kernel<D>(m));
  const auto& o = result.outcome;
  const auto dir = detail::output_dir(m, opts);
  std::filesystem::create_directories(dir);

  std::ostringstream s;
  s << "manifest: " << m.source << "\n"
    << "pattern size: " << p.lattice->size() << "\n"
    << "elementary divisors: " << to_string(p.lattice->smith().divisors) << "\n"
    << "kernel: " << o.label << "\n"
    << "geometry: " << m.geometry_type << "\n"
    << "macroscopic strain (Mandel): " << detail::join(detail::to_vector<D>(p.eps0)) << "\n"
    << "iterations: " << o.iterations << "\n"
    << "final cauchy error: " << format_double(result.report.residual_history.back()) << "\n"
    << "monotone: " << (o.monotone ? "yes" : "no") << "\n"
    << "residual_ls: " << format_double(o.residual_ls) << "\n"
    << "residual_variational: " << format_double(o.residual_variational) << "\n"
    << "imaginary part norm: " << format_double(o.imaginary_norm) << "\n"
    << "truncation tail: " << format_double(o.truncation_tail) << "\n"
    << "effective action (Mandel): " << detail::join(o.effective_action) << "\n"
    << "reference: " << p.reference.kind << "\n";
  if (p.reference.strain)
    s << "reference action (Mandel): " << detail::join(o.reference_action) << "\n"
      << "e_eff (" << m.metric << "): " << format_double(o.e_eff) << "\n"
      << "e_l2: " << format_double(o.e_l2) << "\n";
  write_atomic(dir / "summary.txt", s.str());
  log << s.str();
  if (!o.monotone) log << "warning: Cauchy error increased during the iteration\n";

  CsvWriter hist({"iteration", "cauchy_error"});
  for (std::size_t i = 0; i < result.report.residual_history.size(); ++i)
    hist.row({std::to_string(i + 1), format_double(result.report.residual_history[i])});
  hist.save(dir / "residuals.csv");

  if (m.strain_csv) {
    std::vector<std::string> header;
    for (int i = 0; i < D; ++i) header.push_back("y" + std::to_string(i + 1));
    for (const auto& l : detail::mandel_labels(D)) header.push_back("eps" + l);
    CsvWriter csv(header);
    for (std::size_t i = 0; i < p.lattice->size(); ++i) {
      std::vector<double> row;
      const auto y = p.lattice->pattern().point(i);
      for (int k = 0; k < D; ++k) row.push_back(y(k));
      const SymTensor2<D> e = result.report.strain.at(i).real() + p.eps0;
      for (int a = 0; a < sym_size<D>; ++a) row.push_back(e(a));
      csv.row(row);
    }
    csv.save(dir / "strain.csv");
  }

  if (m.phase_map) detail::write_phase_map<D>(p, m, dir);
  if (m.green_table) dump_green_table<D>(*result.green, dir / "green.bin");

  if constexpr (D == 2) {
    if (m.heatmap == "e11") {
      std::vector<double> v(p.lattice->size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = result.report.strain.at(i)(0).real() + p.eps0(0);
      emit_heatmap(*p.lattice, v, m.colormap, dir / "e11.ppm", m.width, m.height);
    } else if (m.heatmap == "elog") {
      if (!result.metrics) throw ValidationError("output.heatmap = elog needs a reference solution");
      emit_heatmap(*p.lattice, result.metrics->e_log, m.colormap, dir / "elog.ppm", m.width, m.height);
    }
  }
  return o;
}

/// sweep: DlVP solves over the (alpha1, alpha2) grid; one CSV row per pair
/// in grid order, whatever the number of worker threads.
template <int D>
std::vector<RunOutcome> run_sweep(const Manifest& m, const RunOptions& opts, std::ostream& log) {
  const auto grid = m.sweep_grid();
  if (grid.empty()) throw ValidationError("missing required field sweep.alpha1 / sweep.alpha2");
  const Problem<D> p = make_problem<D>(m);
  std::vector<RunOutcome> out(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        RealVector<D> a = RealVector<D>::Zero();
        a(0) = grid[i][0];
        a(1) = grid[i][1];
        out[i] = solve_problem<D>(p, KernelSpec<D>::dlvp(a)).outcome;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(grid.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<std::string> header{"alpha1", "alpha2", "iterations", "monotone", "e_eff", "e_l2"};
  for (const auto& l : detail::mandel_labels(D)) header.push_back("sigma" + l);
  CsvWriter csv(header);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> row{format_double(grid[i][0]), format_double(grid[i][1]),
                                 std::to_string(out[i].iterations), out[i].monotone ? "1" : "0",
                                 format_double(out[i].e_eff), format_double(out[i].e_l2)};
    for (double v : out[i].effective_action) row.push_back(format_double(v));
    csv.row(row);
  }
  const auto dir = detail::output_dir(m, opts);
  csv.save(dir / "sweep.csv");
  log << "sweep: " << grid.size() << " runs, reference " << p.reference.kind << ", written to "
      << (dir / "sweep.csv").string() << "\n";
  return out;
}

/// effective: full effective stiffness, one solve per Mandel unit strain.
template <int D>
EffectiveTensor<D> run_effective(const Manifest& m, const RunOptions& opts, std::ostream& log) {
  auto lattice = Lattice<D>::make(detail::to_int_matrix<D>(m.pattern));
  const auto raster = make_geometry<D>(m, lattice);
  const auto c0 = make_reference_stiffness<D>(m, raster.stiffness);
  const auto table = orthonormalize(CoefficientTable<D>(lattice, make_kernel<D>(m)));
  const auto green = periodised_green_table<D>(c0, table);
  const auto eff = effective_tensor<D>(raster.stiffness, green, {m.tolerance, m.max_iter});

  const auto labels = detail::mandel_labels(D);
  auto tensor_csv = [&](const SymTensor4<D>& t) {
    std::vector<std::string> header{"row"};
    for (const auto& l : labels) header.push_back("C" + l);
    CsvWriter csv(header);
    for (int i = 0; i < sym_size<D>; ++i) {
      std::vector<std::string> row{labels[static_cast<std::size_t>(i)]};
      for (int j = 0; j < sym_size<D>; ++j) row.push_back(format_double(t(i, j)));
      csv.row(row);
    }
    return csv;
  };
  const auto dir = detail::output_dir(m, opts);
  tensor_csv(eff.tensor).save(dir / "effective.csv");

  std::ostringstream s;
  s << "manifest: " << m.source << "\n"
    << "pattern size: " << lattice->size() << "\n"
    << "kernel: " << table.spec().describe() << "\n"
    << "geometry: " << m.geometry_type << "\n"
    << "asymmetry: " << format_double(eff.asymmetry) << "\n"
    << "iterations:";
  for (int it : eff.iterations) s << ' ' << it;
  s << "\n";
  if (m.geometry_type == "laminate") {
    const auto oracle = laminate_effective_oracle<D>(laminate_geometry<D>(m));
    tensor_csv(oracle).save(dir / "effective_oracle.csv");
    double worst = 0.0;
    for (int i = 0; i < sym_size<D>; ++i)
      for (int j = 0; j < sym_size<D>; ++j)
        if (oracle(i, j) != 0.0)
          worst = std::max(worst, std::abs(eff.tensor(i, j) - oracle(i, j)) / std::abs(oracle(i, j)));
    s << "max relative deviation from laminate oracle: " << format_double(worst) << "\n";
  }
  s << "effective tensor (Mandel):\n" << eff.tensor << "\n";
  write_atomic(dir / "effective.txt", s.str());
  log << s.str();
  return eff;
}

/// Calls fn.template operator()<D>() with D the manifest's dimension.
template <typename Fn>
decltype(auto) with_dimension(const Manifest& m, Fn&& fn) {
  switch (m.dimension()) {
    case 2: return fn.template operator()<2>();
    case 3: return fn.template operator()<3>();
    default: throw ValidationError("pattern.matrix must be 2x2 or 3x3");
  }
}

}  // namespace lsts

#endif  // LSTS_RUN_HPP
