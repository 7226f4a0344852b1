#include "lsts/lsts.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lsts;
namespace fs = std::filesystem;

namespace {

const char* minimal = R"(
[pattern]
matrix = 8 0; 0 8
[kernel]
type = dirichlet
[geometry]
type = laminate
[load]
strain = 1 0 0
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lsts_test_" + name);
  fs::remove_all(dir);
  return dir;
}

struct Ppm {
  int width = 0, height = 0;
  std::vector<unsigned char> rgb;
};

Ppm read_ppm(const fs::path& p) {
  const std::string data = slurp(p);
  std::istringstream in(data);
  std::string magic;
  int maxval;
  Ppm out;
  in >> magic >> out.width >> out.height >> maxval;
  in.get();
  EXPECT_EQ(magic, "P6");
  EXPECT_EQ(maxval, 255);
  out.rgb.assign(data.begin() + in.tellg(), data.end());
  return out;
}

}  // namespace

TEST(Manifest, MinimalFillsDefaults) {
  const auto m = parse_manifest_text(minimal);
  EXPECT_EQ(m.dimension(), 2);
  EXPECT_EQ(m.kernel_type, "dirichlet");
  EXPECT_EQ(m.geometry_type, "laminate");
  EXPECT_EQ(m.tolerance, 1e-10);
  EXPECT_EQ(m.fraction, 0.5);
  EXPECT_EQ(m.metric, "mean_stress");
  EXPECT_EQ(m.phase2.young, 10.0);
  EXPECT_TRUE(m.sweep_grid().empty());
}

TEST(Manifest, MissingPatternNamesField) {
  try {
    parse_manifest_text("[geometry]\ntype = laminate\n[load]\nstrain = 1 0 0\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("pattern.matrix"), std::string::npos);
  }
}

TEST(Manifest, UnknownKeyReportsLine) {
  try {
    parse_manifest_text("[pattern]\nmatrix = 4 0; 0 4\n\n[kernel]\nflavour = mild\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 5);
    EXPECT_NE(std::string(e.what()).find("flavour"), std::string::npos);
  }
  EXPECT_THROW(parse_manifest_text("[bogus]\n"), ParseError);
  EXPECT_THROW(parse_manifest_text("[pattern]\nmatrix = 4 0; 0 4\nmatrix = 4 0; 0 4\n"), ParseError);
  EXPECT_THROW(parse_manifest_text("[pattern]\nmatrix = 4 x; 0 4\n"), ParseError);
  EXPECT_THROW(parse_manifest_text("matrix = 4 0; 0 4\n"), ParseError);
}

TEST(Manifest, CrossFieldValidation) {
  const std::string base = "[pattern]\nmatrix = 8 0; 0 8\n[load]\nstrain = 1 0 0\n";
  EXPECT_THROW(parse_manifest_text(base), ValidationError);  // no geometry
  EXPECT_THROW(parse_manifest_text(base + "[geometry]\ntype = foam\n"), ValidationError);
  EXPECT_THROW(parse_manifest_text(base + "[geometry]\ntype = laminate\n[kernel]\ntype = dlvp\n"), ValidationError);
  EXPECT_THROW(parse_manifest_text(base + "[geometry]\ntype = laminate\n[solver]\ntolerance = 0\n"), ValidationError);
  EXPECT_NO_THROW(parse_manifest_text(base + "[geometry]\ntype = laminate\n[kernel]\ntype = dlvp\nalpha = 0.1 0.2\n"));
}

TEST(Manifest, SweepGridIsProduct) {
  const auto m = parse_manifest_text(std::string(minimal) + "[sweep]\nalpha1 = 0:0.05:0.5\nalpha2 = 0:0.05:0.5\n");
  const auto grid = m.sweep_grid();
  ASSERT_EQ(grid.size(), 121u);
  EXPECT_EQ(grid.front()[0], 0.0);
  EXPECT_EQ(grid.back()[0], 0.5);
  EXPECT_EQ(grid[1][1], 0.05);
  EXPECT_EQ(grid[11][0], 0.05);
}

TEST(Manifest, ShippedSamplesParse) {
  for (const auto& entry : fs::directory_iterator(LSTS_SAMPLES_DIR))
    if (entry.path().extension() == ".ini") EXPECT_NO_THROW(parse_manifest(entry.path())) << entry.path();
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678901234567}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Io, CsvQuoting) {
  CsvWriter w({"a", "b,c"});
  w.row(std::vector<std::string>{"x\"y", "plain"});
  EXPECT_EQ(w.str(), "a,\"b,c\"\r\n\"x\"\"y\",plain\r\n");
}

TEST(Heatmap, PixelCountAndConstantField) {
  IntMatrix<2> m;
  m << 4, -2, 4, 14;
  auto l = Lattice<2>::make(m);
  const auto dir = scratch("heat_const");
  emit_heatmap(*l, std::vector<double>(l->size(), 2.5), "viridis", dir / "c.ppm");
  const auto img = read_ppm(dir / "c.ppm");
  EXPECT_EQ(std::size_t(img.width) * std::size_t(img.height), l->size());
  ASSERT_EQ(img.rgb.size(), 3 * l->size());
  for (std::size_t i = 0; i < img.rgb.size(); ++i) EXPECT_EQ(img.rgb[i], img.rgb[i % 3]);
  EXPECT_EQ(slurp(dir / "c.ppm.range.txt"), "min 2.5\nmax 2.5\n");
}

TEST(Heatmap, IndicatorHighlightsNearestCells) {
  IntMatrix<2> m;
  m << 4, 4, -4, 4;
  auto l = Lattice<2>::make(m);
  const std::size_t target = 5;
  std::vector<double> v(l->size(), 0.0);
  v[target] = 1.0;
  const int w = 40, h = 40;
  const auto dir = scratch("heat_ind");
  emit_heatmap(*l, v, "gray", dir / "i.ppm", w, h);
  const auto img = read_ppm(dir / "i.ppm");
  ASSERT_EQ(img.width, w);
  const RealVector<2> y = l->pattern().point(target);
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col) {
      const RealVector<2> x = raster_position(col, row, w, h);
      // brute-force nearest point with periodic distance
      double best = 1e9;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < l->size(); ++i) {
        const double d = NearestPatternPoint::periodic_distance2(x, l->pattern().point(i));
        if (d < best) {
          best = d;
          arg = i;
        }
      }
      const bool lit = img.rgb[std::size_t(3 * (row * w + col))] == 255;
      EXPECT_EQ(lit, arg == target) << col << "," << row << " y=" << y.transpose();
    }
}

TEST(Heatmap, LaminateBandsAreColumnConstant) {
  // e11 of a laminate with normal along x depends on x only.
  const auto man = parse_manifest_text(R"(
[pattern]
matrix = 16 0; 0 16
[geometry]
type = laminate
[load]
strain = 1 0 0
[output]
heatmap = e11
width = 48
height = 48
)");
  const auto dir = scratch("heat_lam");
  RunOptions opts;
  opts.output_dir = dir;
  std::ostringstream log;
  const auto out = run_solve<2>(man, opts, log);
  EXPECT_LE(out.iterations, 3);
  const auto img = read_ppm(dir / "e11.ppm");
  ASSERT_EQ(img.width, 48);
  // columns index x in the raster; every row has the same colour per column
  for (int row = 1; row < img.height; ++row)
    for (int col = 0; col < img.width; ++col)
      for (int c = 0; c < 3; ++c)
        EXPECT_EQ(img.rgb[std::size_t(3 * (row * 48 + col) + c)], img.rgb[std::size_t(3 * col + c)]);
}

TEST(Run, HomogeneousSummary) {
  const auto man = parse_manifest(fs::path(LSTS_SAMPLES_DIR) / "homogeneous.ini");
  const auto dir = scratch("homog");
  RunOptions opts;
  opts.output_dir = dir;
  std::ostringstream log;
  const auto out = run_solve<2>(man, opts, log);
  EXPECT_EQ(out.iterations, 1);
  EXPECT_EQ(out.e_eff, 0.0);
  EXPECT_TRUE(fs::exists(dir / "summary.txt"));
  EXPECT_TRUE(fs::exists(dir / "strain.csv"));
  EXPECT_NE(slurp(dir / "summary.txt").find("iterations: 1"), std::string::npos);
}

TEST(Run, SweepIsDeterministicAcrossThreadCounts) {
  const auto man = parse_manifest_text(R"(
[pattern]
matrix = 8 0; 0 8
[geometry]
type = laminate
[load]
strain = 1 0 0.5
[sweep]
alpha1 = 0 0.25 0.5
alpha2 = 0:0.25:0.5
)");
  const auto a = scratch("sweep_a"), b = scratch("sweep_b");
  std::ostringstream log;
  RunOptions oa;
  oa.output_dir = a;
  RunOptions ob;
  ob.output_dir = b;
  ob.threads = 3;
  EXPECT_EQ(run_sweep<2>(man, oa, log).size(), 9u);
  run_sweep<2>(man, ob, log);
  const auto csv = slurp(a / "sweep.csv");
  EXPECT_EQ(csv, slurp(b / "sweep.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
}

TEST(Run, EffectiveLaminateWritesOracle) {
  const auto man = parse_manifest_text(minimal);
  const auto dir = scratch("effective");
  RunOptions opts;
  opts.output_dir = dir;
  std::ostringstream log;
  const auto eff = run_effective<2>(man, opts, log);
  EXPECT_TRUE(fs::exists(dir / "effective.csv"));
  EXPECT_TRUE(fs::exists(dir / "effective_oracle.csv"));
  const auto oracle = laminate_effective_oracle<2>(LaminateGeometry<2>{});
  EXPECT_LE((eff.tensor - oracle).cwiseAbs().maxCoeff(), 1e-8);
}
