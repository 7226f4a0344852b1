#include "lsts/kernels.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace lsts;

namespace {

IntMatrix<2> mat2(Integer a, Integer b, Integer c, Integer d) {
  IntMatrix<2> m;
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(Kernels, SpecValidation) {
  EXPECT_THROW(KernelSpec<2>::dlvp(RealVector<2>(0.6, 0.1)), InvalidSpec);
  EXPECT_THROW(KernelSpec<2>::dlvp(RealVector<2>(-0.1, 0.1)), InvalidSpec);
  EXPECT_NO_THROW(KernelSpec<2>::dlvp(RealVector<2>(0.5, 0.0)));
  EXPECT_THROW(KernelSpec<2>::three_direction(2, 0, 0), InvalidSpec);
  EXPECT_NO_THROW(KernelSpec<2>::three_direction(2, 2, 0));
  KernelSpec<2>::Directions flat(2, 2);
  flat << 1, 2, 0, 0;
  EXPECT_THROW(KernelSpec<2>::box_spline(flat), InvalidSpec);
}

TEST(Kernels, DirichletCoefficients) {
  auto l = Lattice<2>::make(mat2(8, 0, 0, 8));
  const CoefficientTable<2> t(l, KernelSpec<2>::dirichlet());
  // one nonzero term per class, equal to 1/sqrt(m)
  for (std::size_t h = 0; h < t.size(); ++h) {
    int count = 0;
    t.for_each_term(h, [&](const IntVector<2>& k, double c) {
      ++count;
      EXPECT_EQ(k, l->frequencies()[h]);
      EXPECT_DOUBLE_EQ(c, 1.0 / 8.0);
    });
    EXPECT_EQ(count, 1);
  }
  EXPECT_LE(t.orthonormality_defect(), 1e-15);
  EXPECT_DOUBLE_EQ(t.coefficient(IntVector<2>(4, 0)), 0.0);
  EXPECT_DOUBLE_EQ(t.coefficient(IntVector<2>(-4, 3)), 1.0 / 8.0);
}

TEST(Kernels, ModifiedDirichletBoundaryHalves) {
  auto l = Lattice<2>::make(mat2(8, 0, 0, 8));
  const CoefficientTable<2> t(l, KernelSpec<2>::dlvp(RealVector<2>(0.0, 0.0)));
  // corner class (-4,-4): four terms (+-4, +-4), each (1/2)(1/2)/8
  double sum = 0.0;
  int count = 0;
  t.for_each_term(l->frequencies().index_of(IntVector<2>(-4, -4)), [&](const IntVector<2>& k, double c) {
    EXPECT_EQ(k.cwiseAbs(), IntVector<2>(4, 4));
    EXPECT_DOUBLE_EQ(c, 0.25 / 8.0);
    sum += c;
    ++count;
  });
  EXPECT_EQ(count, 4);
  EXPECT_DOUBLE_EQ(sum, 1.0 / 8.0);
}

TEST(Kernels, DlvpWindowValues) {
  const auto s = KernelSpec<2>::dlvp(RealVector<2>(0.2, 0.0));
  EXPECT_DOUBLE_EQ(window<2>(s, RealVector<2>(0.3, 0.0)), 1.0);
  EXPECT_NEAR(window<2>(s, RealVector<2>(0.5, 0.0)), 0.5, 1e-15);
  EXPECT_NEAR(window<2>(s, RealVector<2>(0.55, 0.1)), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(window<2>(s, RealVector<2>(0.61, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(window<2>(s, RealVector<2>(0.0, 0.5)), 0.5);
}

TEST(Kernels, PartitionOfUnity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double a1 : {0.0, 0.1, 0.25, 0.45})
    for (double a2 : {0.0, 0.1, 0.25, 0.45}) {
      const auto s = KernelSpec<2>::dlvp(RealVector<2>(a1, a2));
      for (int i = 0; i < 50; ++i) EXPECT_LE(partition_of_unity_defect<2>(s, RealVector<2>(u(rng), u(rng))), 1e-12);
      EXPECT_LE(partition_of_unity_defect<2>(s, RealVector<2>(0.5, -0.5)), 1e-12);
    }
  const auto box = KernelSpec<2>::three_direction(2, 2, 0);
  for (int i = 0; i < 50; ++i) EXPECT_LE(partition_of_unity_defect<2>(box, RealVector<2>(u(rng), u(rng))), 1e-12);
  EXPECT_LE(box_spline_poisson_defect<2>(KernelSpec<2>::three_direction(2, 2, 1), 6), 1e-15);
}

TEST(Kernels, CardinalBspline) {
  // order 2 is the hat function, order 4 the cubic B-spline
  EXPECT_DOUBLE_EQ(cardinal_bspline(2, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(cardinal_bspline(2, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(cardinal_bspline(2, 1.0), 0.0);
  EXPECT_NEAR(cardinal_bspline(4, 0.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(cardinal_bspline(4, 1.0), 1.0 / 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(cardinal_bspline(4, 2.5), 0.0);
}

TEST(Kernels, OrthonormalizeOnSheared) {
  for (const auto& m : {mat2(16, 0, 0, 16), mat2(4, -2, 4, 14)}) {
    auto l = Lattice<2>::make(m);
    for (double a : {0.0, 0.25, 0.45}) {
      const auto t = orthonormalize(CoefficientTable<2>(l, KernelSpec<2>::dlvp(RealVector<2>(a, 0.45 - a))));
      EXPECT_LE(t.orthonormality_defect(), 1e-12);
    }
    const auto box = orthonormalize(CoefficientTable<2>(l, KernelSpec<2>::three_direction(2, 2, 0)));
    EXPECT_LE(box.orthonormality_defect(), 1e-12);
    EXPECT_LT(box.truncation_tail(), 1e-5);
  }
}

TEST(Kernels, BracketSumRejectsUnreduced) {
  auto l = Lattice<2>::make(mat2(4, 0, 0, 4));
  const CoefficientTable<2> t(l, KernelSpec<2>::dirichlet());
  EXPECT_THROW(bracket_sum<2>(t, IntVector<2>(2, 0)), NotReduced);
  EXPECT_NEAR(bracket_sum<2>(t, IntVector<2>(-2, 1)), 1.0 / 16.0, 1e-16);
}

TEST(Kernels, DegenerateClassDetected) {
  // Directions scaled by the grid size put a zero of sinc on every nonzero
  // class when no shifts are retained.
  auto l = Lattice<2>::make(mat2(4, 0, 0, 4));
  KernelSpec<2>::Directions xi(2, 2);
  xi << 4, 0, 0, 4;
  const auto spec = KernelSpec<2>::box_spline(xi, 0);
  EXPECT_THROW(orthonormalize(CoefficientTable<2>(l, spec)), DegenerateClass);
}

TEST(Kernels, FundamentalInterpolantIsCardinal) {
  // The interpolant of the Dirac comb data is 1 at y = 0 and 0 elsewhere.
  for (const auto& m : {mat2(8, 0, 0, 8), mat2(4, 4, -4, 4)}) {
    auto l = Lattice<2>::make(m);
    for (const auto& spec : {KernelSpec<2>::dirichlet(), KernelSpec<2>::dlvp(RealVector<2>(0.2, 0.3))}) {
      const CoefficientTable<2> t(l, spec);
      const auto a = fundamental_interpolant_coeffs<2>(t);
      std::vector<RealVector<2>> pts;
      for (std::size_t i = 0; i < l->size(); ++i) pts.push_back(2.0 * std::numbers::pi * l->pattern().point(i));
      const auto vals = synthesize<2>(t, a, pts);
      for (std::size_t i = 0; i < l->size(); ++i)
        EXPECT_NEAR(vals[i], l->pattern().point(i).isZero() ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(Kernels, DiscreteCoeffsOfTrigPolynomial) {
  // f(x) = cos(x1 + 2 x2): c^M at classes of (1,2) and (-1,-2) equal 1/2.
  auto l = Lattice<2>::make(mat2(8, 0, 0, 8));
  std::vector<Complex> s(l->size());
  for (std::size_t i = 0; i < l->size(); ++i) {
    const RealVector<2> x = 2.0 * std::numbers::pi * l->pattern().point(i);
    s[i] = std::cos(x(0) + 2.0 * x(1));
  }
  const auto c = discrete_coeffs<2>(*l, s);
  for (std::size_t h = 0; h < l->size(); ++h) {
    const auto& k = l->frequencies()[h];
    const bool hit = k == IntVector<2>(1, 2) || k == IntVector<2>(-1, -2);
    EXPECT_NEAR(std::abs(c[h]), hit ? 0.5 : 0.0, 1e-14);
  }
}
