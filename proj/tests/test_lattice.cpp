#include "lsts/lattice.hpp"
#include "lsts/pattern_fft.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <random>
#include <set>

using namespace lsts;

namespace {

IntMatrix<2> mat2(Integer a, Integer b, Integer c, Integer d) {
  IntMatrix<2> m;
  m << a, b, c, d;
  return m;
}

// Brute force: every M^{-1} k mod 1 with k in a box large enough to hit every
// class, kept as numerators over m in [0, m).
std::set<std::pair<Integer, Integer>> enumerate_pattern(const IntMatrix<2>& m) {
  const Integer det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Integer n = std::abs(det);
  IntMatrix<2> adj;
  adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  std::set<std::pair<Integer, Integer>> out;
  const Integer reach = std::abs(m(0, 0)) + std::abs(m(0, 1)) + std::abs(m(1, 0)) + std::abs(m(1, 1));
  for (Integer a = -reach; a <= reach; ++a)
    for (Integer b = -reach; b <= reach; ++b) {
      IntVector<2> r = adj * IntVector<2>(a, b);
      if (det < 0) r = -r;
      out.insert({((r(0) % n) + n) % n, ((r(1) % n) + n) % n});
    }
  return out;
}

std::vector<IntMatrix<2>> sample_matrices() {
  return {mat2(4, 0, 0, 4), mat2(8, 0, 0, 3), mat2(4, 4, -4, 4), mat2(4, -2, 4, 14),
          mat2(5, 2, 0, 7), mat2(-3, 1, 2, 5), mat2(1, 0, 0, 1), mat2(6, 3, 3, 6)};
}

}  // namespace

TEST(Lattice, DeterminantAndZeroMatrix) {
  EXPECT_EQ(det_abs<2>(mat2(4, 4, -4, 4)), 32);
  EXPECT_EQ(det_abs<2>(mat2(4, -2, 4, 14)), 64);
  EXPECT_THROW(det_abs<2>(mat2(2, 4, 1, 2)), ZeroDeterminant);
  EXPECT_THROW(Lattice<2>::make(mat2(0, 0, 0, 0)), ZeroDeterminant);
  IntMatrix<3> m3;
  m3 << 2, 1, 0, 0, 3, 1, 1, 0, 4;
  EXPECT_EQ(det_abs<3>(m3), 25);
}

TEST(Lattice, PatternMatchesBruteForce) {
  for (const auto& m : sample_matrices()) {
    auto lattice = Lattice<2>::make(m);
    const Integer n = static_cast<Integer>(lattice->size());
    const auto expected = enumerate_pattern(m);
    ASSERT_EQ(expected.size(), lattice->size()) << m;
    std::set<std::pair<Integer, Integer>> got;
    for (const auto& r : lattice->pattern().numerators()) {
      EXPECT_TRUE(2 * r(0) >= -n && 2 * r(0) < n && 2 * r(1) >= -n && 2 * r(1) < n);
      got.insert({((r(0) % n) + n) % n, ((r(1) % n) + n) % n});
    }
    EXPECT_EQ(got, expected) << m;
  }
}

TEST(Lattice, PatternIndexRoundTrip) {
  for (const auto& m : sample_matrices()) {
    auto lattice = Lattice<2>::make(m);
    const auto& p = lattice->pattern();
    const Integer n = p.denominator();
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(p.index_of(p.numerator(i)), i);
      // any other representative modulo 1
      EXPECT_EQ(p.index_of(IntVector<2>(p.numerator(i) + IntVector<2>(n, -2 * n))), i);
    }
    for (std::size_t i = 0; i < p.size(); i += 3)
      for (std::size_t j = 0; j < p.size(); j += 5) {
        EXPECT_EQ(p.sum_index(i, j), p.index_of(IntVector<2>(p.numerator(i) + p.numerator(j))));
        EXPECT_EQ(p.difference_index(i, j), p.index_of(IntVector<2>(p.numerator(i) - p.numerator(j))));
      }
  }
}

TEST(Lattice, GeneratingSetClassesAreDistinctAndComplete) {
  for (const auto& m : sample_matrices()) {
    auto lattice = Lattice<2>::make(m);
    const auto& g = lattice->frequencies();
    std::set<std::pair<Integer, Integer>> reps;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto& h = g[i];
      EXPECT_TRUE(lattice->is_reduced(h));
      EXPECT_EQ(g.index_of(h), i);
      reps.insert({h(0), h(1)});
      // h + M^T z is in the same class
      EXPECT_EQ(g.index_of(IntVector<2>(h + m.transpose() * IntVector<2>(3, -1))), i);
      EXPECT_EQ(g[g.negated_index(i)], lattice->reduce(IntVector<2>(-h)));
    }
    EXPECT_EQ(reps.size(), lattice->size());
    // reduced frequencies satisfy M^{-T} h in [-1/2, 1/2)^2
    for (const auto& h : g.frequencies()) {
      const IntVector<2> r = lattice->frequency_coordinates(h);
      const Integer n = static_cast<Integer>(lattice->size());
      EXPECT_TRUE(2 * r(0) >= -n && 2 * r(0) < n && 2 * r(1) >= -n && 2 * r(1) < n) << h.transpose();
    }
  }
}

TEST(Lattice, ReduceExamples) {
  auto diag = Lattice<2>::make(mat2(4, 0, 0, 4));
  EXPECT_EQ(diag->reduce(IntVector<2>(2, 0)), IntVector<2>(-2, 0));
  EXPECT_EQ(diag->reduce(IntVector<2>(5, -3)), IntVector<2>(1, 1));
  EXPECT_EQ(diag->reduce(IntVector<2>(-2, 1)), IntVector<2>(-2, 1));
}

TEST(Smith, ReconstructsMatrix) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Integer> e(-9, 9);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix<3> m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = e(rng);
    if (determinant<3>(m) == 0) continue;
    const auto s = smith_normal_form<3>(m);
    EXPECT_EQ(IntMatrix<3>(s.left * s.diagonal() * s.right), m);
    EXPECT_EQ(IntMatrix<3>(s.left * s.left_inverse), IntMatrix<3>::Identity());
    EXPECT_EQ(IntMatrix<3>(s.right * s.right_inverse), IntMatrix<3>::Identity());
    Integer prod = 1;
    for (int i = 0; i < 3; ++i) {
      EXPECT_GT(s.divisors(i), 0);
      if (i + 1 < 3) EXPECT_EQ(s.divisors(i + 1) % s.divisors(i), 0);
      prod *= s.divisors(i);
    }
    EXPECT_EQ(prod, det_abs<3>(m));
  }
}

namespace {

// Textbook transform with floating-point phases, independent of the exact
// integer phase reduction used by the library.
std::vector<Complex> naive_transform(const Lattice<2>& l, const std::vector<Complex>& a) {
  const std::size_t m = l.size();
  std::vector<Complex> out(m);
  for (std::size_t h = 0; h < m; ++h) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const RealVector<2> y = l.pattern().point(j);
      acc += a[j] * std::exp(Complex(0.0, -2.0 * std::numbers::pi * l.frequencies()[h].cast<double>().dot(y)));
    }
    out[h] = acc / std::sqrt(double(m));
  }
  return out;
}

double rel_err(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST(PatternFft, MatchesNaiveTransformAndDft) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (const auto& m : sample_matrices()) {
    auto l = Lattice<2>::make(m);
    std::vector<Complex> a(l->size());
    for (auto& v : a) v = {n(rng), n(rng)};
    const auto fast = pattern_fft<2>(*l, a);
    EXPECT_LT(rel_err(fast, naive_transform(*l, a)), 1e-12) << m;
    EXPECT_LT(rel_err(fast, pattern_dft<2>(*l, a)), 1e-12) << m;
  }
}

TEST(PatternFft, ParsevalAndRoundTrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  auto l = Lattice<2>::make(mat2(4, -2, 4, 14));
  std::vector<Complex> a(l->size());
  for (auto& v : a) v = {n(rng), n(rng)};
  const auto ahat = pattern_fft<2>(*l, a);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e1 += std::norm(a[i]);
    e2 += std::norm(ahat[i]);
  }
  EXPECT_NEAR(e1, e2, 1e-12 * e1);
  EXPECT_LT(rel_err(pattern_ifft<2>(*l, ahat), a), 1e-13);
  EXPECT_LT(rel_err(pattern_idft<2>(*l, ahat), a), 1e-12);

  const auto coeff = pattern_fft<2>(*l, a, Normalization::coefficient);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(coeff[i] - std::sqrt(64.0) * ahat[i]), 0.0, 1e-12);
  EXPECT_LT(rel_err(pattern_ifft<2>(*l, coeff, Normalization::coefficient), a), 1e-13);
}

TEST(PatternFft, DeltaAndConstant) {
  auto l = Lattice<2>::make(mat2(4, 4, -4, 4));
  const std::size_t m = l->size();
  std::vector<Complex> delta(m, 0.0);
  delta[l->pattern().index_of(IntVector<2>::Zero())] = 1.0;
  for (const auto& v : pattern_fft<2>(*l, delta)) EXPECT_NEAR(std::abs(v - 1.0 / std::sqrt(double(m))), 0.0, 1e-15);
  std::vector<Complex> one(m, 1.0);
  const auto hat = pattern_fft<2>(*l, one);
  const std::size_t zero = l->frequencies().index_of(IntVector<2>::Zero());
  for (std::size_t h = 0; h < m; ++h)
    EXPECT_NEAR(std::abs(hat[h]), h == zero ? std::sqrt(double(m)) : 0.0, 1e-12);
}

TEST(PatternFft, ThreeDimensionalPattern) {
  IntMatrix<3> m;
  m << 3, 1, 0, 0, 4, 2, 1, 0, 2;
  auto l = Lattice<3>::make(m);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  std::vector<Complex> a(l->size());
  for (auto& v : a) v = {n(rng), n(rng)};
  EXPECT_LT(rel_err(pattern_fft<3>(*l, a), pattern_dft<3>(*l, a)), 1e-12);
}

TEST(PatternFft, LengthMismatchThrows) {
  auto l = Lattice<2>::make(mat2(4, 0, 0, 4));
  std::vector<Complex> a(15);
  EXPECT_THROW(pattern_fft<2>(*l, a), LengthMismatch);
  EXPECT_THROW(pattern_dft<2>(*l, a), LengthMismatch);
}
