// Effective stiffness of a two-phase laminate on a sheared pattern, solved
// with a de la Vallee Poussin kernel and compared against the exact value.

#include "lsts/lsts.hpp"

#include <iostream>

int main() {
  using namespace lsts;
  IntMatrix<2> mat;
  mat << 32, 0, 8, 32;
  auto lattice = Lattice<2>::make(mat);

  LaminateGeometry<2> geometry;
  const auto raster = rasterize_laminate<2>(lattice, geometry);
  const auto c0 = default_reference_stiffness<2>(raster.stiffness);

  const auto kernel = orthonormalize(CoefficientTable<2>(lattice, KernelSpec<2>::dlvp(RealVector<2>(0.2, 0.2))));
  const auto green = periodised_green_table<2>(c0, kernel);
  const auto eff = effective_tensor<2>(raster.stiffness, green);
  const auto exact = laminate_effective_oracle<2>(geometry);

  Eigen::IOFormat fmt(6, 0, "  ", "\n", "  ");
  std::cout << "computed (iterations per load case:";
  for (int it : eff.iterations) std::cout << ' ' << it;
  std::cout << ")\n" << eff.tensor.format(fmt) << "\n";
  std::cout << "exact\n" << exact.format(fmt) << "\n";
  std::cout << "max abs difference " << (eff.tensor - exact).cwiseAbs().maxCoeff() << "\n";
}
