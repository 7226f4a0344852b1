// Command-line front end: solve, sweep, effective, selftest.

#include "selftest.hpp"

#include "lsts/lsts.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

enum ExitCode { ok = 0, failure = 1, invalid = 2, not_converged = 3 };

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const lsts::NotConverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return not_converged;
  } catch (const lsts::ParseError& e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return invalid;
  } catch (const lsts::ValidationError& e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return invalid;
  } catch (const lsts::InvalidSpec& e) {
    std::cerr << "invalid kernel: " << e.what() << "\n";
    return invalid;
  } catch (const lsts::InvalidGeometry& e) {
    std::cerr << "invalid geometry: " << e.what() << "\n";
    return invalid;
  } catch (const lsts::InvalidMaterial& e) {
    std::cerr << "invalid material: " << e.what() << "\n";
    return invalid;
  } catch (const lsts::DimensionMismatch& e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return invalid;
  } catch (const lsts::ZeroDeterminant& e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lippmann-Schwinger homogenization on anisotropic lattices"};
  app.require_subcommand(1);
  app.fallthrough();

  lsts::RunOptions opts;
  std::string out_dir;
  app.add_option("--threads", opts.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory (overrides the manifest)");
  app.add_option("--seed", opts.seed, "seed for randomized checks");

  std::string manifest_path;
  auto* solve = app.add_subcommand("solve", "solve one cell problem");
  solve->add_option("manifest", manifest_path, "run manifest")->required();
  auto* sweep = app.add_subcommand("sweep", "de la Vallee Poussin slope sweep");
  sweep->add_option("manifest", manifest_path, "run manifest")->required();
  auto* effective = app.add_subcommand("effective", "effective stiffness tensor");
  effective->add_option("manifest", manifest_path, "run manifest")->required();
  auto* selftest = app.add_subcommand("selftest", "FFT and Green operator oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : invalid;
  }
  if (!out_dir.empty()) opts.output_dir = out_dir;

  if (selftest->parsed()) {
    return guarded([&] {
      bool all = true;
      for (const auto& c : lsts::tools::run_selftest(opts.seed)) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        all = all && c.pass;
      }
      return all ? ok : failure;
    });
  }

  return guarded([&] {
    const auto manifest = lsts::parse_manifest(manifest_path);
    lsts::with_dimension(manifest, [&]<int D>() {
      if (solve->parsed()) lsts::run_solve<D>(manifest, opts, std::cout);
      else if (sweep->parsed()) lsts::run_sweep<D>(manifest, opts, std::cout);
      else lsts::run_effective<D>(manifest, opts, std::cout);
    });
    return ok;
  });
}
