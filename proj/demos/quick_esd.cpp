// Minimal end-to-end example: draw one panel, build the symmetrized lag-1
// auto-correlation matrix, and compare its spectrum with the limit law.
//
//   ./quick_esd [n] [y] [seed]

#include <cstdio>
#include <cstdlib>

#include "spectra/ecdf.hpp"
#include "spectra/lag_matrix.hpp"
#include "spectra/limit_law.hpp"
#include "spectra/panel.hpp"
#include "spectra/spectrum.hpp"

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 300;
  const double y = argc > 2 ? std::atof(argv[2]) : 1.0;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 7;
  const int p = static_cast<int>(y * n + 0.5);

  const auto panel =
      spectra::sample_error_panel(spectra::DistributionSpec::standard_normal(), n, p, 1, seed);
  const auto r = spectra::autocorr(panel, 1, true);
  const auto spectrum = spectra::sym_product_spectrum(spectra::sym_product(r));

  const spectra::LsdLaw law(y);
  const double ks = spectra::ks_distance(spectra::esd(spectrum), law);
  std::printf("n=%d p=%d: lambda_max=%.4f (edge b=%.4f), KS(ESD, limit)=%.4f\n", n, p,
              spectrum.max(), law.upper_edge(), ks);
  return 0;
}
