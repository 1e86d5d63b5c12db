// Prints a side-by-side table of the lag-1 auto-correlation limit density
// and the Marcenko-Pastur density at a given aspect ratio.
//
//   ./lsd_vs_mp [y]

#include <cstdio>
#include <cstdlib>

#include "spectra/limit_law.hpp"

int main(int argc, char** argv) {
  const double y = argc > 1 ? std::atof(argv[1]) : 1.0;
  const spectra::LsdLaw lag(y);
  const spectra::MpLaw mp(y);
  std::printf("y = %g\n", y);
  std::printf("lag law support: (%.6f, %.6f], atom at 0: %.4f\n", lag.lower_edge(),
              lag.upper_edge(), lag.point_mass_at(0.0));
  std::printf("MP law support: [%.6f, %.6f], atom at 0: %.4f\n", mp.lower_edge(),
              mp.upper_edge(), mp.point_mass_at(0.0));
  std::printf("%12s %14s %14s\n", "u", "f_lag(u)", "f_mp(u)");
  const double hi = std::max(lag.upper_edge(), mp.upper_edge());
  for (int i = 0; i < 24; ++i) {
    const double u = hi * (i + 0.5) / 24.0;
    std::printf("%12.5f %14.8f %14.8f\n", u, spectra::lsd_density(u, y),
                spectra::mp_density(u, y));
  }
  return 0;
}
