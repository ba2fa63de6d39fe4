// Resonance fluorescence at Omega = 2.5 kappa: prints omega, |R_theta|^2 and
// A S_theta for theta = pi/4 and pi/2 as CSV.
#include <cstdio>
#include <numbers>

#include "ioqfr/bounds.hpp"

int main() {
  using namespace ioqfr;
  const double thetas[] = {std::numbers::pi / 4, std::numbers::pi / 2};
  std::printf("theta,omega,abs_R_sq,A_times_S\n");
  for (double theta : thetas) {
    const Analysis an = analyze(rf_lindblad({1.0, 2.5}, theta));
    const double a = activity(an).A(0, 0);
    const ResponseEvaluator resp(an);
    for (int i = 0; i <= 100; ++i) {
      const double w = 5.0 * i / 100;
      const double r2 = std::norm(resp.at(w).complex_R(0, 0));
      std::printf("%.17g,%.17g,%.17g,%.17g\n", theta, w, r2, a * homodyne_spectrum(an, 0, theta, w));
    }
  }
}
