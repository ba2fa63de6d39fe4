// Certifies the activity bound for the driven Kerr-cat resonator and prints a
// summary of the normalized information ratios.
#include <algorithm>
#include <cstdio>
#include <vector>

#include "ioqfr/bounds.hpp"

int main() {
  using namespace ioqfr;
  const Analysis an = analyze(kerr_cat({}));
  std::printf("gap %.6g, <n> = %.6g\n", an.stationary.gap,
              trace_product(an.model.number_operator->matrix, an.stationary.rho.matrix).real());

  std::vector<double> omegas;
  for (int i = 0; i <= 40; ++i) omegas.push_back(-5.0 + 0.25 * i);
  const BoundReport rep = certify(an, omegas);
  const auto& A = rep.activity.A;
  std::printf("A = diag(%.6g, %.6g)\n", A(0, 0), A(1, 1));
  for (const auto& p : rep.points)
    std::printf("omega %6.2f  lambda_max %.4f  r_ex %.4f  r_in %.4f  %s\n", p.omega, p.lambda_max, p.r[0], p.r[1],
                p.pass ? "ok" : "VIOLATED");
  return rep.pass() ? 0 : 1;
}
