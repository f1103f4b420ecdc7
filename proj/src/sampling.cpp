#include "polyreg/sampling.hpp"

#include <cmath>

namespace polyreg {

double SampleRng::normal() {
  // Box-Muller, cosine branch only. u1 is kept away from 0.
  double u1 = u01();
  double u2 = u01();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

SampleRng rng_at(uint64_t seed, uint64_t index) {
  // One extra mix step separates the (seed, index) pairs; without it,
  // neighbouring indices would start from neighbouring states.
  SampleRng g(seed ^ (index * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull));
  g.next();
  return g;
}

Rat dyadic(double v, int bits) {
  const double scale = std::ldexp(1.0, bits);
  const double r = std::nearbyint(v * scale);
  // Fits in int64 for every value we feed in (|v| stays far below 2^31).
  return Rat(Int(static_cast<long long>(r)), Int(1) << bits);
}

RatVec dyadic_vec(const std::vector<double>& v, int bits) {
  RatVec out;
  out.reserve(v.size());
  for (double x : v) out.push_back(dyadic(x, bits));
  return out;
}

RatVec sample_in_box(SampleRng& g, int dim, const Rat& rho) {
  const double r = rat_to_double(rho);
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (auto& x : v) x = (2.0 * g.u01() - 1.0) * r;
  RatVec out = dyadic_vec(v);
  // The dyadic snap can nudge a coordinate past rho; clamp exactly.
  for (auto& x : out) {
    if (x > rho) x = rho;
    if (x < -rho) x = -rho;
  }
  return out;
}

RatVec sample_direction(SampleRng& g, int dim) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  double len = 0.0;
  do {
    len = 0.0;
    for (auto& x : v) {
      x = g.normal();
      len += x * x;
    }
  } while (len < 1e-12);
  len = std::sqrt(len);
  for (auto& x : v) x /= len;
  return dyadic_vec(v, 40);
}

}  // namespace polyreg
