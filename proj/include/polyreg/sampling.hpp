#pragma once

#include <cstdint>
#include <vector>

#include "polyreg/convex_set.hpp"

namespace polyreg {

/// splitmix64. Small, fast, and good enough for sampling test points; the
/// value of using it here is that streams are seeded per sample index, so
/// results cannot depend on scheduling order.
struct SampleRng {
  uint64_t state;
  explicit SampleRng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  /// in [0, 1), 53 significant bits, no libc involved
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// standard normal via Box-Muller (fresh pair per call)
  double normal();
};

/// Generator for sample number `index` of a stream: mixes the index in so
/// that sample i is the same whether it is drawn first, last, or on another
/// thread.
SampleRng rng_at(uint64_t seed, uint64_t index);

/// Round to denominator 2^bits. Downstream geometry is exact rational, so
/// float samples are snapped onto a dyadic grid once and never re-rounded.
Rat dyadic(double v, int bits = 32);
RatVec dyadic_vec(const std::vector<double>& v, int bits = 32);

/// Uniform point of [-rho, rho]^dim on the dyadic grid.
RatVec sample_in_box(SampleRng& g, int dim, const Rat& rho);

/// Near-unit euclidean direction (normalized in doubles, then snapped; the
/// consumers are scale-invariant ratios, so exact unit length is not needed).
RatVec sample_direction(SampleRng& g, int dim);

/// Evaluate fn(0..count-1) into a vector. `parallel` farms the loop out to
/// OpenMP; because every index seeds its own stream and the reduction over
/// results happens serially in the caller, the output is identical either
/// way (asserted in tests and by the report-determinism acceptance check).
template <class T, class F>
std::vector<T> map_indices(std::size_t count, bool parallel, F&& fn) {
  std::vector<T> out(count);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  }
  return out;
}

}  // namespace polyreg
