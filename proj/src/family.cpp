#include "covlap/family.hpp"

#include "covlap/rng.hpp"

namespace covlap {

void TestFamily::validate() const {
  if (samples <= 0) throw EmptyFamily("family has no samples");
  if (min_bumps < 1 || max_bumps < min_bumps)
    throw ConfigError("bad bump count range");
  if (!(min_radius_frac > 0.0) || max_radius_frac < min_radius_frac)
    throw ConfigError("bad radius range");
  if (center_frac + max_radius_frac > 0.95)
    throw ConfigError(
        "family support may touch the boundary shell; shrink centers/radii");
  if (!(min_amplitude > 0.0) || max_amplitude < min_amplitude)
    throw ConfigError("bad amplitude range");
}

AnalyticField TestFamily::sample_spec(int index) const {
  validate();
  if (index < 0 || index >= samples)
    throw EmptyFamily("sample index out of range");
  Rng rng = Rng::keyed(seed, static_cast<std::uint64_t>(index));
  const double L = grid.L;
  const int d = alg->dim();

  AnalyticField spec;
  const int nb = rng.uniform_int(min_bumps, max_bumps);
  for (int t = 0; t < nb; ++t) {
    Bump b;
    if (!centered)
      for (int m = 0; m < 3; ++m)
        b.center[m] = rng.uniform(-center_frac * L, center_frac * L);
    b.radius = rng.uniform(min_radius_frac * L, max_radius_frac * L);
    b.amplitude = rng.uniform(min_amplitude, max_amplitude);
    AlgebraElement dir(rng.unit_vector(d));
    spec.terms.push_back({b, dir});
  }
  return spec;
}

ScalarField TestFamily::sample(int index) const {
  return sample_spec(index).materialize(grid, alg);
}

ScalarField TestFamily::sample_on(const Grid3& g, int index) const {
  if (g.L != grid.L) throw GridMismatch("family box size differs");
  return sample_spec(index).materialize(g, alg);
}

}  // namespace covlap
