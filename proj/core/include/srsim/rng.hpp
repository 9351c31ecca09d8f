#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace srsim {

// Deterministic random source for everything in the library.
//
// The generator is std::mt19937_64, whose output sequence is pinned by the
// C++ standard, so streams are bit-identical across platforms and compilers.
// Gaussian variates are produced by an explicit Box-Muller transform instead
// of std::normal_distribution (whose mapping is implementation-defined and
// would silently break golden outputs).

// SplitMix64 step; used both as a seed scrambler and to derive stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Collapses (master seed, point index, realization index, ...) into one
// stream seed. Order-sensitive; every element goes through a full splitmix64
// round so nearby tuples land far apart.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  // Uniform on [0, 1).
  double uniform();
  // Single fair bit.
  bool bit();
  // Standard real normal via Box-Muller; one value per call, pair cached.
  double normal();
  // Circularly symmetric complex normal, unit variance: E|z|^2 = 1.
  std::complex<double> cnormal();

private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace srsim
