#pragma once

#include <complex>
#include <cstdint>

namespace dilab {

/**
 * Reproducible random stream: xoshiro256++ seeded through splitmix64.
 *
 * The exact generator matters because sampled unitaries are part of the
 * artifact contract (same seed, same family, on any platform or language).
 * Stream definition:
 *   - state: four 64-bit words produced by iterating splitmix64 on the seed;
 *   - next(): xoshiro256++ (rotl(s0+s3,23)+s0 output, standard update);
 *   - uniform(): (next() >> 11) * 2^-53, in [0,1);
 *   - normal(): Box-Muller pair from two uniforms, cos branch first,
 *     with the log argument shifted into (0,1];
 *   - complex matrix entries are filled row-major, real part before
 *     imaginary part.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal N(0,1) via Box-Muller.
  double normal();

  /// Complex N(0,1) + i N(0,1).
  std::complex<double> cnormal();

  /// Deterministic sub-stream seed for (seed, index) pairs.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dilab
