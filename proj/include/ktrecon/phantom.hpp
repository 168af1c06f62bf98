#pragma once

#include <cstdint>

#include "ktrecon/types.hpp"

namespace ktrecon {

/// Parameters of the seeded synthetic dynamic phantom.
struct PhantomSpec {
  int nx = 32;
  int ny = 32;
  int nt = 16;
  int nc = 4;
  int rank_background = 3;   // exact rank of L*
  int n_dynamic_blobs = 5;   // sparse dynamic events in S*
  double noise_sigma = 0.01; // complex noise std per kept k-space sample
  std::uint64_t seed = 42;

  void validate() const;  // throws std::invalid_argument
};

/// Ground truth with a known background/dynamic split: X* = L* + S* exactly,
/// rank(L*) = rank_background by construction.
struct PhantomTruth {
  ImageSequence X_star;
  ImageSequence L_star;
  ImageSequence S_star;
  CoilSensitivities sens;
  PhantomSpec spec;
};

/// Builds the phantom: L* is a sum of rank_background outer products of
/// smooth spatial maps with slowly varying temporal profiles (orthonormalized
/// so the rank and spectrum are exact); S* is a set of small spatially
/// compact blobs that switch on and off abruptly. max |X*| is normalized
/// to 1. Deterministic in the seed.
PhantomTruth make_phantom(const PhantomSpec& spec);

/// nc Gaussian-profile coil maps centered outside the field of view on a
/// ring (coil c at angle 2*pi*c/nc), each with a smooth linear phase, then
/// normalized pixel-wise to unit sum of squares.
CoilSensitivities make_sensitivities(int nx, int ny, int nc, std::uint64_t seed);

/// Cartesian variable-density k-t mask: per frame all kx of a subset of ky
/// lines. The center_lines lowest-frequency lines (and always the DC line)
/// are kept in every frame; the rest are drawn per frame with probability
/// proportional to (1 + |ky|/kmax)^-2. Deterministic in the seed.
SamplingMask make_mask(int nx, int ny, int nt, double acceleration, int center_lines,
                       std::uint64_t seed);

/// y = E(X*) + n: encodes the truth and adds i.i.d. complex Gaussian noise of
/// std spec.noise_sigma to the kept samples only.
KTData simulate_acquisition(const PhantomTruth& truth, const SamplingMask& mask);

}  // namespace ktrecon
