#pragma once

#include <utility>

#include "ktrecon/types.hpp"

namespace ktrecon {

/// Non-increasing, non-negative singular values of a matrix.
struct SingularSpectrum {
  RVec values;

  /// Number of values above tol * values(0).
  int rank(double tol = 1e-8) const;
};

/// Complex element-wise shrinkage S_tau[z] = (z/|z|) * max(|z|-tau, 0),
/// with S_tau[0] = 0. The phase of surviving entries is preserved.
CMat soft_threshold(const CMat& z, double tau);

/// Singular value thresholding SVT_tau[Z] = U max(Sigma-tau, 0) V^H, the
/// proximal map of tau*||.||_*. Returns the thresholded matrix together with
/// the spectrum of Z itself.
std::pair<CMat, SingularSpectrum> svt(const CMat& Z, double tau);

/// Singular values of Z, largest first.
SingularSpectrum singular_values(const CMat& Z);

}  // namespace ktrecon
