#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ktrecon {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Complex space-time (Casorati) matrix: one vectorized frame per column.
/// Pixels are stored x-fastest, i.e. row index = x + nx*y.
struct ImageSequence {
  CMat data;  // nx*ny rows, nt columns
  int nx = 0;
  int ny = 0;
  int nt = 0;

  ImageSequence() = default;
  ImageSequence(int nx_, int ny_, int nt_);
  ImageSequence(CMat data_, int nx_, int ny_, int nt_);

  Complex& at(int x, int y, int t) { return data(x + static_cast<Eigen::Index>(nx) * y, t); }
  const Complex& at(int x, int y, int t) const {
    return data(x + static_cast<Eigen::Index>(nx) * y, t);
  }
  std::size_t pixels() const { return static_cast<std::size_t>(nx) * ny; }
};

/// Per-coil complex sensitivity maps, one column per coil, pixels x-fastest.
/// Normalized so that the per-pixel sum of squared magnitudes equals one.
struct CoilSensitivities {
  CMat maps;  // nx*ny rows, nc columns
  int nx = 0;
  int ny = 0;
  int nc = 0;

  CoilSensitivities() = default;
  CoilSensitivities(CMat maps_, int nx_, int ny_, int nc_);

  /// Largest deviation of the per-pixel sum of squared magnitudes from one.
  double normalization_error() const;
};

/// Boolean k-t sampling pattern (true = sample acquired), x-fastest then y
/// then t, plus the nominal undersampling factor.
struct SamplingMask {
  std::vector<std::uint8_t> keep;  // nx*ny*nt entries, values 0/1
  int nx = 0;
  int ny = 0;
  int nt = 0;
  double acceleration = 1.0;  // nominal factor, > 1

  SamplingMask() = default;
  SamplingMask(int nx_, int ny_, int nt_, double acceleration_);

  bool at(int x, int y, int t) const {
    return keep[static_cast<std::size_t>(x) +
                static_cast<std::size_t>(nx) * (static_cast<std::size_t>(y) +
                                                static_cast<std::size_t>(ny) * t)] != 0;
  }
  void set(int x, int y, int t, bool v) {
    keep[static_cast<std::size_t>(x) +
         static_cast<std::size_t>(nx) *
             (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * t)] = v ? 1 : 0;
  }

  std::size_t kept_count() const;
  double realized_acceleration() const;

  /// Throws std::invalid_argument if a frame has no samples or the realized
  /// acceleration is more than 25% away from the nominal one.
  void validate() const;

  /// All-true mask (nominal factor just above 1 so the invariants hold).
  static SamplingMask full(int nx_, int ny_, int nt_);
};

/// Multi-coil k-t samples on the dense grid, exactly zero off the mask.
/// Stored as an nx*ny x (nt*nc) matrix, column index = t + nt*c.
struct KTData {
  CMat samples;
  SamplingMask mask;
  int nc = 0;

  KTData() = default;
  KTData(CMat samples_, SamplingMask mask_, int nc_);

  int nx() const { return mask.nx; }
  int ny() const { return mask.ny; }
  int nt() const { return mask.nt; }

  Eigen::Index col(int t, int c) const {
    return static_cast<Eigen::Index>(t) + static_cast<Eigen::Index>(mask.nt) * c;
  }
};

/// Temporal finite-difference image: one column fewer than the sequence it
/// was derived from (column t = frame t+1 minus frame t).
struct DiffImage {
  CMat data;  // nx*ny rows, nt-1 columns
  int nx = 0;
  int ny = 0;

  DiffImage() = default;
  DiffImage(CMat data_, int nx_, int ny_);
  DiffImage(int nx_, int ny_, int nt_minus_1);
};

}  // namespace ktrecon
