#include "ktrecon/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ktrecon {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

ImageSequence::ImageSequence(int nx_, int ny_, int nt_) : nx(nx_), ny(ny_), nt(nt_) {
  require(nx >= 1, "ImageSequence: nx must be >= 1");
  require(ny >= 1, "ImageSequence: ny must be >= 1");
  require(nt >= 1, "ImageSequence: nt must be >= 1");
  data = CMat::Zero(static_cast<Eigen::Index>(nx) * ny, nt);
}

ImageSequence::ImageSequence(CMat data_, int nx_, int ny_, int nt_)
    : data(std::move(data_)), nx(nx_), ny(ny_), nt(nt_) {
  require(nx >= 1, "ImageSequence: nx must be >= 1");
  require(ny >= 1, "ImageSequence: ny must be >= 1");
  require(nt >= 1, "ImageSequence: nt must be >= 1");
  require(data.rows() == static_cast<Eigen::Index>(nx) * ny,
          "ImageSequence: data must have nx*ny rows");
  require(data.cols() == nt, "ImageSequence: data must have nt columns");
}

CoilSensitivities::CoilSensitivities(CMat maps_, int nx_, int ny_, int nc_)
    : maps(std::move(maps_)), nx(nx_), ny(ny_), nc(nc_) {
  require(nx >= 1 && ny >= 1, "CoilSensitivities: nx, ny must be >= 1");
  require(nc >= 1, "CoilSensitivities: nc must be >= 1");
  require(maps.rows() == static_cast<Eigen::Index>(nx) * ny,
          "CoilSensitivities: maps must have nx*ny rows");
  require(maps.cols() == nc, "CoilSensitivities: maps must have nc columns");
}

double CoilSensitivities::normalization_error() const {
  double worst = 0.0;
  for (Eigen::Index p = 0; p < maps.rows(); ++p) {
    double ssq = 0.0;
    for (Eigen::Index c = 0; c < maps.cols(); ++c) ssq += std::norm(maps(p, c));
    worst = std::max(worst, std::abs(ssq - 1.0));
  }
  return worst;
}

SamplingMask::SamplingMask(int nx_, int ny_, int nt_, double acceleration_)
    : nx(nx_), ny(ny_), nt(nt_), acceleration(acceleration_) {
  require(nx >= 1 && ny >= 1 && nt >= 1, "SamplingMask: dimensions must be >= 1");
  require(acceleration > 1.0, "SamplingMask: nominal acceleration must be > 1");
  keep.assign(static_cast<std::size_t>(nx) * ny * nt, 0);
}

std::size_t SamplingMask::kept_count() const {
  std::size_t n = 0;
  for (auto v : keep) n += (v != 0);
  return n;
}

double SamplingMask::realized_acceleration() const {
  const std::size_t n = kept_count();
  if (n == 0) return 0.0;
  return static_cast<double>(keep.size()) / static_cast<double>(n);
}

void SamplingMask::validate() const {
  const std::size_t frame_size = static_cast<std::size_t>(nx) * ny;
  for (int t = 0; t < nt; ++t) {
    bool any = false;
    for (std::size_t i = 0; i < frame_size && !any; ++i) {
      any = keep[frame_size * t + i] != 0;
    }
    require(any, "SamplingMask: frame " + std::to_string(t) + " has no samples");
  }
  const double realized = realized_acceleration();
  require(std::abs(realized - acceleration) <= 0.25 * acceleration,
          "SamplingMask: realized acceleration " + std::to_string(realized) +
              " more than 25% away from nominal " + std::to_string(acceleration));
}

SamplingMask SamplingMask::full(int nx_, int ny_, int nt_) {
  SamplingMask m(nx_, ny_, nt_, 1.0 + 1e-9);
  std::fill(m.keep.begin(), m.keep.end(), std::uint8_t{1});
  return m;
}

KTData::KTData(CMat samples_, SamplingMask mask_, int nc_)
    : samples(std::move(samples_)), mask(std::move(mask_)), nc(nc_) {
  require(nc >= 1, "KTData: nc must be >= 1");
  require(samples.rows() == static_cast<Eigen::Index>(mask.nx) * mask.ny,
          "KTData: samples must have nx*ny rows");
  require(samples.cols() == static_cast<Eigen::Index>(mask.nt) * nc,
          "KTData: samples must have nt*nc columns");
}

DiffImage::DiffImage(CMat data_, int nx_, int ny_) : data(std::move(data_)), nx(nx_), ny(ny_) {
  require(nx >= 1 && ny >= 1, "DiffImage: nx, ny must be >= 1");
  require(data.rows() == static_cast<Eigen::Index>(nx) * ny,
          "DiffImage: data must have nx*ny rows");
}

DiffImage::DiffImage(int nx_, int ny_, int nt_minus_1) : nx(nx_), ny(ny_) {
  require(nx >= 1 && ny >= 1, "DiffImage: nx, ny must be >= 1");
  require(nt_minus_1 >= 1, "DiffImage: must have at least one column");
  data = CMat::Zero(static_cast<Eigen::Index>(nx) * ny, nt_minus_1);
}

}  // namespace ktrecon
