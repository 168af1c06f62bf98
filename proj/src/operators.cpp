#include "ktrecon/operators.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <fftw3.h>

namespace ktrecon {

namespace {

// FFTW plans for the handful of shapes a run touches, created once under a
// lock (plan creation is not thread-safe; execution on distinct arrays is).
// FFTW_ESTIMATE keeps planning deterministic, FFTW_UNALIGNED lets one plan
// serve any buffer.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  // In-place 2-D transform of an ny x nx frame stored x-fastest.
  fftw_plan plan2d(int nx, int ny, int sign) {
    const std::uint64_t key = key3(nx, ny, sign == FFTW_FORWARD ? 1 : 0) | (1ull << 63);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    CVec scratch(static_cast<Eigen::Index>(nx) * ny);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft_2d(ny, nx, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  // In-place batched 1-D transform along the column index of an
  // (n_pixels x nt) column-major matrix: length nt, stride n_pixels.
  fftw_plan plan_time(int nt, Eigen::Index n_pixels, int sign) {
    const std::uint64_t key =
        key3(nt, static_cast<int>(n_pixels), sign == FFTW_FORWARD ? 1 : 0);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    CMat scratch(n_pixels, nt);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    int n[] = {nt};
    fftw_plan p = fftw_plan_many_dft(1, n, static_cast<int>(n_pixels), buf, nullptr,
                                     static_cast<int>(n_pixels), 1, buf, nullptr,
                                     static_cast<int>(n_pixels), 1, sign,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  static std::uint64_t key3(int a, int b, int c) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 33) ^
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b)) << 1) ^
           static_cast<std::uint64_t>(c);
  }

  std::mutex mutex_;
  std::unordered_map<std::uint64_t, fftw_plan> plans_;
};

void execute_inplace(fftw_plan p, Complex* data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, buf, buf);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_sens(const CoilSensitivities& sens, int nx, int ny) {
  require(sens.nx == nx, "encode: sensitivity nx (" + std::to_string(sens.nx) +
                             ") does not match image nx (" + std::to_string(nx) + ")");
  require(sens.ny == ny, "encode: sensitivity ny (" + std::to_string(sens.ny) +
                             ") does not match image ny (" + std::to_string(ny) + ")");
}

}  // namespace

KTData encode(const ImageSequence& x, const CoilSensitivities& sens, const SamplingMask& mask) {
  check_sens(sens, x.nx, x.ny);
  require(mask.nx == x.nx && mask.ny == x.ny,
          "encode: mask spatial dimensions do not match image");
  require(mask.nt == x.nt, "encode: mask frame count (" + std::to_string(mask.nt) +
                               ") does not match image nt (" + std::to_string(x.nt) + ")");

  const Eigen::Index np = static_cast<Eigen::Index>(x.nx) * x.ny;
  const double scale = 1.0 / std::sqrt(static_cast<double>(np));
  fftw_plan fwd = PlanCache::instance().plan2d(x.nx, x.ny, FFTW_FORWARD);

  CMat samples(np, static_cast<Eigen::Index>(x.nt) * sens.nc);
  CVec work(np);
  for (int c = 0; c < sens.nc; ++c) {
    for (int t = 0; t < x.nt; ++t) {
      work = sens.maps.col(c).cwiseProduct(x.data.col(t));
      execute_inplace(fwd, work.data());
      auto col = samples.col(static_cast<Eigen::Index>(t) + static_cast<Eigen::Index>(x.nt) * c);
      const std::size_t base = static_cast<std::size_t>(np) * t;
      for (Eigen::Index p = 0; p < np; ++p) {
        col(p) = mask.keep[base + p] ? work(p) * scale : Complex(0.0, 0.0);
      }
    }
  }
  return KTData(std::move(samples), mask, sens.nc);
}

ImageSequence adjoint_encode(const KTData& y, const CoilSensitivities& sens) {
  check_sens(sens, y.nx(), y.ny());
  require(sens.nc == y.nc, "adjoint_encode: coil count mismatch (" + std::to_string(sens.nc) +
                               " vs " + std::to_string(y.nc) + ")");

  const Eigen::Index np = static_cast<Eigen::Index>(y.nx()) * y.ny();
  const double scale = 1.0 / std::sqrt(static_cast<double>(np));
  fftw_plan bwd = PlanCache::instance().plan2d(y.nx(), y.ny(), FFTW_BACKWARD);

  ImageSequence out(y.nx(), y.ny(), y.nt());
  CVec work(np);
  for (int t = 0; t < y.nt(); ++t) {
    const std::size_t base = static_cast<std::size_t>(np) * t;
    for (int c = 0; c < y.nc; ++c) {
      auto col = y.samples.col(y.col(t, c));
      for (Eigen::Index p = 0; p < np; ++p) {
        work(p) = y.mask.keep[base + p] ? col(p) : Complex(0.0, 0.0);
      }
      execute_inplace(bwd, work.data());
      out.data.col(t).noalias() +=
          sens.maps.col(c).conjugate().cwiseProduct(work) * scale;
    }
  }
  return out;
}

namespace {

ImageSequence temporal_transform(const ImageSequence& x, int sign) {
  if (x.nt == 1) return x;  // length-1 unitary DFT is the identity
  const Eigen::Index np = static_cast<Eigen::Index>(x.nx) * x.ny;
  fftw_plan p = PlanCache::instance().plan_time(x.nt, np, sign);
  ImageSequence out = x;
  execute_inplace(p, out.data.data());
  out.data *= 1.0 / std::sqrt(static_cast<double>(x.nt));
  return out;
}

}  // namespace

ImageSequence temporal_fft(const ImageSequence& x) { return temporal_transform(x, FFTW_FORWARD); }

ImageSequence temporal_ifft(const ImageSequence& z) {
  return temporal_transform(z, FFTW_BACKWARD);
}

DiffImage diff_apply(const ImageSequence& L) {
  require(L.nt >= 2, "diff_apply: nt must be >= 2, got " + std::to_string(L.nt));
  DiffImage out(L.nx, L.ny, L.nt - 1);
  for (int t = 0; t + 1 < L.nt; ++t) {
    out.data.col(t) = L.data.col(t + 1) - L.data.col(t);
  }
  return out;
}

ImageSequence diff_adjoint(const DiffImage& phi, int nt) {
  require(nt >= 2, "diff_adjoint: nt must be >= 2, got " + std::to_string(nt));
  require(phi.data.cols() == nt - 1,
          "diff_adjoint: phi has " + std::to_string(phi.data.cols()) +
              " columns, expected nt-1 = " + std::to_string(nt - 1));
  ImageSequence out(phi.nx, phi.ny, nt);
  out.data.col(0) = -phi.data.col(0);
  for (int t = 1; t + 1 < nt; ++t) {
    out.data.col(t) = phi.data.col(t - 1) - phi.data.col(t);
  }
  out.data.col(nt - 1) = phi.data.col(nt - 2);
  return out;
}

}  // namespace ktrecon
