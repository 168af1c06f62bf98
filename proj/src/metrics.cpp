#include "ktrecon/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ktrecon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_same_dims(const ImageSequence& ref, const ImageSequence& rec, const char* op) {
  if (ref.nx != rec.nx || ref.ny != rec.ny || ref.nt != rec.nt) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(ref.nx) + "x" + std::to_string(ref.ny) + "x" +
                                std::to_string(ref.nt) + " vs " + std::to_string(rec.nx) + "x" +
                                std::to_string(rec.ny) + "x" + std::to_string(rec.nt) + ")");
  }
}

// Magnitude of frame t as an ny x nx matrix (row y, column x).
RMat frame_magnitude(const ImageSequence& seq, int t) {
  RMat m(seq.ny, seq.nx);
  for (int y = 0; y < seq.ny; ++y) {
    for (int x = 0; x < seq.nx; ++x) m(y, x) = std::abs(seq.at(x, y, t));
  }
  return m;
}

RMat gaussian_window(int size, double sigma) {
  RMat w(size, size);
  const int h = size / 2;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x - h, dy = y - h;
      w(y, x) = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  }
  w /= w.sum();
  return w;
}

// 'same'-size 2-D convolution with zero padding (the kernel is symmetric, so
// convolution and correlation coincide).
RMat conv2_same(const RMat& img, const RMat& kernel) {
  const int rows = static_cast<int>(img.rows());
  const int cols = static_cast<int>(img.cols());
  const int kh = static_cast<int>(kernel.rows()) / 2;
  const int kw = static_cast<int>(kernel.cols()) / 2;
  RMat out = RMat::Zero(rows, cols);
  for (int y = 0; y < rows; ++y) {
    const int ky_lo = std::max(-kh, -y), ky_hi = std::min(kh, rows - 1 - y);
    for (int x = 0; x < cols; ++x) {
      const int kx_lo = std::max(-kw, -x), kx_hi = std::min(kw, cols - 1 - x);
      double acc = 0.0;
      for (int ky = ky_lo; ky <= ky_hi; ++ky) {
        for (int kx = kx_lo; kx <= kx_hi; ++kx) {
          acc += img(y + ky, x + kx) * kernel(kh + ky, kw + kx);
        }
      }
      out(y, x) = acc;
    }
  }
  return out;
}

double ssim_frame(const RMat& ref, const RMat& rec, const RMat& window, double c1, double c2) {
  const int size = static_cast<int>(window.rows());
  const int rows = static_cast<int>(ref.rows());
  const int cols = static_cast<int>(ref.cols());
  double total = 0.0;
  long count = 0;
  for (int y = 0; y + size <= rows; ++y) {
    for (int x = 0; x + size <= cols; ++x) {
      double mx = 0.0, my = 0.0;
      for (int wy = 0; wy < size; ++wy) {
        for (int wx = 0; wx < size; ++wx) {
          mx += window(wy, wx) * ref(y + wy, x + wx);
          my += window(wy, wx) * rec(y + wy, x + wx);
        }
      }
      double vx = 0.0, vy = 0.0, cov = 0.0;
      for (int wy = 0; wy < size; ++wy) {
        for (int wx = 0; wx < size; ++wx) {
          const double a = ref(y + wy, x + wx) - mx;
          const double b = rec(y + wy, x + wx) - my;
          vx += window(wy, wx) * a * a;
          vy += window(wy, wx) * b * b;
          cov += window(wy, wx) * a * b;
        }
      }
      total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace

double ser(const ImageSequence& ref, const ImageSequence& rec) {
  check_same_dims(ref, rec, "ser");
  double signal = 0.0, error = 0.0;
  for (int t = 0; t < ref.nt; ++t) {
    for (Eigen::Index p = 0; p < ref.data.rows(); ++p) {
      const double a = std::abs(ref.data(p, t));
      const double b = std::abs(rec.data(p, t));
      signal += a * a;
      error += (a - b) * (a - b);
    }
  }
  if (signal == 0.0) throw std::invalid_argument("ser: reference is all zero");
  if (error == 0.0) return kInf;
  return 20.0 * std::log10(std::sqrt(signal) / std::sqrt(error));
}

double psnr(const ImageSequence& ref, const ImageSequence& rec) {
  check_same_dims(ref, rec, "psnr");
  const double peak = ref.data.cwiseAbs().maxCoeff();
  if (peak == 0.0) throw std::invalid_argument("psnr: reference is all zero");
  double total = 0.0;
  for (int t = 0; t < ref.nt; ++t) {
    double mse = 0.0;
    for (Eigen::Index p = 0; p < ref.data.rows(); ++p) {
      const double d = std::abs(ref.data(p, t)) - std::abs(rec.data(p, t));
      mse += d * d;
    }
    mse /= static_cast<double>(ref.data.rows());
    if (mse == 0.0) return kInf;
    total += 10.0 * std::log10(peak * peak / mse);
  }
  return total / ref.nt;
}

double ssim(const ImageSequence& ref, const ImageSequence& rec) {
  check_same_dims(ref, rec, "ssim");
  if (ref.nx < 11 || ref.ny < 11) {
    throw std::invalid_argument("ssim: frames must be at least 11x11");
  }
  if ((ref.data - rec.data).squaredNorm() == 0.0) return 1.0;
  const double range = ref.data.cwiseAbs().maxCoeff();
  if (range == 0.0) throw std::invalid_argument("ssim: reference is all zero");
  const double c1 = (0.01 * range) * (0.01 * range);
  const double c2 = (0.03 * range) * (0.03 * range);
  const RMat window = gaussian_window(11, 1.5);
  double total = 0.0;
  for (int t = 0; t < ref.nt; ++t) {
    total += ssim_frame(frame_magnitude(ref, t), frame_magnitude(rec, t), window, c1, c2);
  }
  return total / ref.nt;
}

double hfen(const ImageSequence& ref, const ImageSequence& rec) {
  check_same_dims(ref, rec, "hfen");
  if (ref.nx < 15 || ref.ny < 15) {
    throw std::invalid_argument("hfen: frames must be at least 15x15");
  }
  const RMat kernel = log_kernel(15, 1.5);
  double num = 0.0, den = 0.0;
  for (int t = 0; t < ref.nt; ++t) {
    const RMat fr = conv2_same(frame_magnitude(ref, t), kernel);
    const RMat fc = conv2_same(frame_magnitude(rec, t), kernel);
    num += (fc - fr).squaredNorm();
    den += fr.squaredNorm();
  }
  if (num == 0.0) return 0.0;
  if (den == 0.0) throw std::invalid_argument("hfen: filtered reference is all zero");
  return std::sqrt(num) / std::sqrt(den);
}

RMat log_kernel(int size, double sigma) {
  if (size < 3 || size % 2 == 0) {
    throw std::invalid_argument("log_kernel: size must be odd and >= 3");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("log_kernel: sigma must be > 0");
  RMat k(size, size);
  const int h = size / 2;
  const double s2 = sigma * sigma;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double r2 = static_cast<double>((x - h) * (x - h) + (y - h) * (y - h));
      k(y, x) = (r2 - 2.0 * s2) / (s2 * s2) * std::exp(-r2 / (2.0 * s2));
    }
  }
  k.array() -= k.mean();  // zero response to constants
  k /= k.norm();
  return k;
}

MetricsReport compute_metrics(const ImageSequence& ref, const ImageSequence& rec) {
  check_same_dims(ref, rec, "compute_metrics");
  MetricsReport report;
  report.ser_db = ser(ref, rec);
  report.psnr_db = psnr(ref, rec);
  report.ssim = ssim(ref, rec);
  report.hfen = hfen(ref, rec);

  const double peak = ref.data.cwiseAbs().maxCoeff();
  const double range = peak;
  const double c1 = (0.01 * range) * (0.01 * range);
  const double c2 = (0.03 * range) * (0.03 * range);
  const RMat window = gaussian_window(11, 1.5);
  for (int t = 0; t < ref.nt; ++t) {
    double mse = 0.0;
    for (Eigen::Index p = 0; p < ref.data.rows(); ++p) {
      const double d = std::abs(ref.data(p, t)) - std::abs(rec.data(p, t));
      mse += d * d;
    }
    mse /= static_cast<double>(ref.data.rows());
    report.psnr_per_frame.push_back(mse == 0.0 ? kInf
                                               : 10.0 * std::log10(peak * peak / mse));
    if (ref.nx >= 11 && ref.ny >= 11) {
      report.ssim_per_frame.push_back(
          ssim_frame(frame_magnitude(ref, t), frame_magnitude(rec, t), window, c1, c2));
    }
  }
  return report;
}

}  // namespace ktrecon
