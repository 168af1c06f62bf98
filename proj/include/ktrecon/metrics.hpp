#pragma once

#include <vector>

#include "ktrecon/types.hpp"

namespace ktrecon {

/// Quantitative comparison of a reconstruction against a reference. All
/// metrics act on pixel magnitudes. Identical inputs score (+inf, +inf, 1, 0).
struct MetricsReport {
  double ser_db = 0.0;
  double psnr_db = 0.0;  // frame-averaged
  double ssim = 0.0;     // frame-averaged
  double hfen = 0.0;
  std::vector<double> psnr_per_frame;
  std::vector<double> ssim_per_frame;
};

/// Signal-to-error ratio in dB over the whole sequence:
/// 20 log10(||ref|| / |||ref| - |rec|||).
double ser(const ImageSequence& ref, const ImageSequence& rec);

/// Frame-averaged PSNR in dB with the peak taken as max |ref| over the whole
/// sequence.
double psnr(const ImageSequence& ref, const ImageSequence& rec);

/// Frame-averaged mean SSIM: Gaussian window 11x11 (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, dynamic range max |ref|; windows are evaluated where they fit
/// entirely inside the frame.
double ssim(const ImageSequence& ref, const ImageSequence& rec);

/// High-frequency error norm: Laplacian-of-Gaussian filtered (15x15,
/// sigma 1.5, zero padding) magnitude difference over all frames, normalized
/// by the filtered reference.
double hfen(const ImageSequence& ref, const ImageSequence& rec);

/// Laplacian-of-Gaussian kernel of odd size: the radial LoG profile shifted
/// to sum exactly zero and scaled to unit Frobenius norm.
RMat log_kernel(int size, double sigma);

/// All four metrics plus the per-frame PSNR/SSIM breakdowns.
MetricsReport compute_metrics(const ImageSequence& ref, const ImageSequence& rec);

}  // namespace ktrecon
