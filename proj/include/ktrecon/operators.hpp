#pragma once

#include "ktrecon/types.hpp"

namespace ktrecon {

/// SENSE encoding E = F_u S_c: per frame and coil, coil-weight the image,
/// apply the unitary 2-D spatial DFT, and zero everything off the mask.
KTData encode(const ImageSequence& x, const CoilSensitivities& sens, const SamplingMask& mask);

/// Exact adjoint of encode: per frame, the conjugate-sensitivity-weighted sum
/// over coils of the inverse unitary 2-D DFT of the masked samples. Coils are
/// accumulated in ascending order so results do not depend on scheduling.
ImageSequence adjoint_encode(const KTData& y, const CoilSensitivities& sens);

/// Unitary 1-D DFT along the time axis of every pixel (the transform T).
ImageSequence temporal_fft(const ImageSequence& x);

/// Inverse (= adjoint) of temporal_fft.
ImageSequence temporal_ifft(const ImageSequence& z);

/// L D^T: column t of the result is frame t+1 minus frame t. Requires nt >= 2.
DiffImage diff_apply(const ImageSequence& L);

/// Phi D, the exact adjoint of diff_apply. The result has one more column
/// than phi.
ImageSequence diff_adjoint(const DiffImage& phi, int nt);

}  // namespace ktrecon
