#include "ktrecon/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/QR>

#include "ktrecon/operators.hpp"
#include "ktrecon/rng.hpp"

namespace ktrecon {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Distinct RNG streams per generated artifact, so e.g. regenerating a mask
// with the same seed never shifts the phantom content.
enum Stream : std::uint64_t {
  kStreamBackground = 1,
  kStreamDynamic = 2,
  kStreamSens = 3,
  kStreamMask = 4,
  kStreamNoise = 5,
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Smooth spatial field: a few randomly placed anisotropic Gaussian bumps on
// top of a broad base ellipse, with a gentle linear phase ramp.
CVec smooth_spatial_map(int nx, int ny, Rng& rng, bool with_base) {
  CVec field = CVec::Zero(static_cast<Eigen::Index>(nx) * ny);
  const double cx0 = 0.5 * (nx - 1), cy0 = 0.5 * (ny - 1);

  struct Bump {
    double cx, cy, sx, sy, amp;
  };
  std::vector<Bump> bumps;
  if (with_base) {
    bumps.push_back({cx0, cy0, 0.38 * nx, 0.30 * ny, 1.0});
  }
  const int extra = 3;
  for (int j = 0; j < extra; ++j) {
    bumps.push_back({rng.uniform(0.25 * nx, 0.75 * nx), rng.uniform(0.25 * ny, 0.75 * ny),
                     rng.uniform(0.12, 0.3) * nx, rng.uniform(0.12, 0.3) * ny,
                     rng.uniform(0.4, 1.0)});
  }
  const double px = rng.uniform(-0.5, 0.5) * kPi / nx;
  const double py = rng.uniform(-0.5, 0.5) * kPi / ny;
  const double phase0 = rng.uniform(0.0, 2.0 * kPi);

  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      double v = 0.0;
      for (const auto& b : bumps) {
        const double dx = (x - b.cx) / b.sx;
        const double dy = (y - b.cy) / b.sy;
        v += b.amp * std::exp(-0.5 * (dx * dx + dy * dy));
      }
      const double ph = phase0 + px * x + py * y;
      field(x + static_cast<Eigen::Index>(nx) * y) = Complex(v * std::cos(ph), v * std::sin(ph));
    }
  }
  return field;
}

}  // namespace

void PhantomSpec::validate() const {
  require(nx >= 1 && ny >= 1, "PhantomSpec: nx, ny must be >= 1");
  require(nt >= 2, "PhantomSpec: nt must be >= 2");
  require(nc >= 1, "PhantomSpec: nc must be >= 1");
  require(rank_background >= 1, "PhantomSpec: rank_background must be >= 1");
  require(rank_background <= std::min<long long>(static_cast<long long>(nx) * ny, nt),
          "PhantomSpec: rank_background must be <= min(nx*ny, nt)");
  require(n_dynamic_blobs >= 0, "PhantomSpec: n_dynamic_blobs must be >= 0");
  require(noise_sigma >= 0.0, "PhantomSpec: noise_sigma must be >= 0");
}

PhantomTruth make_phantom(const PhantomSpec& spec) {
  spec.validate();
  const int nx = spec.nx, ny = spec.ny, nt = spec.nt;
  const Eigen::Index np = static_cast<Eigen::Index>(nx) * ny;
  const int r = spec.rank_background;

  // --- Background L*: orthonormal smooth spatial/temporal factors with a
  // prescribed decaying spectrum, so the rank and singular values are exact.
  Rng rng_bg(spec.seed, kStreamBackground);
  CMat U(np, r);
  for (int i = 0; i < r; ++i) {
    U.col(i) = smooth_spatial_map(nx, ny, rng_bg, i == 0);
  }
  RMat V(nt, r);
  V.col(0).setOnes();
  for (int i = 1; i < r; ++i) {
    const double freq = rng_bg.uniform(0.3, 1.2);
    const double phase = rng_bg.uniform(0.0, 2.0 * kPi);
    const double drift = rng_bg.uniform(-0.3, 0.3);
    for (int t = 0; t < nt; ++t) {
      const double s = static_cast<double>(t) / nt;
      V(t, i) = std::sin(2.0 * kPi * freq * s + phase) + drift * s;
    }
  }

  Eigen::HouseholderQR<CMat> qr_u(U);
  CMat Qu = qr_u.householderQ() * CMat::Identity(np, r);
  Eigen::HouseholderQR<RMat> qr_v(V);
  RMat Qv = qr_v.householderQ() * RMat::Identity(nt, r);

  RVec weights(r);
  for (int i = 0; i < r; ++i) weights(i) = std::pow(0.55, i);

  CMat L = Qu * weights.asDiagonal() * Qv.transpose().cast<Complex>();

  // --- Dynamic S*: compact blobs with abrupt on/off windows. The per-blob
  // support radius is capped so every frame stays at most 10% nonzero.
  Rng rng_dyn(spec.seed, kStreamDynamic);
  CMat S = CMat::Zero(np, nt);
  if (spec.n_dynamic_blobs > 0) {
    const double budget =
        0.10 * static_cast<double>(np) / static_cast<double>(spec.n_dynamic_blobs);
    const double r_cap = std::sqrt(budget / kPi);
    for (int b = 0; b < spec.n_dynamic_blobs; ++b) {
      const double margin = std::min(3.0, 0.2 * std::min(nx, ny));
      const double cx = rng_dyn.uniform(margin, nx - 1 - margin);
      const double cy = rng_dyn.uniform(margin, ny - 1 - margin);
      const double sigma_b = rng_dyn.uniform(0.8, 1.4);
      const double radius = std::min(2.5 * sigma_b, r_cap);
      const double amp = rng_dyn.uniform(0.3, 0.7);
      const double ph = rng_dyn.uniform(0.0, 2.0 * kPi);
      const Complex a = amp * Complex(std::cos(ph), std::sin(ph));

      const int max_len = std::max(2, nt / 2);
      const int len = 2 + static_cast<int>(rng_dyn.below(static_cast<std::uint64_t>(
                              std::max(1, max_len - 1))));
      const int t0 = static_cast<int>(rng_dyn.below(static_cast<std::uint64_t>(nt - len + 1)));

      for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
          const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
          if (d2 > radius * radius) continue;
          const Complex v = a * std::exp(-0.5 * d2 / (sigma_b * sigma_b));
          for (int t = t0; t < t0 + len; ++t) {
            S(x + static_cast<Eigen::Index>(nx) * y, t) += v;
          }
        }
      }
    }
  }

  // Normalize so the combined sequence peaks at magnitude 1.
  CMat X = L + S;
  const double peak = X.cwiseAbs().maxCoeff();
  if (peak > 0.0) {
    L /= peak;
    S /= peak;
    X /= peak;
  }

  PhantomTruth truth;
  truth.L_star = ImageSequence(std::move(L), nx, ny, nt);
  truth.S_star = ImageSequence(std::move(S), nx, ny, nt);
  truth.X_star = ImageSequence(std::move(X), nx, ny, nt);
  truth.sens = make_sensitivities(nx, ny, spec.nc, spec.seed);
  truth.spec = spec;
  return truth;
}

CoilSensitivities make_sensitivities(int nx, int ny, int nc, std::uint64_t seed) {
  require(nx >= 1 && ny >= 1, "make_sensitivities: nx, ny must be >= 1");
  require(nc >= 1, "make_sensitivities: nc must be >= 1");

  Rng rng(seed, kStreamSens);
  const Eigen::Index np = static_cast<Eigen::Index>(nx) * ny;
  CMat maps(np, nc);
  const double cx0 = 0.5 * (nx - 1), cy0 = 0.5 * (ny - 1);
  const double ring = 0.75 * std::max(nx, ny);   // outside the FOV
  const double width = 0.60 * std::max(nx, ny);  // Gaussian falloff

  for (int c = 0; c < nc; ++c) {
    const double angle = 2.0 * kPi * c / nc;
    const double ccx = cx0 + ring * std::cos(angle);
    const double ccy = cy0 + ring * std::sin(angle);
    const double px = rng.uniform(-0.4, 0.4) * kPi / nx;
    const double py = rng.uniform(-0.4, 0.4) * kPi / ny;
    const double phase0 = rng.uniform(0.0, 2.0 * kPi);
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        const double d2 = (x - ccx) * (x - ccx) + (y - ccy) * (y - ccy);
        const double mag = std::exp(-0.5 * d2 / (width * width));
        const double ph = phase0 + px * x + py * y;
        maps(x + static_cast<Eigen::Index>(nx) * y, c) =
            mag * Complex(std::cos(ph), std::sin(ph));
      }
    }
  }

  // Pixel-wise unit sum-of-squares normalization.
  for (Eigen::Index p = 0; p < np; ++p) {
    double ssq = 0.0;
    for (int c = 0; c < nc; ++c) ssq += std::norm(maps(p, c));
    maps.row(p) /= std::sqrt(ssq);
  }
  return CoilSensitivities(std::move(maps), nx, ny, nc);
}

SamplingMask make_mask(int nx, int ny, int nt, double acceleration, int center_lines,
                       std::uint64_t seed) {
  require(nx >= 1 && ny >= 1 && nt >= 1, "make_mask: dimensions must be >= 1");
  require(acceleration > 1.0, "make_mask: acceleration must be > 1");
  require(center_lines >= 0 && center_lines <= ny,
          "make_mask: center_lines must lie in [0, ny]");

  // Budget of ky lines kept per frame.
  const int n_keep = std::max(1, static_cast<int>(std::llround(ny / acceleration)));
  require(center_lines <= n_keep,
          "make_mask: center_lines (" + std::to_string(center_lines) +
              ") exceed the per-frame line budget (" + std::to_string(n_keep) + ")");

  // Lines ordered by |signed frequency|: 0, +1, -1, +2, -2, ...
  const int kmax = ny / 2;
  auto signed_freq = [&](int line) { return line <= ny / 2 ? line : line - ny; };
  std::vector<int> by_freq(ny);
  std::iota(by_freq.begin(), by_freq.end(), 0);
  std::sort(by_freq.begin(), by_freq.end(), [&](int a, int b) {
    const int fa = signed_freq(a), fb = signed_freq(b);
    if (std::abs(fa) != std::abs(fb)) return std::abs(fa) < std::abs(fb);
    return fa > fb;  // positive frequency before negative at equal magnitude
  });

  std::vector<char> mandatory(ny, 0);
  mandatory[0] = 1;  // DC always kept
  for (int i = 0; i < center_lines; ++i) mandatory[by_freq[i]] = 1;
  int n_mandatory = 0;
  for (char m : mandatory) n_mandatory += m;

  // Variable-density weights for the remaining lines.
  std::vector<double> weight(ny);
  for (int line = 0; line < ny; ++line) {
    const double f = std::abs(signed_freq(line));
    const double ratio = kmax > 0 ? f / kmax : 0.0;
    weight[line] = std::pow(1.0 + ratio, -2.0);
  }

  Rng rng(seed, kStreamMask);
  SamplingMask mask(nx, ny, nt, acceleration);
  for (int t = 0; t < nt; ++t) {
    std::vector<char> chosen = mandatory;
    int remaining = n_keep - n_mandatory;
    std::vector<double> w = weight;
    for (int line = 0; line < ny; ++line) {
      if (chosen[line]) w[line] = 0.0;
    }
    while (remaining > 0) {
      double total = std::accumulate(w.begin(), w.end(), 0.0);
      double pick = rng.uniform() * total;
      int line = 0;
      for (; line < ny - 1; ++line) {
        if (pick < w[line]) break;
        pick -= w[line];
      }
      while (w[line] == 0.0) line = (line + 1) % ny;  // guard against roundoff
      chosen[line] = 1;
      w[line] = 0.0;
      --remaining;
    }
    for (int y = 0; y < ny; ++y) {
      if (!chosen[y]) continue;
      for (int x = 0; x < nx; ++x) mask.set(x, y, t, true);
    }
  }
  mask.validate();
  return mask;
}

KTData simulate_acquisition(const PhantomTruth& truth, const SamplingMask& mask) {
  KTData y = encode(truth.X_star, truth.sens, mask);
  const double sigma = truth.spec.noise_sigma;
  if (sigma > 0.0) {
    Rng rng(truth.spec.seed, kStreamNoise);
    const double component = sigma / std::sqrt(2.0);
    const Eigen::Index np = static_cast<Eigen::Index>(mask.nx) * mask.ny;
    for (int c = 0; c < y.nc; ++c) {
      for (int t = 0; t < mask.nt; ++t) {
        auto col = y.samples.col(y.col(t, c));
        const std::size_t base = static_cast<std::size_t>(np) * t;
        for (Eigen::Index p = 0; p < np; ++p) {
          if (!mask.keep[base + p]) continue;
          col(p) += Complex(component * rng.gaussian(), component * rng.gaussian());
        }
      }
    }
  }
  return y;
}

}  // namespace ktrecon
