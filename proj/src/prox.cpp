#include "ktrecon/prox.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace ktrecon {

int SingularSpectrum::rank(double tol) const {
  if (values.size() == 0) return 0;
  const double cutoff = tol * values(0);
  int r = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > cutoff) ++r;
  }
  return r;
}

CMat soft_threshold(const CMat& z, double tau) {
  if (tau < 0.0) throw std::invalid_argument("soft_threshold: tau must be >= 0");
  CMat out(z.rows(), z.cols());
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const Complex v = z(i, j);
      const double m = std::abs(v);
      out(i, j) = (m > tau) ? v * ((m - tau) / m) : Complex(0.0, 0.0);
    }
  }
  return out;
}

std::pair<CMat, SingularSpectrum> svt(const CMat& Z, double tau) {
  if (tau < 0.0) throw std::invalid_argument("svt: tau must be >= 0");
  if (!Z.allFinite()) throw std::invalid_argument("svt: matrix has non-finite entries");

  Eigen::JacobiSVD<CMat> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& sigma = svd.singularValues();

  // Only components above the threshold survive; rebuild from those alone.
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > tau) ++r;

  CMat out;
  if (r == 0) {
    out = CMat::Zero(Z.rows(), Z.cols());
  } else {
    RVec kept = sigma.head(r).array() - tau;
    out = svd.matrixU().leftCols(r) * kept.asDiagonal() *
          svd.matrixV().leftCols(r).adjoint();
  }
  return {std::move(out), SingularSpectrum{sigma}};
}

SingularSpectrum singular_values(const CMat& Z) {
  if (!Z.allFinite()) throw std::invalid_argument("singular_values: matrix has non-finite entries");
  Eigen::JacobiSVD<CMat> svd(Z);
  return SingularSpectrum{svd.singularValues()};
}

}  // namespace ktrecon
