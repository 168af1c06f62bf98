#include "ktrecon/solver.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "ktrecon/errors.hpp"
#include "ktrecon/operators.hpp"
#include "ktrecon/prox.hpp"

namespace ktrecon {

namespace {

double l1_norm(const CMat& z) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) s += std::abs(z(i, j));
  }
  return s;
}

double nuclear_norm(const CMat& z) { return singular_values(z).values.sum(); }

// Fraction of entries with magnitude below 1e-8 of the largest magnitude.
double transform_sparsity(const CMat& tz) {
  const double peak = tz.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 1.0;
  const double cutoff = 1e-8 * peak;
  Eigen::Index below = 0;
  for (Eigen::Index j = 0; j < tz.cols(); ++j) {
    for (Eigen::Index i = 0; i < tz.rows(); ++i) {
      if (std::abs(tz(i, j)) < cutoff) ++below;
    }
  }
  return static_cast<double>(below) / static_cast<double>(tz.size());
}

double fidelity(const ImageSequence& L, const ImageSequence& S, const KTData& y,
                const CoilSensitivities& sens) {
  ImageSequence X(L.data + S.data, L.nx, L.ny, L.nt);
  KTData ex = encode(X, sens, y.mask);
  return (ex.samples - y.samples).squaredNorm();
}

}  // namespace

void SolverConfig::validate() const {
  auto bad = [](const std::string& msg) { throw std::invalid_argument("SolverConfig: " + msg); };
  if (!(lambda_L > 0.0) || !std::isfinite(lambda_L)) bad("lambda_L must be finite and > 0");
  if (!(lambda_S > 0.0) || !std::isfinite(lambda_S)) bad("lambda_S must be finite and > 0");
  if (!(lambda_D >= 0.0) || !std::isfinite(lambda_D)) bad("lambda_D must be finite and >= 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) bad("mu must be finite and > 0");
  if (!(L_f > 0.0) || !std::isfinite(L_f)) bad("L_f must be finite and > 0");
  if (max_iter < 1) bad("max_iter must be >= 1");
  if (!(tol > 0.0 && tol < 1.0)) bad("tol must lie in (0, 1)");
}

double objective(const ImageSequence& L, const ImageSequence& S, const DiffImage* phi,
                 const KTData& y, const CoilSensitivities& sens, const SolverConfig& config) {
  config.validate();
  if (L.nx != S.nx || L.ny != S.ny || L.nt != S.nt) {
    throw std::invalid_argument("objective: L and S dimensions differ");
  }
  const bool l1 = config.smoothness_mode == SmoothnessMode::L1;
  if (l1 && phi == nullptr) {
    throw std::invalid_argument("objective: phi required in L1 mode");
  }
  if (!l1 && phi != nullptr) {
    throw std::invalid_argument("objective: phi must be absent outside L1 mode");
  }
  if (l1 && phi->data.cols() != L.nt - 1) {
    throw std::invalid_argument("objective: phi must have nt-1 columns");
  }

  const double fid = fidelity(L, S, y, sens);
  const double reg_L = config.lambda_L * nuclear_norm(L.data);
  const double reg_S = config.lambda_S * l1_norm(temporal_fft(S).data);

  switch (config.smoothness_mode) {
    case SmoothnessMode::L1: {
      double coupling = 0.0;
      if (config.coupling) {
        coupling = 0.5 * (diff_apply(L).data - phi->data).squaredNorm();
      }
      return 0.5 * config.mu * fid + coupling +
             config.mu * (reg_L + reg_S + config.lambda_D * l1_norm(phi->data));
    }
    case SmoothnessMode::L2:
      return 0.5 * fid + reg_L + reg_S + config.lambda_D * diff_apply(L).data.squaredNorm();
    case SmoothnessMode::None:
      return 0.5 * fid + reg_L + reg_S;
  }
  throw std::invalid_argument("objective: unknown smoothness mode");
}

SolverState make_initial_state(const KTData& y, const CoilSensitivities& sens,
                               const SolverConfig& config) {
  config.validate();
  if (config.smoothness_mode != SmoothnessMode::None && y.nt() < 2) {
    throw std::invalid_argument("solve: smoothness modes require nt >= 2");
  }
  SolverState st;
  st.L = adjoint_encode(y, sens);
  st.S = ImageSequence(y.nx(), y.ny(), y.nt());
  if (y.nt() >= 2) {
    st.phi = DiffImage(y.nx(), y.ny(), y.nt() - 1);
  }
  st.k = 0;
  return st;
}

void step(SolverState& state, const KTData& y, const CoilSensitivities& sens,
          const SolverConfig& config, StepDiagnostics* diag) {
  const double inv_Lf = 1.0 / config.L_f;
  const double mu = config.mu;

  // Residual gradient from the current iterate.
  ImageSequence X(state.L.data + state.S.data, state.L.nx, state.L.ny, state.L.nt);
  KTData ex = encode(X, sens, y.mask);
  ex.samples -= y.samples;
  ImageSequence M = adjoint_encode(ex, sens);

  CMat GL, GS;
  double tau_L = 0.0, tau_S = 0.0;
  switch (config.smoothness_mode) {
    case SmoothnessMode::L1: {
      GL = state.L.data - inv_Lf * mu * M.data;
      if (config.coupling) {
        const DiffImage ldt = diff_apply(state.L);
        GL -= inv_Lf * (diff_adjoint(ldt, state.L.nt).data -
                        diff_adjoint(state.phi, state.L.nt).data);
      }
      GS = state.S.data - (mu * inv_Lf) * M.data;
      tau_L = mu * config.lambda_L * inv_Lf;
      tau_S = mu * config.lambda_S * inv_Lf;

      CMat GPhi = state.phi.data;
      if (config.coupling) {
        GPhi -= inv_Lf * (state.phi.data - diff_apply(state.L).data);
      }
      state.phi.data = soft_threshold(GPhi, mu * config.lambda_D * inv_Lf);
      break;
    }
    case SmoothnessMode::L2: {
      const DiffImage ldt = diff_apply(state.L);
      GL = state.L.data -
           inv_Lf * (M.data + 2.0 * config.lambda_D * diff_adjoint(ldt, state.L.nt).data);
      GS = state.S.data - inv_Lf * M.data;
      tau_L = config.lambda_L * inv_Lf;
      tau_S = config.lambda_S * inv_Lf;
      break;
    }
    case SmoothnessMode::None: {
      GL = state.L.data - inv_Lf * M.data;
      GS = state.S.data - inv_Lf * M.data;
      tau_L = config.lambda_L * inv_Lf;
      tau_S = config.lambda_S * inv_Lf;
      break;
    }
  }

  auto [L_new, spectrum] = svt(GL, tau_L);
  state.L.data = std::move(L_new);

  ImageSequence GS_seq(std::move(GS), state.S.nx, state.S.ny, state.S.nt);
  ImageSequence TS = temporal_fft(GS_seq);
  TS.data = soft_threshold(TS.data, tau_S);
  if (diag != nullptr) {
    diag->sparsity_S = transform_sparsity(TS.data);
    // Spectrum of the new L: the thresholded singular values of GL.
    RVec shifted = (spectrum.values.array() - tau_L).max(0.0);
    diag->rank_L = SingularSpectrum{shifted}.rank();
  }
  state.S = temporal_ifft(TS);

  ++state.k;
}

ReconResult solve(const KTData& y, const CoilSensitivities& sens, const SolverConfig& config) {
  SolverState st = make_initial_state(y, sens, config);
  const bool l1 = config.smoothness_mode == SmoothnessMode::L1;

  ReconResult result;
  result.history.reserve(config.max_iter);

  CMat prev_sum = st.L.data + st.S.data;
  double obj_prev = std::numeric_limits<double>::infinity();

  for (int k = 1; k <= config.max_iter; ++k) {
    StepDiagnostics diag;
    step(st, y, sens, config, &diag);

    const CMat sum = st.L.data + st.S.data;
    const double delta = (sum - prev_sum).norm();
    const double denom = prev_sum.norm();

    const double obj =
        objective(st.L, st.S, l1 ? &st.phi : nullptr, y, sens, config);

    IterationRecord rec;
    rec.k = k;
    rec.objective = obj;
    rec.rel_change = denom > 0.0
                         ? delta / denom
                         : (delta == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    rec.rank_L = diag.rank_L;
    rec.sparsity_S = diag.sparsity_S;
    result.history.push_back(rec);

    if (!std::isfinite(obj)) {
      throw DivergenceError("objective is non-finite", k);
    }
    if (std::isfinite(obj_prev) && obj - obj_prev > 1e-6 * std::abs(obj_prev)) {
      if (!result.descent_warning) {
        std::cerr << "ktrecon: objective increased at iteration " << k
                  << "; consider a larger L_f\n";
      }
      result.descent_warning = true;
    }
    obj_prev = obj;

    if (delta <= config.tol * denom) {
      result.converged = true;
      prev_sum = sum;
      break;
    }
    prev_sum = sum;
  }

  result.iterations = st.k;
  result.L = std::move(st.L);
  result.S = std::move(st.S);
  result.X = ImageSequence(result.L.data + result.S.data, result.L.nx, result.L.ny, result.L.nt);
  if (l1) result.phi = std::move(st.phi);
  return result;
}

ReconResult solve_baseline_ls(const KTData& y, const CoilSensitivities& sens,
                              SolverConfig config) {
  config.smoothness_mode = SmoothnessMode::None;
  return solve(y, sens, config);
}

}  // namespace ktrecon
