#pragma once

#include <optional>
#include <vector>

#include "ktrecon/types.hpp"

namespace ktrecon {

enum class SmoothnessMode { L1, L2, None };

/// Weights and controls for the smoothness-regularized L+S solver.
/// Defaults are the empirically selected l1-mode set; l2 mode conventionally
/// runs with L_f = 5 instead of 3.
struct SolverConfig {
  double lambda_L = 0.01;   // nuclear-norm weight, > 0
  double lambda_S = 0.001;  // transform-sparsity weight, > 0
  double lambda_D = 0.01;   // smoothness weight, >= 0
  double mu = 1.0;          // relaxation, > 0
  double L_f = 3.0;         // proximal step constant, > 0
  SmoothnessMode smoothness_mode = SmoothnessMode::L1;
  int max_iter = 200;
  double tol = 1e-5;  // in (0, 1)
  // Test-parity switch: dropping the ||L D^T - Phi||^2 coupling term (together
  // with lambda_D = 0) makes L1 mode reduce exactly to the plain L+S baseline.
  bool coupling = true;

  void validate() const;  // throws std::invalid_argument
};

struct IterationRecord {
  int k = 0;              // 1-based iteration index
  double objective = 0.0;
  double rel_change = 0.0;
  int rank_L = 0;
  double sparsity_S = 0.0;  // fraction of transform entries below 1e-8 of max
};

struct ReconResult {
  ImageSequence L;
  ImageSequence S;
  ImageSequence X;  // L + S
  std::optional<DiffImage> phi;  // present only in L1 mode
  std::vector<IterationRecord> history;
  int iterations = 0;
  bool converged = false;
  bool descent_warning = false;  // objective rose by > 1e-6 relative; L_f too small
};

/// One solver iterate, exposed for white-box testing via step().
struct SolverState {
  ImageSequence L;
  ImageSequence S;
  DiffImage phi;  // zero-column placeholder outside L1 mode
  int k = 0;
};

/// Extra per-step outputs the iteration already has at hand.
struct StepDiagnostics {
  int rank_L = 0;
  double sparsity_S = 0.0;
};

/// Objective value of the configured mode:
///   L1   : (mu/2)||E(L+S)-y||^2 + 1/2||L D^T - Phi||_F^2
///          + mu(lambda_L ||L||_* + lambda_S ||T(S)||_1 + lambda_D ||Phi||_1)
///          (the coupling term is dropped when config.coupling is off)
///   L2   : 1/2||E(L+S)-y||^2 + lambda_L ||L||_* + lambda_S ||T(S)||_1
///          + lambda_D ||L D^T||_F^2
///   None : 1/2||E(L+S)-y||^2 + lambda_L ||L||_* + lambda_S ||T(S)||_1
/// phi must be non-null exactly in L1 mode.
double objective(const ImageSequence& L, const ImageSequence& S, const DiffImage* phi,
                 const KTData& y, const CoilSensitivities& sens, const SolverConfig& config);

/// Initial iterate: L0 = E^H(y), S0 = 0, Phi0 = 0.
SolverState make_initial_state(const KTData& y, const CoilSensitivities& sens,
                               const SolverConfig& config);

/// One proximal-gradient iteration of the configured mode. The residual
/// gradient M = E^H(E(L+S) - y) is recomputed from the current iterate.
void step(SolverState& state, const KTData& y, const CoilSensitivities& sens,
          const SolverConfig& config, StepDiagnostics* diag = nullptr);

/// Full reconstruction: initialization, repeated step(), and the Frobenius
/// stopping rule ||L_{k+1}+S_{k+1} - (L_k+S_k)||_F <= tol ||L_k+S_k||_F.
/// Throws DivergenceError if the objective turns non-finite.
ReconResult solve(const KTData& y, const CoilSensitivities& sens, const SolverConfig& config);

/// Plain L+S proximal-gradient baseline: solve() with smoothness disabled.
ReconResult solve_baseline_ls(const KTData& y, const CoilSensitivities& sens,
                              SolverConfig config);

}  // namespace ktrecon
