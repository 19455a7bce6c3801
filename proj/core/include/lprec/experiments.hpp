#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lprec/decode.hpp"
#include "lprec/types.hpp"

namespace lprec {

// Relative l2 error at or below this counts as a successful recovery.
// Stamped into every output that uses it.
inline constexpr double kDefaultSuccessThreshold = 1e-3;

struct ConditionRow {
  double p = 0.0;
  double m = 0.0;
  double f = 0.0;
  double g = 0.0;
};

struct ConditionCurves {
  std::vector<ConditionRow> rows;
};

// Evaluates both sufficient-condition thresholds over a (p, m) grid.
ConditionCurves run_condition_curves(const std::vector<double>& p_list,
                                     const std::vector<double>& m_grid);
std::string to_csv(const ConditionCurves& t);

struct PhaseGrid {
  std::vector<Index> S_axis;
  std::vector<double> p_axis;
  Matrix cells;  // |S_axis| x |p_axis|; rates in [0,1], or 0/1 guarantees
  bool boolean_cells = false;
  Index trials_per_cell = 0;
  double success_threshold = 0.0;  // 0 when cells are guarantees
  std::uint64_t seed = 0;
};
std::string to_csv(const PhaseGrid& g);

// Estimates one delta profile for A, then marks each (S, p) cell with
// whether the profile certifies recovery. Cells where the profile is too
// short to examine any ratio are marked 0.
PhaseGrid run_theoretical_phase(const MeasurementMatrix& A,
                                const std::vector<Index>& S_range,
                                const std::vector<double>& p_range,
                                std::uint64_t mc_trials, std::uint64_t seed,
                                unsigned num_threads = 0);

// Draws one Gaussian matrix for the whole grid, then per (S, p, trial)
// plants a fresh S-sparse Gaussian signal, decodes, and scores success by
// relative l2 error against success_threshold. Solver failures count as
// failures.
PhaseGrid run_phase_diagram(Index M, Index N,
                            const std::vector<Index>& S_range,
                            const std::vector<double>& p_range, Index trials,
                            double success_threshold, std::uint64_t seed,
                            const SolveOptions& solver,
                            unsigned num_threads = 0);

enum class SweepMode { kCompressible, kNoise };
std::string sweep_mode_name(SweepMode m);

struct SweepTable {
  std::vector<double> lambda_axis;
  std::vector<double> p_axis;
  SweepMode mode = SweepMode::kCompressible;
  Matrix mean_error;  // |lambda_axis| x |p_axis|
  Index trials = 0;
  std::uint64_t seed = 0;
};
std::string to_csv(const SweepTable& t);

// One uniform-sphere matrix and one set of coefficient values per call;
// each trial re-randomizes the support (and, in noise mode, redraws the
// unit noise direction). compressible: x = x_T + lambda z_{T^c}, b = Ax,
// error vs x. noise: b = A x_T + lambda e, error vs x_T.
SweepTable run_robustness_sweep(Index M, Index N, Index S, SweepMode mode,
                                const std::vector<double>& lambda_axis,
                                const std::vector<double>& p_list,
                                Index trials, std::uint64_t seed,
                                const SolveOptions& solver,
                                unsigned num_threads = 0);

struct SnrTable {
  std::vector<double> q_axis;
  std::vector<double> p_axis;
  Matrix mean_snr_db;  // |q_axis| x |p_axis|
  Index num_matrices = 0;
  std::uint64_t seed = 0;
};
std::string to_csv(const SnrTable& t);

// One deterministic power-law signal per q; per matrix draw (uniform
// sphere) and per p, decode and record SNR; cells average over matrices.
SnrTable run_snr_grid(Index M, Index N, const std::vector<double>& q_list,
                      const std::vector<double>& p_list, Index num_matrices,
                      std::uint64_t seed, const SolveOptions& solver,
                      unsigned num_threads = 0);

// Runs a full figure analogue ("fig1", "fig2", "fig3", "fig4") at preset
// "desk" or "paper", writing CSV data plus a JSON config sidecar into
// out_dir. Returns the paths written. Reruns with the same arguments
// produce byte-identical files regardless of num_threads.
std::vector<std::string> run_experiment(const std::string& figure,
                                        const std::string& preset,
                                        const std::string& out_dir,
                                        std::uint64_t seed,
                                        unsigned num_threads = 0);

}  // namespace lprec
