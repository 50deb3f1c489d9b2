#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ainp/deformation.hpp"
#include "ainp/mask.hpp"
#include "ainp/signal.hpp"

namespace ainp {

struct GaborParams {
  std::size_t window_len = 2800;
  std::size_t hop = 700;
  std::size_t modulations = 2800;
};

struct LearnParams {
  int iter_max = 20;
  int band_d = 1;
  double rho_start = 1.0;
  double eps = 0x1p-20;
  /// Clean frames taken from each side of a gap.
  std::size_t context_frames = 20;
  /// Learn one deformation per gap from its own neighborhood instead of a
  /// single shared one.
  bool per_gap = false;
};

struct SolverParams {
  double tau = 0.0;  // 0 = derive from the frame
  double sigma = 0.0;
  double tol_eps = 1e-8;
  int min_iters = 10;
  int max_iters = 3000;
};

struct JanssenParams {
  std::size_t window_len = 2800;
  std::size_t hop = 700;
  int iterations = 50;
};

struct DegradeParams {
  double guard_ms = 200.0;
};

struct ExperimentConfig {
  GaborParams gabor;
  LearnParams learn;
  SolverParams solver;
  JanssenParams janssen;
  DegradeParams degrade;
  std::vector<double> gap_ms = {5.0, 15.0, 25.0, 35.0, 45.0, 55.0};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int num_gaps = 5;
  std::vector<std::string> algos = {"cp", "cp-learned", "janssen", "zero-fill"};
};

/// Key = value lines under [gabor], [learn], [solver], [janssen], [degrade]
/// and [sweep] sections; '#' or ';' start comments. Unknown keys are errors.
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

/// Every field in a fixed order; input to config_hash.
std::string canonical_config_string(const ExperimentConfig& cfg);

/// FNV-1a 64-bit of the canonical dump, as 16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& cfg);

enum class Algo { kCp, kCpLearned, kJanssen, kZeroFill };

/// Accepts "cp", "cp-learned", "janssen", "zero-fill".
Algo parse_algo(const std::string& name);
std::string algo_name(Algo algo);

/// Least multiple of lcm(hop, modulations) that is >= len (and >= 1 period).
std::size_t padded_length(std::size_t len, std::size_t hop,
                          std::size_t modulations);

/// Restores the gaps of a degraded signal (gap samples are ignored and
/// treated as missing). Gabor-based algorithms run on a zero-padded copy
/// whose length the frame divides evenly; the pad is stripped afterwards.
/// `dict` optionally supplies a precomputed deformation for cp-learned.
Signal inpaint_signal(const Signal& degraded, const GapSpec& gaps, Algo algo,
                      const ExperimentConfig& cfg,
                      const Deformation* dict = nullptr);

/// Learns a deformation from the clean frames around the gaps, using the
/// same padding and frame construction as inpaint_signal.
Deformation learn_dictionary(const Signal& degraded, const GapSpec& gaps,
                             const ExperimentConfig& cfg);

struct SweepRow {
  std::string signal;
  std::string algo;
  double gap_ms = 0.0;
  std::uint64_t seed = 0;
  long gap_id = -1;  // -1 marks an error row
  double sdr_db = 0.0;
  std::string status;  // "ok" or an error category
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string hash;
};

/// Degrades each input per (gap_ms, seed), runs every configured algorithm
/// and scores each gap. Failures become rows with gap_id -1 and the error
/// category in `status`. Row order is deterministic and the output contains
/// no timestamps, so identical inputs give byte-identical CSVs.
SweepResult run_sweep(const std::vector<std::pair<std::string, Signal>>& inputs,
                      const ExperimentConfig& cfg, int jobs = 1);

/// signal,algo,gap_ms,seed,gap_id,sdr_db,status,config_hash per row.
void write_sweep_rows(const SweepResult& result, std::ostream& out);

/// algo,gap_ms,n,mean_sdr_db,median_sdr_db over the "ok" rows.
void write_sweep_aggregates(const SweepResult& result, std::ostream& out);

/// Maps the library's error types to the status categories used in CSVs and
/// as process exit codes.
std::string classify_error(const std::exception& e);

}  // namespace ainp
