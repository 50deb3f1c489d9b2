// ainp: audio inpainting over a (learned) Gabor dictionary, plus an
// autoregressive baseline and a reproducible evaluation sweep.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ainp/errors.hpp"
#include "ainp/harness.hpp"
#include "ainp/mask.hpp"
#include "ainp/metrics.hpp"
#include "ainp/solver.hpp"
#include "ainp/wav.hpp"

namespace {

// Process exit codes, one per error family.
constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitPlacement = 4;
constexpr int kExitNotAFrame = 5;
constexpr int kExitGapTooLong = 6;
constexpr int kExitEmptyNeighborhood = 7;
constexpr int kExitUndefinedReference = 8;

int exit_code_for(const std::exception& e) {
  const std::string category = ainp::classify_error(e);
  if (category == "invalid-argument") return kExitUsage;
  if (category == "io") return kExitIo;
  if (category == "placement") return kExitPlacement;
  if (category == "not-a-frame") return kExitNotAFrame;
  if (category == "gap-too-long") return kExitGapTooLong;
  if (category == "empty-neighborhood") return kExitEmptyNeighborhood;
  if (category == "undefined-reference") return kExitUndefinedReference;
  return kExitOther;
}

struct CommonOpts {
  std::string config_path;
  bool paper_defaults = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "Experiment config file (INI-style sections)");
  cmd->add_flag("--paper-defaults", opts.paper_defaults,
                "Reset window/learner/solver/baseline parameters to the "
                "built-in defaults, overriding the config file");
}

ainp::ExperimentConfig resolve_config(const CommonOpts& opts) {
  ainp::ExperimentConfig cfg;
  if (!opts.config_path.empty()) cfg = ainp::load_config(opts.config_path);
  if (opts.paper_defaults) {
    cfg.gabor = {};
    cfg.learn = {};
    cfg.solver = {};
    cfg.janssen = {};
    cfg.degrade = {};
  }
  return cfg;
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ainp::IoError("cannot open for writing: " + path);
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio inpainting toolkit"};
  app.require_subcommand(1);

  // degrade
  auto* degrade_cmd =
      app.add_subcommand("degrade", "Punch reproducible gaps into a signal");
  std::string deg_in, deg_out, deg_gaps_out;
  double deg_gap_ms = 20.0;
  int deg_num_gaps = 5;
  std::uint64_t deg_seed = 1;
  CommonOpts deg_opts;
  degrade_cmd->add_option("--in", deg_in, "Input WAV")->required();
  degrade_cmd->add_option("--out", deg_out, "Degraded WAV")->required();
  degrade_cmd->add_option("--gaps-out", deg_gaps_out,
                          "Gap spec JSON (default: <out>.gaps.json)");
  degrade_cmd->add_option("--gap-ms", deg_gap_ms, "Gap length in ms");
  degrade_cmd->add_option("--num-gaps", deg_num_gaps, "Number of gaps");
  degrade_cmd->add_option("--seed", deg_seed, "Placement seed");
  add_common(degrade_cmd, deg_opts);

  // inpaint
  auto* inpaint_cmd =
      app.add_subcommand("inpaint", "Restore the gaps of a degraded signal");
  std::string inp_in, inp_gaps, inp_out, inp_dict, inp_algo = "cp-learned";
  CommonOpts inp_opts;
  inpaint_cmd->add_option("--in", inp_in, "Degraded WAV")->required();
  inpaint_cmd->add_option("--gaps", inp_gaps, "Gap spec JSON")->required();
  inpaint_cmd->add_option("--out", inp_out, "Restored WAV")->required();
  inpaint_cmd->add_option("--algo", inp_algo,
                          "cp | cp-learned | janssen | zero-fill");
  inpaint_cmd->add_option("--dict", inp_dict,
                          "Precomputed deformation file (cp-learned only)");
  add_common(inpaint_cmd, inp_opts);

  // learn-dict
  auto* learn_cmd = app.add_subcommand(
      "learn-dict", "Learn a deformation from the frames around the gaps");
  std::string lrn_in, lrn_gaps, lrn_out;
  CommonOpts lrn_opts;
  learn_cmd->add_option("--in", lrn_in, "Degraded WAV")->required();
  learn_cmd->add_option("--gaps", lrn_gaps, "Gap spec JSON")->required();
  learn_cmd->add_option("--out", lrn_out, "Deformation output file")->required();
  add_common(learn_cmd, lrn_opts);

  // eval
  auto* eval_cmd = app.add_subcommand(
      "eval", "Score a restoration against the original, per gap");
  std::string ev_orig, ev_restored, ev_gaps, ev_out;
  eval_cmd->add_option("--orig", ev_orig, "Original WAV")->required();
  eval_cmd->add_option("--restored", ev_restored, "Restored WAV")->required();
  eval_cmd->add_option("--gaps", ev_gaps, "Gap spec JSON")->required();
  eval_cmd->add_option("--out", ev_out, "CSV output (default: stdout)");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Degrade, restore and score a corpus across gap sizes, seeds "
               "and algorithms");
  std::vector<std::string> sw_in;
  std::string sw_out = "results.csv", sw_agg;
  std::vector<double> sw_gap_ms;
  std::vector<std::uint64_t> sw_seeds;
  std::vector<std::string> sw_algos;
  int sw_num_gaps = -1, sw_jobs = 1;
  CommonOpts sw_opts;
  sweep_cmd->add_option("--in", sw_in, "Input WAVs")->required();
  sweep_cmd->add_option("--out", sw_out, "Per-gap CSV path");
  sweep_cmd->add_option("--agg-out", sw_agg,
                        "Aggregate CSV path (default: <out stem>_agg.csv)");
  sweep_cmd->add_option("--gap-ms", sw_gap_ms, "Gap lengths in ms");
  sweep_cmd->add_option("--seeds", sw_seeds, "Placement seeds");
  sweep_cmd->add_option("--num-gaps", sw_num_gaps, "Gaps per instance");
  sweep_cmd->add_option("--algo", sw_algos, "Algorithms to run");
  sweep_cmd->add_option("--jobs", sw_jobs, "Worker threads");
  add_common(sweep_cmd, sw_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (degrade_cmd->parsed()) {
      const ainp::ExperimentConfig cfg = resolve_config(deg_opts);
      const ainp::WavData in = ainp::read_wav(deg_in);
      const ainp::DegradeResult res = ainp::degrade(
          in.signal, deg_gap_ms, deg_num_gaps, deg_seed, cfg.degrade.guard_ms);
      ainp::write_wav(deg_out, res.degraded);
      const std::string gaps_path =
          deg_gaps_out.empty() ? deg_out + ".gaps.json" : deg_gaps_out;
      ainp::save_gap_spec(res.gaps, gaps_path);
      std::cout << "wrote " << deg_out << " and " << gaps_path << " ("
                << res.gaps.gaps.size() << " gaps)\n";
      return 0;
    }

    if (inpaint_cmd->parsed()) {
      const ainp::ExperimentConfig cfg = resolve_config(inp_opts);
      const ainp::Algo algo = ainp::parse_algo(inp_algo);
      const ainp::WavData in = ainp::read_wav(inp_in);
      const ainp::GapSpec gaps = ainp::load_gap_spec(inp_gaps);
      ainp::Deformation dict;
      const ainp::Deformation* dict_ptr = nullptr;
      if (!inp_dict.empty()) {
        if (algo != ainp::Algo::kCpLearned)
          throw std::invalid_argument("--dict requires --algo cp-learned");
        dict = ainp::load_deformation(inp_dict);
        dict_ptr = &dict;
      }
      const ainp::Signal restored =
          ainp::inpaint_signal(in.signal, gaps, algo, cfg, dict_ptr);
      ainp::write_wav(inp_out, restored);
      std::cout << "wrote " << inp_out << "\n";
      return 0;
    }

    if (learn_cmd->parsed()) {
      const ainp::ExperimentConfig cfg = resolve_config(lrn_opts);
      const ainp::WavData in = ainp::read_wav(lrn_in);
      const ainp::GapSpec gaps = ainp::load_gap_spec(lrn_gaps);
      const ainp::Deformation d = ainp::learn_dictionary(in.signal, gaps, cfg);
      ainp::save_deformation(d, lrn_out);
      std::cout << "wrote " << lrn_out << " (l1 " << d.report().initial_l11
                << " -> " << d.report().final_l11 << " in "
                << d.report().iterations << " passes)\n";
      return 0;
    }

    if (eval_cmd->parsed()) {
      const ainp::WavData orig = ainp::read_wav(ev_orig);
      const ainp::WavData restored = ainp::read_wav(ev_restored);
      const ainp::GapSpec gaps = ainp::load_gap_spec(ev_gaps);
      if (orig.signal.size() != restored.signal.size())
        throw std::invalid_argument("eval: signal lengths differ");
      const ainp::ReliabilityMask mask = ainp::build_mask(gaps);
      const ainp::SdrReport rep =
          ainp::sdr_on_gaps(orig.signal, restored.signal, mask);
      std::ostream* out = &std::cout;
      std::ofstream file;
      if (!ev_out.empty()) {
        file = open_out(ev_out);
        out = &file;
      }
      *out << "gap_id,start_sample,length_samples,sdr_db\n";
      char buf[64];
      for (std::size_t g = 0; g < rep.per_gap.size(); ++g) {
        const auto& gap = gaps.gaps[g];
        if (std::isinf(rep.per_gap[g]))
          std::snprintf(buf, sizeof buf, "inf");
        else
          std::snprintf(buf, sizeof buf, "%.10g", rep.per_gap[g]);
        *out << g << ',' << gap.start_sample << ',' << gap.length_samples
             << ',' << buf << '\n';
      }
      if (std::isinf(rep.overall_db))
        std::snprintf(buf, sizeof buf, "inf");
      else
        std::snprintf(buf, sizeof buf, "%.10g", rep.overall_db);
      *out << "overall,,," << buf << '\n';
      return 0;
    }

    if (sweep_cmd->parsed()) {
      ainp::ExperimentConfig cfg = resolve_config(sw_opts);
      if (!sw_gap_ms.empty()) cfg.gap_ms = sw_gap_ms;
      if (!sw_seeds.empty()) cfg.seeds = sw_seeds;
      if (!sw_algos.empty()) cfg.algos = sw_algos;
      if (sw_num_gaps >= 0) cfg.num_gaps = sw_num_gaps;

      std::vector<std::pair<std::string, ainp::Signal>> inputs;
      for (const auto& path : sw_in)
        inputs.emplace_back(stem_of(path), ainp::read_wav(path).signal);

      const ainp::SweepResult result = ainp::run_sweep(inputs, cfg, sw_jobs);

      std::ofstream rows = open_out(sw_out);
      ainp::write_sweep_rows(result, rows);
      std::string agg_path = sw_agg;
      if (agg_path.empty()) {
        std::filesystem::path p(sw_out);
        p.replace_extension();
        agg_path = p.string() + "_agg.csv";
      }
      std::ofstream agg = open_out(agg_path);
      ainp::write_sweep_aggregates(result, agg);
      std::cout << "wrote " << sw_out << " (" << result.rows.size()
                << " rows) and " << agg_path << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitUsage;
}
