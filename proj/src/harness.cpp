#include "ainp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ainp/errors.hpp"
#include "ainp/gabor.hpp"
#include "ainp/janssen.hpp"
#include "ainp/metrics.hpp"
#include "ainp/solver.hpp"
#include "ainp/wav.hpp"
#include "ainp/weights.hpp"

namespace ainp {

namespace {

std::string fmt_double(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_exact(double v) { return fmt_double(v, "%.17g"); }

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(v[i]);
  }
  return out;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_strings(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i];
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw IoError("config: bad number for " + key + ": '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw IoError("config: bad integer for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw IoError("config: bad boolean for " + key + ": '" + v + "'");
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  ExperimentConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw IoError("config: malformed section at line " +
                      std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError("config: expected key = value at line " +
                    std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;

    if (full == "gabor.window_len")
      cfg.gabor.window_len = static_cast<std::size_t>(parse_int(full, value));
    else if (full == "gabor.hop")
      cfg.gabor.hop = static_cast<std::size_t>(parse_int(full, value));
    else if (full == "gabor.modulations")
      cfg.gabor.modulations = static_cast<std::size_t>(parse_int(full, value));
    else if (full == "learn.iter_max")
      cfg.learn.iter_max = static_cast<int>(parse_int(full, value));
    else if (full == "learn.band_d")
      cfg.learn.band_d = static_cast<int>(parse_int(full, value));
    else if (full == "learn.rho_start")
      cfg.learn.rho_start = parse_double(full, value);
    else if (full == "learn.eps")
      cfg.learn.eps = parse_double(full, value);
    else if (full == "learn.context_frames")
      cfg.learn.context_frames =
          static_cast<std::size_t>(parse_int(full, value));
    else if (full == "learn.per_gap")
      cfg.learn.per_gap = parse_bool(full, value);
    else if (full == "solver.tau")
      cfg.solver.tau = parse_double(full, value);
    else if (full == "solver.sigma")
      cfg.solver.sigma = parse_double(full, value);
    else if (full == "solver.tol_eps")
      cfg.solver.tol_eps = parse_double(full, value);
    else if (full == "solver.min_iters")
      cfg.solver.min_iters = static_cast<int>(parse_int(full, value));
    else if (full == "solver.max_iters")
      cfg.solver.max_iters = static_cast<int>(parse_int(full, value));
    else if (full == "janssen.window_len")
      cfg.janssen.window_len = static_cast<std::size_t>(parse_int(full, value));
    else if (full == "janssen.hop")
      cfg.janssen.hop = static_cast<std::size_t>(parse_int(full, value));
    else if (full == "janssen.iterations")
      cfg.janssen.iterations = static_cast<int>(parse_int(full, value));
    else if (full == "degrade.guard_ms")
      cfg.degrade.guard_ms = parse_double(full, value);
    else if (full == "sweep.gap_ms") {
      cfg.gap_ms.clear();
      for (const auto& s : split_list(value))
        cfg.gap_ms.push_back(parse_double(full, s));
    } else if (full == "sweep.seeds") {
      cfg.seeds.clear();
      for (const auto& s : split_list(value))
        cfg.seeds.push_back(static_cast<std::uint64_t>(parse_int(full, s)));
    } else if (full == "sweep.num_gaps")
      cfg.num_gaps = static_cast<int>(parse_int(full, value));
    else if (full == "sweep.algos") {
      cfg.algos = split_list(value);
      for (const auto& a : cfg.algos) parse_algo(a);  // reject unknown names
    } else
      throw IoError("config: unknown key '" + full + "' at line " +
                    std::to_string(lineno));
  }
  return cfg;
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "[gabor]\n"
    << "window_len = " << cfg.gabor.window_len << "\n"
    << "hop = " << cfg.gabor.hop << "\n"
    << "modulations = " << cfg.gabor.modulations << "\n\n"
    << "[learn]\n"
    << "iter_max = " << cfg.learn.iter_max << "\n"
    << "band_d = " << cfg.learn.band_d << "\n"
    << "rho_start = " << fmt_exact(cfg.learn.rho_start) << "\n"
    << "eps = " << fmt_exact(cfg.learn.eps) << "\n"
    << "context_frames = " << cfg.learn.context_frames << "\n"
    << "per_gap = " << (cfg.learn.per_gap ? "true" : "false") << "\n\n"
    << "[solver]\n"
    << "tau = " << fmt_exact(cfg.solver.tau) << "\n"
    << "sigma = " << fmt_exact(cfg.solver.sigma) << "\n"
    << "tol_eps = " << fmt_exact(cfg.solver.tol_eps) << "\n"
    << "min_iters = " << cfg.solver.min_iters << "\n"
    << "max_iters = " << cfg.solver.max_iters << "\n\n"
    << "[janssen]\n"
    << "window_len = " << cfg.janssen.window_len << "\n"
    << "hop = " << cfg.janssen.hop << "\n"
    << "iterations = " << cfg.janssen.iterations << "\n\n"
    << "[degrade]\n"
    << "guard_ms = " << fmt_exact(cfg.degrade.guard_ms) << "\n\n"
    << "[sweep]\n"
    << "gap_ms = " << join_doubles(cfg.gap_ms) << "\n"
    << "seeds = " << join_u64(cfg.seeds) << "\n"
    << "num_gaps = " << cfg.num_gaps << "\n"
    << "algos = " << join_strings(cfg.algos) << "\n";
  if (!f) throw IoError("write failed: " + path);
}

std::string canonical_config_string(const ExperimentConfig& cfg) {
  std::string s;
  s += "gabor.window_len=" + std::to_string(cfg.gabor.window_len) + "\n";
  s += "gabor.hop=" + std::to_string(cfg.gabor.hop) + "\n";
  s += "gabor.modulations=" + std::to_string(cfg.gabor.modulations) + "\n";
  s += "learn.iter_max=" + std::to_string(cfg.learn.iter_max) + "\n";
  s += "learn.band_d=" + std::to_string(cfg.learn.band_d) + "\n";
  s += "learn.rho_start=" + fmt_exact(cfg.learn.rho_start) + "\n";
  s += "learn.eps=" + fmt_exact(cfg.learn.eps) + "\n";
  s += "learn.context_frames=" + std::to_string(cfg.learn.context_frames) + "\n";
  s += "learn.per_gap=" + std::string(cfg.learn.per_gap ? "true" : "false") + "\n";
  s += "solver.tau=" + fmt_exact(cfg.solver.tau) + "\n";
  s += "solver.sigma=" + fmt_exact(cfg.solver.sigma) + "\n";
  s += "solver.tol_eps=" + fmt_exact(cfg.solver.tol_eps) + "\n";
  s += "solver.min_iters=" + std::to_string(cfg.solver.min_iters) + "\n";
  s += "solver.max_iters=" + std::to_string(cfg.solver.max_iters) + "\n";
  s += "janssen.window_len=" + std::to_string(cfg.janssen.window_len) + "\n";
  s += "janssen.hop=" + std::to_string(cfg.janssen.hop) + "\n";
  s += "janssen.iterations=" + std::to_string(cfg.janssen.iterations) + "\n";
  s += "degrade.guard_ms=" + fmt_exact(cfg.degrade.guard_ms) + "\n";
  s += "sweep.gap_ms=" + join_doubles(cfg.gap_ms) + "\n";
  s += "sweep.seeds=" + join_u64(cfg.seeds) + "\n";
  s += "sweep.num_gaps=" + std::to_string(cfg.num_gaps) + "\n";
  s += "sweep.algos=" + join_strings(cfg.algos) + "\n";
  return s;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string s = canonical_config_string(cfg);
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Algo parse_algo(const std::string& name) {
  if (name == "cp") return Algo::kCp;
  if (name == "cp-learned") return Algo::kCpLearned;
  if (name == "janssen") return Algo::kJanssen;
  if (name == "zero-fill") return Algo::kZeroFill;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string algo_name(Algo algo) {
  switch (algo) {
    case Algo::kCp:
      return "cp";
    case Algo::kCpLearned:
      return "cp-learned";
    case Algo::kJanssen:
      return "janssen";
    case Algo::kZeroFill:
      return "zero-fill";
  }
  return "?";
}

std::size_t padded_length(std::size_t len, std::size_t hop,
                          std::size_t modulations) {
  if (hop == 0 || modulations == 0)
    throw std::invalid_argument("padding: zero hop or modulation count");
  const std::size_t period = std::lcm(hop, modulations);
  const std::size_t n = std::max<std::size_t>(len, 1);
  return ((n + period - 1) / period) * period;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> gap_list(const GapSpec& gaps) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(gaps.gaps.size());
  for (const auto& g : gaps.gaps) out.emplace_back(g.start_sample, g.length_samples);
  return out;
}

SolverConfig solver_config(const ExperimentConfig& cfg) {
  SolverConfig s;
  s.tau = cfg.solver.tau;
  s.sigma = cfg.solver.sigma;
  s.tol_eps = cfg.solver.tol_eps;
  s.min_iters = cfg.solver.min_iters;
  s.max_iters = cfg.solver.max_iters;
  return s;
}

LearnConfig learn_config(const ExperimentConfig& cfg, const GaborFrame& frame) {
  LearnConfig lc;
  lc.iter_max = cfg.learn.iter_max;
  lc.band_d = cfg.learn.band_d;
  lc.rho_start = cfg.learn.rho_start;
  lc.eps = cfg.learn.eps;
  // Rotating the DC or Nyquist row of a half-spectrum grid would break the
  // realness of the conjugate-extended synthesis, so keep them fixed.
  lc.lock_first_row = true;
  lc.lock_last_row = frame.has_nyquist_bin();
  return lc;
}

struct PaddedProblem {
  Signal padded;
  ReliabilityMask mask;
  GaborFrame frame;
};

PaddedProblem make_problem(const Signal& degraded, const GapSpec& gaps,
                           const ExperimentConfig& cfg) {
  const std::size_t pad_len = padded_length(
      degraded.size(), cfg.gabor.hop, cfg.gabor.modulations);
  Signal padded = degraded;
  padded.samples.resize(pad_len, 0.0);
  ReliabilityMask mask = build_mask(gaps, pad_len);
  for (std::size_t l = 0; l < pad_len; ++l)
    if (!mask.is_reliable(l)) padded.samples[l] = 0.0;
  GaborFrame frame = make_tight(GaborFrame(
      make_hann_window(cfg.gabor.window_len), cfg.gabor.hop,
      cfg.gabor.modulations, pad_len));
  return {std::move(padded), std::move(mask), std::move(frame)};
}

Deformation learn_from_neighborhood(
    const GaborFrame& frame, const ReliabilityMask& mask,
    const CoefficientGrid& grid,
    const std::vector<std::pair<std::size_t, std::size_t>>& gaps,
    const ExperimentConfig& cfg) {
  const NeighborhoodSelection sel =
      select_neighborhood(frame, mask, gaps, cfg.learn.context_frames);
  const Eigen::MatrixXcd x = extract_neighborhood_coeffs(grid, sel);
  return learn_deformation(x, learn_config(cfg, frame));
}

}  // namespace

Signal inpaint_signal(const Signal& degraded, const GapSpec& gaps, Algo algo,
                      const ExperimentConfig& cfg, const Deformation* dict) {
  gaps.validate();
  if (gaps.signal_len != degraded.size())
    throw std::invalid_argument("inpaint: gap spec length mismatch");
  if (gaps.gaps.empty()) return degraded;  // nothing to restore
  const std::size_t orig_len = degraded.size();

  if (algo == Algo::kZeroFill) {
    Signal out = degraded;
    for (const auto& g : gaps.gaps)
      std::fill(out.samples.begin() + static_cast<std::ptrdiff_t>(g.start_sample),
                out.samples.begin() +
                    static_cast<std::ptrdiff_t>(g.start_sample + g.length_samples),
                0.0);
    return out;
  }

  if (algo == Algo::kJanssen) {
    const ReliabilityMask mask = build_mask(gaps);
    Signal x = degraded;
    for (std::size_t l = 0; l < x.size(); ++l)
      if (!mask.is_reliable(l)) x.samples[l] = 0.0;
    JanssenConfig jc;
    jc.window_len = cfg.janssen.window_len;
    jc.hop = cfg.janssen.hop;
    jc.iterations = cfg.janssen.iterations;
    return janssen_inpaint(x, mask, jc);
  }

  PaddedProblem prob = make_problem(degraded, gaps, cfg);
  const SolverConfig scfg = solver_config(cfg);

  if (algo == Algo::kCp) {
    const WeightVector w = energy_weights(prob.frame, prob.mask);
    SolveResult res = solve_cp(prob.frame, prob.mask, prob.padded, w, scfg);
    res.restored.samples.resize(orig_len);
    res.restored.sample_rate = degraded.sample_rate;
    return std::move(res.restored);
  }

  // cp-learned
  if (dict != nullptr) {
    const WeightVector w = learned_energy_weights(prob.frame, prob.mask, *dict);
    SolveResult res =
        solve_cp_learned(prob.frame, prob.mask, prob.padded, *dict, w, scfg);
    res.restored.samples.resize(orig_len);
    res.restored.sample_rate = degraded.sample_rate;
    return std::move(res.restored);
  }

  const CoefficientGrid grid = analyze(prob.frame, prob.padded);
  if (!cfg.learn.per_gap) {
    const Deformation d = learn_from_neighborhood(prob.frame, prob.mask, grid,
                                                  gap_list(gaps), cfg);
    const WeightVector w = learned_energy_weights(prob.frame, prob.mask, d);
    SolveResult res =
        solve_cp_learned(prob.frame, prob.mask, prob.padded, d, w, scfg);
    res.restored.samples.resize(orig_len);
    res.restored.sample_rate = degraded.sample_rate;
    return std::move(res.restored);
  }

  // One deformation per gap: solve the full problem with each gap's local
  // dictionary and keep only that gap's samples.
  Signal out = prob.padded;
  for (const auto& g : gaps.gaps) {
    const std::vector<std::pair<std::size_t, std::size_t>> one = {
        {g.start_sample, g.length_samples}};
    const Deformation d =
        learn_from_neighborhood(prob.frame, prob.mask, grid, one, cfg);
    const WeightVector w = learned_energy_weights(prob.frame, prob.mask, d);
    const SolveResult res =
        solve_cp_learned(prob.frame, prob.mask, prob.padded, d, w, scfg);
    std::copy(res.restored.samples.begin() +
                  static_cast<std::ptrdiff_t>(g.start_sample),
              res.restored.samples.begin() +
                  static_cast<std::ptrdiff_t>(g.start_sample + g.length_samples),
              out.samples.begin() + static_cast<std::ptrdiff_t>(g.start_sample));
  }
  out.samples.resize(orig_len);
  out.sample_rate = degraded.sample_rate;
  return out;
}

Deformation learn_dictionary(const Signal& degraded, const GapSpec& gaps,
                             const ExperimentConfig& cfg) {
  gaps.validate();
  if (gaps.signal_len != degraded.size())
    throw std::invalid_argument("learn: gap spec length mismatch");
  PaddedProblem prob = make_problem(degraded, gaps, cfg);
  const CoefficientGrid grid = analyze(prob.frame, prob.padded);
  return learn_from_neighborhood(prob.frame, prob.mask, grid, gap_list(gaps),
                                 cfg);
}

std::string classify_error(const std::exception& e) {
  if (dynamic_cast<const PlacementError*>(&e)) return "placement";
  if (dynamic_cast<const GapTooLongError*>(&e)) return "gap-too-long";
  if (dynamic_cast<const EmptyNeighborhoodError*>(&e))
    return "empty-neighborhood";
  if (dynamic_cast<const UndefinedReferenceError*>(&e))
    return "undefined-reference";
  if (dynamic_cast<const NotAFrameError*>(&e)) return "not-a-frame";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const std::invalid_argument*>(&e))
    return "invalid-argument";
  return "internal";
}

namespace {

struct Instance {
  std::size_t input;
  double gap_ms;
  std::uint64_t seed;
};

std::vector<SweepRow> run_instance(
    const std::pair<std::string, Signal>& input, const Instance& inst,
    const ExperimentConfig& cfg) {
  std::vector<SweepRow> rows;
  const auto error_rows = [&](const std::exception& e) {
    for (const auto& name : cfg.algos) {
      SweepRow row;
      row.signal = input.first;
      row.algo = name;
      row.gap_ms = inst.gap_ms;
      row.seed = inst.seed;
      row.gap_id = -1;
      row.sdr_db = std::numeric_limits<double>::quiet_NaN();
      row.status = classify_error(e);
      rows.push_back(row);
    }
  };

  DegradeResult deg;
  try {
    deg = degrade(input.second, inst.gap_ms, cfg.num_gaps, inst.seed,
                  cfg.degrade.guard_ms);
  } catch (const std::exception& e) {
    error_rows(e);
    return rows;
  }
  const ReliabilityMask mask = build_mask(deg.gaps);

  for (const auto& name : cfg.algos) {
    try {
      const Algo algo = parse_algo(name);
      const Signal restored = inpaint_signal(deg.degraded, deg.gaps, algo, cfg);
      const SdrReport rep = sdr_on_gaps(input.second, restored, mask);
      for (std::size_t g = 0; g < rep.per_gap.size(); ++g) {
        SweepRow row;
        row.signal = input.first;
        row.algo = name;
        row.gap_ms = inst.gap_ms;
        row.seed = inst.seed;
        row.gap_id = static_cast<long>(g);
        row.sdr_db = rep.per_gap[g];
        row.status = "ok";
        rows.push_back(row);
      }
    } catch (const std::exception& e) {
      SweepRow row;
      row.signal = input.first;
      row.algo = name;
      row.gap_ms = inst.gap_ms;
      row.seed = inst.seed;
      row.gap_id = -1;
      row.sdr_db = std::numeric_limits<double>::quiet_NaN();
      row.status = classify_error(e);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string fmt_sdr(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt_double(v);
}

}  // namespace

SweepResult run_sweep(const std::vector<std::pair<std::string, Signal>>& inputs,
                      const ExperimentConfig& cfg, int jobs) {
  for (const auto& name : cfg.algos) parse_algo(name);
  if (cfg.num_gaps < 0)
    throw std::invalid_argument("sweep: negative gap count");

  std::vector<Instance> instances;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (const double g : cfg.gap_ms)
      for (const std::uint64_t s : cfg.seeds) instances.push_back({i, g, s});

  std::vector<std::vector<SweepRow>> slots(instances.size());
  if (jobs <= 1 || instances.size() <= 1) {
    for (std::size_t k = 0; k < instances.size(); ++k)
      slots[k] = run_instance(inputs[instances[k].input], instances[k], cfg);
  } else {
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min<std::size_t>(
        static_cast<std::size_t>(jobs), instances.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= instances.size()) return;
          slots[k] = run_instance(inputs[instances[k].input], instances[k], cfg);
        }
      });
    for (auto& t : pool) t.join();
  }

  SweepResult out;
  out.hash = config_hash(cfg);
  for (auto& slot : slots)
    for (auto& row : slot) out.rows.push_back(std::move(row));
  return out;
}

void write_sweep_rows(const SweepResult& result, std::ostream& out) {
  out << "signal,algo,gap_ms,seed,gap_id,sdr_db,status,config_hash\n";
  for (const auto& r : result.rows)
    out << r.signal << ',' << r.algo << ',' << fmt_double(r.gap_ms) << ','
        << r.seed << ',' << r.gap_id << ',' << fmt_sdr(r.sdr_db) << ','
        << r.status << ',' << result.hash << '\n';
}

void write_sweep_aggregates(const SweepResult& result, std::ostream& out) {
  // Keyed by (algo, gap_ms) in first-appearance order.
  std::vector<std::pair<std::string, double>> keys;
  std::map<std::pair<std::string, double>, std::vector<double>> groups;
  for (const auto& r : result.rows) {
    if (r.status != "ok") continue;
    const auto key = std::make_pair(r.algo, r.gap_ms);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(r.sdr_db);
  }
  out << "algo,gap_ms,n,mean_sdr_db,median_sdr_db\n";
  for (const auto& key : keys) {
    std::vector<double>& v = groups[key];
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    const double mean =
        std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    const double median =
        n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    out << key.first << ',' << fmt_double(key.second) << ',' << n << ','
        << fmt_sdr(mean) << ',' << fmt_sdr(median) << '\n';
  }
}

}  // namespace ainp
