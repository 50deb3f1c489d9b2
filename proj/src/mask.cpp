#include "ainp/mask.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

#include "ainp/errors.hpp"

namespace ainp {

std::size_t ReliabilityMask::num_reliable() const {
  std::size_t count = 0;
  for (std::uint8_t v : reliable) count += (v != 0);
  return count;
}

std::vector<std::pair<std::size_t, std::size_t>> ReliabilityMask::gap_runs()
    const {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  while (i < reliable.size()) {
    if (reliable[i]) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < reliable.size() && !reliable[i]) ++i;
    runs.emplace_back(start, i - start);
  }
  return runs;
}

void GapSpec::validate() const {
  std::vector<Gap> sorted = gaps;
  std::sort(sorted.begin(), sorted.end(),
            [](const Gap& a, const Gap& b) { return a.start_sample < b.start_sample; });
  std::size_t prev_end = 0;
  bool first = true;
  for (const Gap& g : sorted) {
    if (g.length_samples == 0) {
      throw std::invalid_argument("gap spec: gap length must be positive");
    }
    if (g.start_sample + g.length_samples > signal_len) {
      throw std::invalid_argument("gap spec: gap exceeds signal length");
    }
    if (!first && g.start_sample < prev_end) {
      throw std::invalid_argument("gap spec: gaps overlap");
    }
    prev_end = g.start_sample + g.length_samples;
    first = false;
  }
  if (sample_rate <= 0) {
    throw std::invalid_argument("gap spec: sample rate must be positive");
  }
}

GapSpec load_gap_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("gap spec: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("gap spec: malformed JSON in " + path + ": " + e.what());
  }
  GapSpec spec;
  try {
    spec.signal_len = j.at("signal_len").get<std::size_t>();
    spec.sample_rate = j.at("sample_rate").get<int>();
    for (const auto& g : j.at("gaps")) {
      GapSpec::Gap gap;
      gap.start_sample = g.at("start_sample").get<std::size_t>();
      gap.length_samples = g.at("length_samples").get<std::size_t>();
      spec.gaps.push_back(gap);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("gap spec: missing field in " + path + ": " + e.what());
  }
  spec.validate();
  return spec;
}

void save_gap_spec(const GapSpec& spec, const std::string& path) {
  spec.validate();
  nlohmann::json j;
  j["signal_len"] = spec.signal_len;
  j["sample_rate"] = spec.sample_rate;
  j["gaps"] = nlohmann::json::array();
  for (const GapSpec::Gap& g : spec.gaps) {
    j["gaps"].push_back({{"start_sample", g.start_sample},
                         {"length_samples", g.length_samples}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("gap spec: cannot write " + path);
  out << j.dump(2) << "\n";
}

ReliabilityMask build_mask(const GapSpec& spec, std::size_t padded_len) {
  spec.validate();
  const std::size_t len = std::max(padded_len, spec.signal_len);
  ReliabilityMask mask;
  mask.reliable.assign(len, 1);
  for (const GapSpec::Gap& g : spec.gaps) {
    std::fill(mask.reliable.begin() + static_cast<std::ptrdiff_t>(g.start_sample),
              mask.reliable.begin() +
                  static_cast<std::ptrdiff_t>(g.start_sample + g.length_samples),
              std::uint8_t{0});
  }
  if (mask.num_reliable() == 0) {
    throw std::invalid_argument("mask: no reliable samples");
  }
  return mask;
}

Signal project_feasible(const ReliabilityMask& mask, const Signal& x,
                        const std::vector<cplx>& z) {
  if (mask.size() != x.size() || z.size() != x.size()) {
    throw std::invalid_argument("project_feasible: length mismatch");
  }
  Signal out;
  out.sample_rate = x.sample_rate;
  out.samples.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.samples[i] = mask.is_reliable(i) ? x.samples[i] : z[i].real();
  }
  return out;
}

namespace detail {

void project_feasible_inplace(const ReliabilityMask& mask, const double* x,
                              double* z) {
  const std::size_t n = mask.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.reliable[i]) z[i] = x[i];
  }
}

}  // namespace detail

namespace {

// clean[n] = window support of frame n contains no unreliable sample.
std::vector<std::uint8_t> clean_frames(const GaborFrame& frame,
                                       const ReliabilityMask& mask) {
  const std::size_t frames = frame.num_frames();
  const std::size_t len = frame.signal_len();
  const std::vector<double>& w = frame.window();
  std::vector<std::uint8_t> clean(frames, 1);
  for (std::size_t n = 0; n < frames; ++n) {
    const std::ptrdiff_t base =
        static_cast<std::ptrdiff_t>(n * frame.hop()) - frame.window_offset();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::size_t l =
          detail::wrap_index(base + static_cast<std::ptrdiff_t>(k), len);
      if (!mask.is_reliable(l)) {
        clean[n] = 0;
        break;
      }
    }
  }
  return clean;
}

}  // namespace

NeighborhoodSelection select_neighborhood(
    const GaborFrame& frame, const ReliabilityMask& mask,
    const std::vector<std::pair<std::size_t, std::size_t>>& gaps,
    std::size_t k) {
  if (mask.size() != frame.signal_len()) {
    throw std::invalid_argument("select_neighborhood: mask length mismatch");
  }
  if (k == 0) {
    throw std::invalid_argument("select_neighborhood: context size must be positive");
  }
  const std::vector<std::uint8_t> clean = clean_frames(frame, mask);
  const std::size_t frames = frame.num_frames();
  const std::size_t hop = frame.hop();

  std::set<std::size_t> picked;
  for (const auto& [start, length] : gaps) {
    if (start + length > frame.signal_len()) {
      throw std::invalid_argument("select_neighborhood: gap out of range");
    }
    // Left side: frame centres strictly before the gap start.
    if (start > 0) {
      std::size_t taken = 0;
      std::size_t n = std::min((start - 1) / hop, frames - 1);
      for (;; --n) {
        if (clean[n]) {
          picked.insert(n);
          if (++taken == k) break;
        }
        if (n == 0) break;
      }
    }
    // Right side: frame centres at or past the gap end.
    const std::size_t end = start + length;
    std::size_t taken = 0;
    for (std::size_t n = (end + hop - 1) / hop; n < frames; ++n) {
      if (clean[n]) {
        picked.insert(n);
        if (++taken == k) break;
      }
    }
  }
  if (picked.empty()) {
    throw EmptyNeighborhoodError(
        "select_neighborhood: no fully reliable context frames");
  }
  NeighborhoodSelection sel;
  sel.context_k = k;
  sel.frames.assign(picked.begin(), picked.end());
  return sel;
}

NeighborhoodSelection select_neighborhood(const GaborFrame& frame,
                                          const ReliabilityMask& mask,
                                          std::size_t k) {
  const auto runs = mask.gap_runs();
  if (runs.empty()) {
    throw std::invalid_argument("select_neighborhood: mask has no gaps");
  }
  return select_neighborhood(frame, mask, runs, k);
}

Eigen::MatrixXcd extract_neighborhood_coeffs(const CoefficientGrid& grid,
                                             const NeighborhoodSelection& sel) {
  if (sel.frames.empty()) {
    throw std::invalid_argument("extract_neighborhood_coeffs: empty selection");
  }
  Eigen::MatrixXcd x(grid.num_bins, sel.frames.size());
  for (std::size_t j = 0; j < sel.frames.size(); ++j) {
    const std::size_t n = sel.frames[j];
    if (n >= grid.num_frames) {
      throw std::invalid_argument(
          "extract_neighborhood_coeffs: frame index out of range");
    }
    for (std::size_t m = 0; m < grid.num_bins; ++m) {
      x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) =
          grid.at(m, n);
    }
  }
  return x;
}

}  // namespace ainp
