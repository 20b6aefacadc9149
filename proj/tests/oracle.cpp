#include "oracle.hpp"

#include <algorithm>
#include <cmath>

namespace tfvtg::testing {

std::vector<double> oracle_smooth(const std::vector<double>& values, double sigma) {
  if (sigma == 0.0) return values;
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> out(values.size());
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    double num = 0.0, den = 0.0;
    for (std::ptrdiff_t t = c - radius; t <= c + radius; ++t) {
      if (t < 0 || t >= n) continue;
      const double w = std::exp(-0.5 * static_cast<double>((t - c) * (t - c)) / (sigma * sigma));
      num += w * values[t];
      den += w;
    }
    out[c] = num / den;
  }
  return out;
}

namespace {

OracleProposal score_with(const std::vector<double>& values, const std::vector<double>& smoothed,
                          double delta, std::ptrdiff_t i, std::ptrdiff_t j) {
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  OracleProposal best;
  bool have = false;
  for (std::ptrdiff_t k = i; k < j; ++k) {
    double dyn = 0.0;
    bool all_above = true;
    for (std::ptrdiff_t l = i + 1; l <= k; ++l) {
      const double d = smoothed[l] - smoothed[l - 1];
      if (!(d > delta)) all_above = false;
      dyn += d;
    }
    if (!all_above) dyn = 0.0;

    double in_sum = 0.0, out_sum = 0.0;
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      if (l >= k && l < j) in_sum += values[l];
      else out_sum += values[l];
    }
    const double stat = in_sum / static_cast<double>(j - k) - out_sum / static_cast<double>(n - (j - k));
    const double total = dyn + stat;
    if (!have || total > best.final_score + kOracleTie) {
      best = {i, j, k, dyn, stat, total};
      have = true;
    }
  }
  return best;
}

// a ranks strictly before b: score beyond the tie band, then start, length, split.
bool oracle_before(const OracleProposal& a, const OracleProposal& b) {
  if (std::abs(a.final_score - b.final_score) > kOracleTie) return a.final_score > b.final_score;
  if (a.start != b.start) return a.start < b.start;
  if (a.end - a.start != b.end - b.start) return a.end - a.start < b.end - b.start;
  return a.split < b.split;
}

double interval_iou(std::ptrdiff_t s1, std::ptrdiff_t e1, std::ptrdiff_t s2, std::ptrdiff_t e2) {
  const auto lo = std::max(s1, s2), hi = std::min(e1, e2);
  const double inter = hi > lo ? static_cast<double>(hi - lo) : 0.0;
  return inter / (static_cast<double>((e1 - s1) + (e2 - s2)) - inter);
}

}  // namespace

OracleProposal oracle_score(const std::vector<double>& values, double sigma, double delta,
                            std::ptrdiff_t i, std::ptrdiff_t j) {
  return score_with(values, oracle_smooth(values, sigma), delta, i, j);
}

std::vector<OracleProposal> oracle_localize(const std::vector<double>& values, double sigma,
                                            double delta, int topk, double nms_iou, int min_frames) {
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const auto smoothed = oracle_smooth(values, sigma);
  std::vector<OracleProposal> pool;
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = i + min_frames; j <= n; ++j)
      if (j - i < n) pool.push_back(score_with(values, smoothed, delta, i, j));

  // Repeated selection of the best remaining proposal, then the NMS test.
  std::vector<OracleProposal> kept;
  std::vector<bool> used(pool.size(), false);
  while (static_cast<int>(kept.size()) < topk) {
    std::ptrdiff_t pick = -1;
    for (std::size_t p = 0; p < pool.size(); ++p)
      if (!used[p] && (pick < 0 || oracle_before(pool[p], pool[pick]))) pick = static_cast<std::ptrdiff_t>(p);
    if (pick < 0) break;
    used[pick] = true;
    const auto& cand = pool[pick];
    bool suppressed = false;
    for (const auto& q : kept)
      if (interval_iou(cand.start, cand.end, q.start, q.end) > nms_iou) suppressed = true;
    if (!suppressed) kept.push_back(cand);
  }
  return kept;
}

std::optional<std::vector<std::size_t>> oracle_best_combination(
    const std::vector<std::vector<OracleInterval>>& candidates, const std::vector<int>& order,
    bool simultaneous) {
  const std::size_t m = candidates.size();
  std::size_t total = 1;
  for (const auto& c : candidates) total *= c.size();

  std::optional<std::vector<std::size_t>> best;
  double best_score = 0.0;
  std::ptrdiff_t best_start = 0, best_len = 0;
  for (std::size_t code = 0; code < total; ++code) {
    // Mixed-radix decode, last list fastest.
    std::vector<std::size_t> idx(m);
    std::size_t rest = code;
    for (std::size_t n = m; n-- > 0;) {
      idx[n] = rest % candidates[n].size();
      rest /= candidates[n].size();
    }
    bool consistent = true;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        if (order[a] < order[b] && candidates[a][idx[a]].start > candidates[b][idx[b]].end) consistent = false;
    if (!consistent) continue;

    std::ptrdiff_t lo = candidates[0][idx[0]].start, hi = candidates[0][idx[0]].end;
    double score = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
      const auto& iv = candidates[n][idx[n]];
      score += iv.score;
      lo = simultaneous ? std::max(lo, iv.start) : std::min(lo, iv.start);
      hi = simultaneous ? std::min(hi, iv.end) : std::max(hi, iv.end);
    }
    if (hi <= lo) continue;
    const bool better = !best || score > best_score ||
                        (score == best_score && (lo < best_start || (lo == best_start && hi - lo < best_len)));
    if (better) {
      best = idx;
      best_score = score;
      best_start = lo;
      best_len = hi - lo;
    }
  }
  return best;
}

}  // namespace tfvtg::testing
