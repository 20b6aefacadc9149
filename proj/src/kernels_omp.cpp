#include "tfvtg/kernels.hpp"

#include <algorithm>

#include <omp.h>

namespace tfvtg::kernels {

namespace {

struct Layout {
  std::vector<std::size_t> offset;  // offset[j] = first output slot for end frame j
  std::ptrdiff_t first_start(std::ptrdiff_t j) const { return std::max<std::ptrdiff_t>(0, j - n + 1); }
  std::ptrdiff_t n = 0;
  std::ptrdiff_t min_len = 0;
};

Layout make_layout(std::ptrdiff_t n, std::ptrdiff_t min_len) {
  Layout layout;
  layout.n = n;
  layout.min_len = min_len;
  layout.offset.assign(n + 2, 0);
  for (std::ptrdiff_t j = 1; j <= n; ++j) {
    const auto count = std::max<std::ptrdiff_t>(0, j - min_len - layout.first_start(j) + 1);
    layout.offset[j + 1] = layout.offset[j] + static_cast<std::size_t>(count);
  }
  return layout;
}

}  // namespace

// For a fixed end frame j the static score depends only on the split k, so
// a suffix maximum over k covers every split outside the dynamic run of a
// start i. Only splits inside the run need an explicit scan.
std::vector<ScoredProposal> score_all_parallel(const ProposalScorer& scorer) {
  const auto n = scorer.frames();
  const Layout layout = make_layout(n, scorer.params().min_frames);
  std::vector<ScoredProposal> out(layout.offset[n + 1]);

#pragma omp parallel
  {
    std::vector<double> stat(n);
    std::vector<double> suffix_best(n + 1);
    std::vector<std::ptrdiff_t> suffix_arg(n + 1);

#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t j = 1; j <= n; ++j) {
      const std::ptrdiff_t lo = layout.first_start(j);
      const std::ptrdiff_t hi = j - layout.min_len;
      if (hi < lo) continue;

      for (std::ptrdiff_t k = lo; k < j; ++k) stat[k] = scorer.static_part(k, j);
      suffix_best[j - 1] = stat[j - 1];
      suffix_arg[j - 1] = j - 1;
      for (std::ptrdiff_t k = j - 2; k >= lo; --k) {
        if (stat[k] >= suffix_best[k + 1]) {
          suffix_best[k] = stat[k];
          suffix_arg[k] = k;
        } else {
          suffix_best[k] = suffix_best[k + 1];
          suffix_arg[k] = suffix_arg[k + 1];
        }
      }

      ScoredProposal* row = out.data() + layout.offset[j];
      for (std::ptrdiff_t i = lo; i <= hi; ++i) {
        const std::ptrdiff_t run_last = std::min(scorer.run_end(i), j - 1);
        ScoredProposal best{i, j, i, 0.0, stat[i], 0.0 + stat[i]};
        for (std::ptrdiff_t k = i + 1; k <= run_last; ++k) {
          const double dyn = scorer.dynamic(i, k);
          const double total = dyn + stat[k];
          if (total > best.final_score) best = {i, j, k, dyn, stat[k], total};
        }
        if (run_last + 1 <= j - 1) {
          const std::ptrdiff_t k = suffix_arg[run_last + 1];
          const double total = 0.0 + stat[k];
          if (total > best.final_score) best = {i, j, k, 0.0, stat[k], total};
        }
        row[i - lo] = best;
      }
    }
  }
  return out;
}

}  // namespace tfvtg::kernels
