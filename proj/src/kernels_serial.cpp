#include "tfvtg/kernels.hpp"

#include <algorithm>

namespace tfvtg::kernels {

std::vector<ScoredProposal> score_all_serial(const ProposalScorer& scorer) {
  const auto n = scorer.frames();
  const auto min_len = static_cast<std::ptrdiff_t>(scorer.params().min_frames);
  std::vector<ScoredProposal> out;
  for (std::ptrdiff_t j = 1; j <= n; ++j)
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, j - n + 1); i <= j - min_len; ++i)
      out.push_back(scorer.score(i, j));
  return out;
}

}  // namespace tfvtg::kernels
