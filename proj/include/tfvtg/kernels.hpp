#pragma once

#include <vector>

#include "tfvtg/localizer.hpp"

namespace tfvtg::kernels {

// Every admissible proposal of a track, in canonical order: grouped by end
// frame j ascending, then start frame i ascending. Both kernels return
// bit-identical results; the serial one is the reference for tests.

std::vector<ScoredProposal> score_all_serial(const ProposalScorer& scorer);

std::vector<ScoredProposal> score_all_parallel(const ProposalScorer& scorer);

}  // namespace tfvtg::kernels
