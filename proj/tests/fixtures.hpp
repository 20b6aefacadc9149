#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tfvtg/eval.hpp"
#include "tfvtg/signal.hpp"

namespace tfvtg::testing {

/// Background, then a linear ramp of 3-8 frames whose first frame sits at
/// background level, a plateau of 5-20 frames, and a half-height distractor
/// bump before or after the event. Every frame carries jitter of +-2e-4,
/// which keeps frame-to-frame noise below the default delta.
struct PlantedFixture {
  SimilarityTrack track;
  Annotation annotation;
  std::ptrdiff_t ramp_start = 0;  // first ramp frame
  std::ptrdiff_t event_end = 0;   // one past the last plateau frame
};

inline constexpr double kFixtureFps = 3.0;

PlantedFixture make_planted_fixture(std::mt19937_64& rng, const std::string& video_id);

/// Writes tracks, index.jsonl, and annotations.jsonl for the fixtures.
void write_fixture_set(const std::vector<PlantedFixture>& fixtures, const std::filesystem::path& dir);

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace tfvtg::testing
