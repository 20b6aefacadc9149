#include "fixtures.hpp"

#include <fmt/format.h>

#include "tfvtg/io.hpp"

namespace tfvtg::testing {

namespace fs = std::filesystem;

PlantedFixture make_planted_fixture(std::mt19937_64& rng, const std::string& video_id) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double background = 0.0;
  const double amplitude = 0.1 + 0.2 * unit(rng);
  const int ramp = pick(3, 8);
  const int plateau = pick(5, 20);
  const int lead = pick(8, 20);
  const int gap = pick(6, 12);
  const int tail = pick(6, 15);
  const bool bump_first = unit(rng) < 0.5;

  std::vector<double> values;
  auto flat = [&](int count) { values.insert(values.end(), count, background); };
  auto bump = [&] {
    for (double shape : {0.25, 0.45, 0.5, 0.45, 0.25}) values.push_back(background + amplitude * shape);
  };

  flat(lead);
  if (bump_first) {
    bump();
    flat(gap);
  }
  const auto ramp_start = static_cast<std::ptrdiff_t>(values.size());
  for (int t = 0; t < ramp; ++t) values.push_back(background + amplitude * t / ramp);
  values.insert(values.end(), plateau, background + amplitude);
  const auto event_end = static_cast<std::ptrdiff_t>(values.size());
  if (!bump_first) {
    flat(gap);
    bump();
  }
  flat(tail);

  std::uniform_real_distribution<double> jitter(-2e-4, 2e-4);
  for (double& v : values) v += jitter(rng);

  const double duration = static_cast<double>(values.size()) / kFixtureFps;
  Annotation ann{video_id, fmt::format("planted event in {}", video_id),
                 static_cast<double>(ramp_start) / kFixtureFps, static_cast<double>(event_end) / kFixtureFps,
                 duration};
  return {SimilarityTrack(video_id, std::move(values), kFixtureFps), ann, ramp_start, event_end};
}

void write_fixture_set(const std::vector<PlantedFixture>& fixtures, const fs::path& dir) {
  fs::create_directories(dir / "tracks");
  TrackIndex index(dir / "tracks");
  std::vector<Annotation> anns;
  for (std::size_t n = 0; n < fixtures.size(); ++n) {
    const auto& f = fixtures[n];
    // Alternate formats so both readers are on the pipeline path.
    const std::string name = f.track.video_id() + (n % 2 ? ".tfvt" : ".json");
    write_track(f.track, dir / "tracks" / name);
    index.add({f.track.video_id(), f.annotation.query, name});
    anns.push_back(f.annotation);
  }
  index.save();
  write_annotations(anns, dir / "annotations.jsonl");
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (double& v : out) v = dist(rng);
  return out;
}

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  path_ = fs::temp_directory_path() / fmt::format("tfvtg-{}-{:08x}", tag, rd());
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

}  // namespace tfvtg::testing
