#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfvtg/eval.hpp"
#include "tfvtg/fusion.hpp"
#include "tfvtg/planner.hpp"
#include "tfvtg/signal.hpp"

namespace tfvtg {

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// Similarity tracks -------------------------------------------------------

enum class TrackFormat { kText, kBinary };

inline constexpr std::string_view kTrackMagic = "TFVT";
inline constexpr std::uint32_t kTrackVersion = 1;
inline constexpr std::size_t kTrackHeaderBytes = 24;

/// Binary layout: "TFVT", u32 version, u64 N, f64 fps, then N f32 values,
/// all little-endian. The id is not stored.
std::string encode_track_binary(const SimilarityTrack& track);
SimilarityTrack decode_track_binary(std::string_view bytes, std::string video_id);

/// {"video_id": ..., "fps": ..., "values": [...]}, values rounded to f32.
std::string encode_track_text(const SimilarityTrack& track);
SimilarityTrack decode_track_text(std::string_view text);

/// Format by extension: ".tfvt" and ".bin" are binary, anything else text.
TrackFormat track_format_for(const std::filesystem::path& path);

/// Auto-detects binary (magic bytes), text tracks, and embedding files
/// ({"video_id", "fps", "text_embedding", "frame_embeddings"}), which are
/// converted with cosine_similarity. Binary tracks take their id from the
/// file stem.
SimilarityTrack read_track(const std::filesystem::path& path);
void write_track(const SimilarityTrack& track, const std::filesystem::path& path);
void write_track(const SimilarityTrack& track, const std::filesystem::path& path, TrackFormat format);

EmbeddingSet decode_embeddings(std::string_view text);

// Track index -------------------------------------------------------------

/// One line of index.jsonl in a track directory.
struct TrackIndexEntry {
  std::string video_id;
  std::string text;
  std::string path;  // relative to the directory
};

inline constexpr std::string_view kTrackIndexName = "index.jsonl";

class TrackIndex {
 public:
  static TrackIndex load(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::span<const TrackIndexEntry> entries() const { return entries_; }
  /// Throws InputError naming the key when absent.
  const TrackIndexEntry& find(std::string_view video_id, std::string_view text) const;
  SimilarityTrack read(std::string_view video_id, std::string_view text) const;

  void add(TrackIndexEntry entry);
  void save() const;

  explicit TrackIndex(std::filesystem::path dir) : dir_(std::move(dir)) {}

 private:
  std::filesystem::path dir_;
  std::vector<TrackIndexEntry> entries_;
};

// Records -----------------------------------------------------------------

std::vector<Annotation> read_annotations(const std::filesystem::path& path);
void write_annotations(std::span<const Annotation> anns, const std::filesystem::path& path);

/// Line-delimited: video_id, query, start_sec, end_sec, combo_score, provenance.
std::string encode_prediction(const FinalPrediction& p);
std::vector<FinalPrediction> read_predictions(const std::filesystem::path& path);
void write_predictions(std::span<const FinalPrediction> preds, const std::filesystem::path& path);

std::string encode_plan(const QueryPlan& plan);
QueryPlan decode_plan(std::string_view text);

/// Output of the localize stage: top-k proposals per sub-event, plan order.
struct ProposalSet {
  std::string video_id;
  double fps = 0.0;
  std::vector<SubEvent> sub_events;
  std::vector<std::vector<ScoredProposal>> proposals;
};

std::string encode_proposals(const ProposalSet& set);
ProposalSet decode_proposals(std::string_view text);

std::string encode_report(const EvalReport& report);

}  // namespace tfvtg
