#include "tfvtg/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"
#include "tfvtg/error.hpp"

namespace tfvtg {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

template <typename T>
T get_le(std::string_view in, std::size_t offset) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b)
    bits |= static_cast<U>(static_cast<unsigned char>(in[offset + b])) << (8 * b);
  return std::bit_cast<T>(bits);
}

json parse_json(std::string_view text, std::string_view what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw InputError(fmt::format("{}: not valid JSON", what));
  return doc;
}

// Runs `fn`, turning JSON access errors into InputError with context.
template <typename Fn>
auto with_context(std::string_view what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw InputError(fmt::format("{}: {}", what, e.what()));
  }
}

template <typename Encode, typename Range>
void write_lines(const fs::path& path, const Range& items, Encode encode) {
  std::string content;
  for (const auto& item : items) {
    content += encode(item);
    content += '\n';
  }
  write_file_atomic(path, content);
}

template <typename Decode>
auto read_lines(const fs::path& path, Decode decode) {
  std::istringstream in(read_file(path));
  std::vector<decltype(decode(json{}))> out;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = fmt::format("{}:{}", path.string(), number);
    const json doc = parse_json(line, where);
    out.push_back(with_context(where, [&] { return decode(doc); }));
  }
  return out;
}

json proposal_to_json(const ScoredProposal& p) {
  return {{"start", p.start},
          {"end", p.end},
          {"split", p.split},
          {"dynamic_score", p.dynamic_score},
          {"static_score", p.static_score},
          {"final_score", p.final_score}};
}

ScoredProposal proposal_from_json(const json& j) {
  return {j.at("start").get<std::ptrdiff_t>(),   j.at("end").get<std::ptrdiff_t>(),
          j.at("split").get<std::ptrdiff_t>(),   j.at("dynamic_score").get<double>(),
          j.at("static_score").get<double>(),    j.at("final_score").get<double>()};
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  thread_local std::mt19937_64 rng(std::random_device{}() ^
                                   std::hash<std::thread::id>{}(std::this_thread::get_id()));
  fs::path tmp = path;
  tmp += fmt::format(".tmp{:016x}", rng());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(fmt::format("cannot open {} for writing", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError(fmt::format("write to {} failed", tmp.string()));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError(fmt::format("cannot move {} into place: {}", path.string(), ec.message()));
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string encode_track_binary(const SimilarityTrack& track) {
  std::string out(kTrackMagic);
  put_le(out, kTrackVersion);
  put_le(out, static_cast<std::uint64_t>(track.size()));
  put_le(out, track.fps());
  for (double v : track.values()) put_le(out, static_cast<float>(v));
  return out;
}

SimilarityTrack decode_track_binary(std::string_view bytes, std::string video_id) {
  if (bytes.size() < kTrackHeaderBytes)
    throw InputError(fmt::format("binary track: truncated header, expected {} bytes, got {}",
                                 kTrackHeaderBytes, bytes.size()));
  if (bytes.substr(0, 4) != kTrackMagic) throw InputError("binary track: bad magic at byte 0");
  if (const auto version = get_le<std::uint32_t>(bytes, 4); version != kTrackVersion)
    throw InputError(fmt::format("binary track: unsupported version {} at byte 4", version));
  const auto n = get_le<std::uint64_t>(bytes, 8);
  const auto fps = get_le<double>(bytes, 16);
  if (n > (std::uint64_t{1} << 60))
    throw InputError(fmt::format("binary track: implausible frame count {} at byte 8", n));
  const std::uint64_t expected = kTrackHeaderBytes + 4 * n;
  if (bytes.size() != expected)
    throw InputError(fmt::format("binary track: {} for N = {}: expected {} bytes, got {}",
                                 bytes.size() < expected ? "truncated payload" : "trailing bytes", n,
                                 expected, bytes.size()));
  std::vector<double> values(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::size_t offset = kTrackHeaderBytes + 4 * i;
    const float v = get_le<float>(bytes, offset);
    if (!std::isfinite(v))
      throw InputError(fmt::format("binary track: non-finite value at byte {}", offset));
    values[i] = v;
  }
  return SimilarityTrack(std::move(video_id), std::move(values), fps);
}

std::string encode_track_text(const SimilarityTrack& track) {
  json values = json::array();
  for (double v : track.values()) values.push_back(static_cast<double>(static_cast<float>(v)));
  return json{{"video_id", track.video_id()}, {"fps", track.fps()}, {"values", values}}.dump() + "\n";
}

SimilarityTrack decode_track_text(std::string_view text) {
  const json doc = parse_json(text, "text track");
  return with_context("text track", [&] {
    std::vector<double> values;
    for (const auto& v : doc.at("values")) values.push_back(static_cast<float>(v.get<double>()));
    return SimilarityTrack(doc.at("video_id").get<std::string>(), std::move(values),
                           doc.at("fps").get<double>());
  });
}

EmbeddingSet decode_embeddings(std::string_view text) {
  const json doc = parse_json(text, "embedding file");
  return with_context("embedding file", [&] {
    const auto& rows = doc.at("frame_embeddings");
    if (!rows.is_array() || rows.empty()) throw InputError("embedding file: no frame embeddings");
    const std::size_t dim = rows.at(0).size();
    std::vector<double> flat;
    for (std::size_t n = 0; n < rows.size(); ++n) {
      if (rows[n].size() != dim)
        throw InputError(fmt::format("embedding file: row {} has {} entries, expected {}", n,
                                     rows[n].size(), dim));
      for (const auto& v : rows[n]) flat.push_back(v.get<double>());
    }
    return EmbeddingSet(doc.at("video_id").get<std::string>(), std::move(flat), dim,
                        doc.at("text_embedding").get<std::vector<double>>(), doc.at("fps").get<double>());
  });
}

TrackFormat track_format_for(const fs::path& path) {
  const auto ext = path.extension();
  return (ext == ".tfvt" || ext == ".bin") ? TrackFormat::kBinary : TrackFormat::kText;
}

SimilarityTrack read_track(const fs::path& path) {
  const std::string bytes = read_file(path);
  try {
    if (bytes.starts_with(kTrackMagic)) return decode_track_binary(bytes, path.stem().string());
    const auto first = bytes.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || bytes[first] != '{')
      throw InputError("neither a binary track (magic TFVT) nor a JSON document");
    if (bytes.find("\"frame_embeddings\"") != std::string::npos)
      return cosine_similarity(decode_embeddings(bytes));
    return decode_track_text(bytes);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_track(const SimilarityTrack& track, const fs::path& path) {
  write_track(track, path, track_format_for(path));
}

void write_track(const SimilarityTrack& track, const fs::path& path, TrackFormat format) {
  write_file_atomic(path, format == TrackFormat::kBinary ? encode_track_binary(track)
                                                         : encode_track_text(track));
}

TrackIndex TrackIndex::load(const fs::path& dir) {
  TrackIndex index(dir);
  index.entries_ = read_lines(dir / kTrackIndexName, [](const json& j) {
    return TrackIndexEntry{j.at("video_id").get<std::string>(), j.at("text").get<std::string>(),
                           j.at("track").get<std::string>()};
  });
  return index;
}

const TrackIndexEntry& TrackIndex::find(std::string_view video_id, std::string_view text) const {
  for (const auto& e : entries_)
    if (e.video_id == video_id && e.text == text) return e;
  throw InputError(fmt::format("{}: no track for video '{}' and text '{}'",
                               (dir_ / kTrackIndexName).string(), video_id, text));
}

SimilarityTrack TrackIndex::read(std::string_view video_id, std::string_view text) const {
  return read_track(dir_ / find(video_id, text).path);
}

void TrackIndex::add(TrackIndexEntry entry) { entries_.push_back(std::move(entry)); }

void TrackIndex::save() const {
  write_lines(dir_ / kTrackIndexName, entries_, [](const TrackIndexEntry& e) {
    return json{{"video_id", e.video_id}, {"text", e.text}, {"track", e.path}}.dump();
  });
}

std::vector<Annotation> read_annotations(const fs::path& path) {
  return read_lines(path, [](const json& j) {
    Annotation a{j.at("video_id").get<std::string>(), j.at("query").get<std::string>(),
                 j.at("gt_start_sec").get<double>(), j.at("gt_end_sec").get<double>(),
                 j.at("duration").get<double>()};
    a.validate();
    return a;
  });
}

void write_annotations(std::span<const Annotation> anns, const fs::path& path) {
  write_lines(path, anns, [](const Annotation& a) {
    return json{{"video_id", a.video_id},
                {"query", a.query},
                {"gt_start_sec", a.gt_start_sec},
                {"gt_end_sec", a.gt_end_sec},
                {"duration", a.video_duration_sec}}
        .dump();
  });
}

std::string encode_prediction(const FinalPrediction& p) {
  return json{{"video_id", p.video_id},   {"query", p.query},
              {"start_sec", p.start_sec}, {"end_sec", p.end_sec},
              {"combo_score", p.combo_score}, {"provenance", p.provenance()}}
      .dump();
}

std::vector<FinalPrediction> read_predictions(const fs::path& path) {
  return read_lines(path, [](const json& j) {
    FinalPrediction p;
    p.video_id = j.at("video_id").get<std::string>();
    p.query = j.at("query").get<std::string>();
    p.start_sec = j.at("start_sec").get<double>();
    p.end_sec = j.at("end_sec").get<double>();
    p.combo_score = j.at("combo_score").get<double>();
    const auto provenance = j.at("provenance").get<std::string>();
    std::string_view rest = provenance;
    const auto head = rest.substr(0, rest.find('+'));
    p.plan_source = plan_source_from_string(head);
    rest.remove_prefix(head.size());
    while (!rest.empty()) {
      rest.remove_prefix(1);
      const auto step = rest.substr(0, rest.find('+'));
      if (step == to_string(FusionFallback::kOrderRelaxed)) p.fallbacks.push_back(FusionFallback::kOrderRelaxed);
      else if (step == to_string(FusionFallback::kIntersectionRelaxed))
        p.fallbacks.push_back(FusionFallback::kIntersectionRelaxed);
      else throw InputError(fmt::format("unknown provenance step '{}'", step));
      rest.remove_prefix(step.size());
    }
    return p;
  });
}

void write_predictions(std::span<const FinalPrediction> preds, const fs::path& path) {
  write_lines(path, preds, encode_prediction);
}

std::string encode_plan(const QueryPlan& plan) {
  json events = json::array();
  for (const auto& e : plan.sub_events) events.push_back({{"description", e.description}, {"order", e.order}});
  return json{{"original_query", plan.original_query},
              {"reasoning", plan.reasoning},
              {"relation", to_string(plan.relation)},
              {"sub_events", events},
              {"provenance", to_string(plan.provenance)}}
             .dump(2) +
         "\n";
}

QueryPlan decode_plan(std::string_view text) {
  const json doc = parse_json(text, "plan file");
  return with_context("plan file", [&] {
    QueryPlan plan;
    plan.original_query = doc.at("original_query").get<std::string>();
    plan.reasoning = doc.value("reasoning", "");
    try {
      plan.relation = relation_from_string(doc.at("relation").get<std::string>());
    } catch (const ParseFailure& e) {
      throw InputError(e.what());
    }
    for (const auto& e : doc.at("sub_events"))
      plan.sub_events.push_back({e.at("description").get<std::string>(), e.at("order").get<int>()});
    plan.provenance = plan_source_from_string(doc.value("provenance", "fallback"));
    if (plan.sub_events.empty()) throw InputError("plan file: no sub-events");
    if ((plan.relation == Relation::kSingle) != (plan.size() == 1))
      throw InputError("plan file: relation 'single' requires exactly one sub-event");
    for (std::size_t n = 0; n < plan.size(); ++n)
      if (plan.sub_events[n].order != static_cast<int>(n))
        throw InputError("plan file: sub-events must be listed in chronological order 0..m-1");
    return plan;
  });
}

std::string encode_proposals(const ProposalSet& set) {
  json events = json::array();
  for (std::size_t n = 0; n < set.sub_events.size(); ++n) {
    json list = json::array();
    for (const auto& p : set.proposals[n]) list.push_back(proposal_to_json(p));
    events.push_back({{"description", set.sub_events[n].description},
                      {"order", set.sub_events[n].order},
                      {"proposals", list}});
  }
  return json{{"video_id", set.video_id}, {"fps", set.fps}, {"sub_events", events}}.dump(2) + "\n";
}

ProposalSet decode_proposals(std::string_view text) {
  const json doc = parse_json(text, "proposals file");
  return with_context("proposals file", [&] {
    ProposalSet set;
    set.video_id = doc.at("video_id").get<std::string>();
    set.fps = doc.at("fps").get<double>();
    for (const auto& e : doc.at("sub_events")) {
      set.sub_events.push_back({e.at("description").get<std::string>(), e.at("order").get<int>()});
      std::vector<ScoredProposal> list;
      for (const auto& p : e.at("proposals")) list.push_back(proposal_from_json(p));
      set.proposals.push_back(std::move(list));
    }
    return set;
  });
}

std::string encode_report(const EvalReport& report) {
  json recall = json::object();
  for (const auto& [m, r] : report.recall_at) recall[fmt::format("R@{}", m)] = r;
  return json{{"count", report.count}, {"miou", report.miou}, {"recall", recall}}.dump(2) + "\n";
}

}  // namespace tfvtg
