#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tweetnet/communities.hpp"
#include "tweetnet/graph.hpp"
#include "tweetnet/ingest.hpp"
#include "tweetnet/profiles.hpp"
#include "tweetnet/topics.hpp"

namespace tweetnet {

inline constexpr std::string_view kToolVersion = "1.0.0";

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitStage = 4;

struct PipelineConfig {
  std::string input;
  std::vector<std::string> keywords = default_keywords();
  double tau = 0.5;
  std::int64_t min_weight = 1;
  std::int64_t k = 9;
  std::int64_t k_min = 3;
  std::int64_t k_max = 12;
  std::string rule = "standard";
  std::uint64_t max_cliques = 10'000'000;
  std::int64_t n_topics = 8;
  std::optional<double> alpha;  // nullopt = 50 / n_topics
  double beta = 0.01;
  std::int64_t iterations = 1000;
  std::int64_t burn_in = 500;
  std::uint64_t seed = 42;
  std::int64_t top_n_keywords = 10;
  std::int64_t top_n_terms = 10;
  std::string stoplist = "default";  // "default", "none" or a file path
  std::string doc_unit = "tweet";    // "tweet" or "user"
  double holdout_fraction = 0.1;
  std::string outdir = "report";
  std::int64_t threads = 1;
  bool resume = false;

  double effective_alpha() const {
    return alpha ? *alpha : default_alpha(static_cast<int>(n_topics));
  }
  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

nlohmann::json config_to_json(const PipelineConfig& config);
/// Missing keys keep their defaults. Throws ConfigError on unknown keys or
/// wrongly typed values.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const PipelineConfig& config, const std::filesystem::path& path);

/// FNV-1a over the canonical JSON of every field that affects output data
/// (output directory, thread count and resume are excluded), as 16 hex digits.
std::string config_hash(const PipelineConfig& config);

struct ConfigViolation {
  std::string field;
  std::string message;
};

/// Every precondition violation, in field order; empty when valid.
std::vector<ConfigViolation> validate_config(const PipelineConfig& config);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pipeline stage failed; carries the stage name and the exit code to use.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause, int exit_code)
      : std::runtime_error(stage + ": " + cause),
        stage_(std::move(stage)),
        exit_code_(exit_code) {}
  const std::string& stage() const { return stage_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

// ---- stage entry points; each reads and writes files only ----------------

struct IngestRequest {
  std::filesystem::path input;
  std::vector<std::string> keywords;
  std::filesystem::path output;  // filtered JSON lines
  std::filesystem::path stats;   // corpus statistics JSON
};
void run_ingest_stage(const IngestRequest& request);

struct GraphRequest {
  std::filesystem::path records;
  double tau = 0.5;
  std::uint64_t min_weight = 1;
  std::filesystem::path outdir;
};
void run_graph_stage(const GraphRequest& request);

struct CommunitiesRequest {
  std::filesystem::path graph_dir;
  std::size_t k = 9;
  OverlapRule rule = OverlapRule::kStandard;
  std::size_t k_min = 3;
  std::size_t k_max = 12;
  std::uint64_t max_cliques = 10'000'000;
  unsigned threads = 1;
  std::filesystem::path outdir;
};
void run_communities_stage(const CommunitiesRequest& request);

struct TopicsRequest {
  std::filesystem::path records;
  std::filesystem::path communities;
  LdaParams lda;
  std::size_t top_n = 10;
  double holdout_fraction = 0.1;
  DocumentUnit unit = DocumentUnit::kTweet;
  std::filesystem::path outdir;
};
void run_topics_stage(const TopicsRequest& request);

struct ProfilesRequest {
  std::filesystem::path records;
  std::size_t top_n = 10;
  std::set<std::string> stoplist;
  std::filesystem::path outdir;
};
void run_profiles_stage(const ProfilesRequest& request);

/// "default", "none" or a file with one token per line.
std::set<std::string> resolve_stoplist(const std::string& choice);

std::string communities_file_name(std::size_t k, OverlapRule rule);
std::string sweep_file_name(OverlapRule rule);

void write_cover_json(const CommunityCover& cover, const UndirectedGraph& g,
                      const std::filesystem::path& path);
/// Community id and member user ids, in file order.
std::vector<std::pair<int, std::set<std::string>>> read_cover_json(
    const std::filesystem::path& path);

/// Deterministic train/held-out split of a corpus; the training vocabulary
/// is rebuilt from the training documents and held-out documents are
/// encoded against it.
struct CorpusSplit {
  Corpus train;
  std::vector<Document> held_out;
};
CorpusSplit split_corpus(const Corpus& corpus, double holdout_fraction,
                         std::uint64_t seed);

// ---- whole pipeline -------------------------------------------------------

struct StageTiming {
  std::string name;
  bool skipped = false;
  double seconds = 0.0;
};

struct ManifestFile {
  std::string path;  // relative to the bundle directory
  std::uint64_t bytes = 0;
  std::string fnv1a64;
};

struct ReportBundle {
  std::filesystem::path directory;
  std::string config_hash;
  std::vector<StageTiming> stages;
  std::vector<ManifestFile> files;
};

inline constexpr std::string_view kManifestName = "manifest.json";
inline constexpr std::string_view kPartialMarker = ".partial";

/// Runs ingest, graph, communities, topics and profiles in order under
/// config.outdir, then writes the manifest. Throws ConfigError for an
/// invalid config and StageError when a stage fails; a failed run leaves
/// its partial outputs plus a `.partial` marker naming the stage.
ReportBundle run_pipeline(const PipelineConfig& config);

/// Problems with a bundle directory: missing or unreadable manifest,
/// listed files that are absent or altered, unlisted files present.
std::vector<std::string> validate_manifest(const std::filesystem::path& dir);

/// Human-readable summary of a bundle.
std::string render_report(const std::filesystem::path& dir);

std::string fnv1a64_hex(std::string_view bytes);
std::string format_double(double value);

}  // namespace tweetnet
