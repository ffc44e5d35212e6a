#include "tweetnet/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <tuple>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

#include "tweetnet/csv.hpp"
#include "tweetnet/errors.hpp"
#include "tweetnet/random.hpp"

namespace tweetnet {
namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

template <typename Json>
void write_json(const fs::path& path, const Json& j) {
  write_text(path, j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n");
}

ojson stats_json(const CorpusStats& s) {
  return {{"tweet_count", s.tweet_count},
          {"unique_user_count", s.unique_user_count},
          {"retweet_count", s.retweet_count},
          {"records_with_description", s.records_with_description},
          {"malformed_lines", s.malformed_lines}};
}

ojson moments_json(const DistributionMoments<double>& m) {
  return {{"min", m.min},
          {"max", m.max},
          {"mean", m.mean},
          {"variance", m.variance},
          {"skew", m.skew}};
}

std::string utc_now() {
  const auto now = std::chrono::time_point_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
  return format_timestamp(Timestamp{now.time_since_epoch()});
}

template <typename T>
T json_get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

bool is_artifact_name(const std::string& name) {
  static const std::regex pattern(
      R"((filtered_tweets\.jsonl|corpus_stats\.json|config\.json|network_stats\.json|degree_histogram\.csv|roles\.csv|retweet_edges\.csv|undirected_edges\.csv|nodes\.csv|communities_k\d+_(standard|loose)\.json|sweep_(standard|loose)\.csv|topics_community\d+\.json|doc_topics_community\d+\.csv|topics_summary\.json|term_frequencies\.csv|profiles_summary\.json|manifest\.json|\.partial))");
  return std::regex_match(name, pattern);
}

std::vector<std::string> bundle_files(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name != kManifestName) names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, r.ptr);
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- configuration ----------------------------------------------------------

json config_to_json(const PipelineConfig& c) {
  json j;
  j["input"] = c.input;
  j["keywords"] = c.keywords;
  j["tau"] = c.tau;
  j["min_weight"] = c.min_weight;
  j["k"] = c.k;
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  j["rule"] = c.rule;
  j["max_cliques"] = c.max_cliques;
  j["n_topics"] = c.n_topics;
  j["alpha"] = c.alpha ? json(*c.alpha) : json("auto");
  j["beta"] = c.beta;
  j["iterations"] = c.iterations;
  j["burn_in"] = c.burn_in;
  j["seed"] = c.seed;
  j["top_n_keywords"] = c.top_n_keywords;
  j["top_n_terms"] = c.top_n_terms;
  j["stoplist"] = c.stoplist;
  j["doc_unit"] = c.doc_unit;
  j["holdout_fraction"] = c.holdout_fraction;
  j["outdir"] = c.outdir;
  j["threads"] = c.threads;
  j["resume"] = c.resume;
  return j;
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kKnown{
      "input", "keywords", "tau", "min_weight", "k", "k_min", "k_max", "rule",
      "max_cliques", "n_topics", "alpha", "beta", "iterations", "burn_in", "seed",
      "top_n_keywords", "top_n_terms", "stoplist", "doc_unit", "holdout_fraction",
      "outdir", "threads", "resume"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  PipelineConfig c;
  auto set = [&](const char* key, auto& field) {
    if (j.contains(key)) field = json_get<std::decay_t<decltype(field)>>(j, key);
  };
  set("input", c.input);
  set("keywords", c.keywords);
  set("tau", c.tau);
  set("min_weight", c.min_weight);
  set("k", c.k);
  set("k_min", c.k_min);
  set("k_max", c.k_max);
  set("rule", c.rule);
  set("max_cliques", c.max_cliques);
  set("n_topics", c.n_topics);
  if (j.contains("alpha")) {
    const auto& a = j.at("alpha");
    if (a.is_null() || (a.is_string() && a.get<std::string>() == "auto")) {
      c.alpha.reset();
    } else if (a.is_number()) {
      c.alpha = a.get<double>();
    } else {
      throw ConfigError("config field 'alpha' must be a number or \"auto\"");
    }
  }
  set("beta", c.beta);
  set("iterations", c.iterations);
  set("burn_in", c.burn_in);
  set("seed", c.seed);
  set("top_n_keywords", c.top_n_keywords);
  set("top_n_terms", c.top_n_terms);
  set("stoplist", c.stoplist);
  set("doc_unit", c.doc_unit);
  set("holdout_fraction", c.holdout_fraction);
  set("outdir", c.outdir);
  set("threads", c.threads);
  set("resume", c.resume);
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config '" + path.string() + "' is not valid JSON");
  return config_from_json(j);
}

void save_config(const PipelineConfig& config, const fs::path& path) {
  write_json(path, config_to_json(config));
}

std::string config_hash(const PipelineConfig& config) {
  json j = config_to_json(config);
  j.erase("outdir");
  j.erase("threads");
  j.erase("resume");
  return fnv1a64_hex(j.dump());
}

std::vector<ConfigViolation> validate_config(const PipelineConfig& c) {
  std::vector<ConfigViolation> v;
  auto fail = [&](const char* field, std::string message) {
    v.push_back({field, std::move(message)});
  };
  if (c.keywords.empty()) fail("keywords", "at least one keyword is required");
  if (!(c.tau > 0.0 && c.tau <= 1.0)) fail("tau", "must lie in (0, 1]");
  if (c.min_weight < 1) fail("min_weight", "must be >= 1");
  if (c.k < 2) fail("k", "must be >= 2");
  if (c.k_min < 2) fail("k_min", "must be >= 2");
  if (c.k_max < c.k_min) fail("k_max", "must be >= k_min");
  if (!parse_rule(c.rule)) fail("rule", "must be 'standard' or 'loose'");
  if (c.max_cliques < 1) fail("max_cliques", "must be >= 1");
  if (c.n_topics < 1) fail("n_topics", "must be >= 1");
  if (c.alpha && !(*c.alpha > 0.0 && std::isfinite(*c.alpha))) {
    fail("alpha", "must be positive or \"auto\"");
  }
  if (!(c.beta > 0.0 && std::isfinite(c.beta))) fail("beta", "must be positive");
  if (c.iterations < 1) fail("iterations", "must be >= 1");
  if (c.burn_in < 0) fail("burn_in", "must be >= 0");
  if (c.top_n_keywords < 1) fail("top_n_keywords", "must be >= 1");
  if (c.top_n_terms < 1) fail("top_n_terms", "must be >= 1");
  if (c.stoplist.empty()) fail("stoplist", "must be 'default', 'none' or a path");
  if (c.doc_unit != "tweet" && c.doc_unit != "user") {
    fail("doc_unit", "must be 'tweet' or 'user'");
  }
  if (!(c.holdout_fraction >= 0.0 && c.holdout_fraction < 1.0)) {
    fail("holdout_fraction", "must lie in [0, 1)");
  }
  if (c.outdir.empty()) fail("outdir", "output directory is required");
  if (c.threads < 1) fail("threads", "must be >= 1");
  return v;
}

std::set<std::string> resolve_stoplist(const std::string& choice) {
  if (choice == "default") return default_description_stoplist();
  if (choice == "none") return {};
  std::ifstream in(choice);
  if (!in) throw InputError("cannot read stoplist '" + choice + "'");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& t : tokenize_description(line)) words.insert(std::move(t));
  }
  return words;
}

// ---- stages -------------------------------------------------------------

void run_ingest_stage(const IngestRequest& request) {
  if (request.input.empty()) throw InputError("no input file given");
  const ParsedStream parsed = read_tweet_file(request.input);
  std::vector<TweetRecord> kept;
  for (const auto& r : parsed.records) {
    if (keyword_filter(r, request.keywords)) kept.push_back(r);
  }
  std::ostringstream out;
  write_tweet_stream(out, kept);
  write_text(request.output, out.str());

  CorpusStats input = corpus_summary(parsed.records);
  input.malformed_lines = parsed.malformed_lines;
  ojson stats;
  stats["keywords"] = request.keywords;
  stats["input"] = stats_json(input);
  stats["filtered"] = stats_json(corpus_summary(kept));
  write_json(request.stats, stats);
}

void run_graph_stage(const GraphRequest& request) {
  const ParsedStream parsed = read_tweet_file(request.records);
  const RetweetGraph g = build_retweet_graph(parsed.records);
  const DegreeSummary s = degree_summary(g);
  const fs::path dir = request.outdir;
  fs::create_directories(dir);

  ojson stats;
  stats["node_count"] = s.node_count;
  stats["unique_edge_count"] = s.unique_edge_count;
  stats["weighted_edge_sum"] = s.weighted_edge_sum;
  stats["out_weighted"] = moments_json(s.out_weighted);
  stats["in_weighted"] = moments_json(s.in_weighted);
  stats["out_unweighted"] = moments_json(s.out_unweighted);
  stats["in_unweighted"] = moments_json(s.in_unweighted);
  // Unweighted mean = unique edges / nodes, the figure comparable to the
  // published mean degree.
  stats["table1_comparable_weighting"] = "unweighted";
  write_json(dir / "network_stats.json", stats);

  const DegreeVectors d = degree_vectors(g);
  std::ostringstream hist;
  hist << "weighting,degree,out_count,in_count\n";
  for (const auto& [name, out, in] :
       {std::tuple{"weighted", &d.out_weighted, &d.in_weighted},
        std::tuple{"unweighted", &d.out_unweighted, &d.in_unweighted}}) {
    for (const auto& row : degree_histogram(*out, *in)) {
      hist << name << ',' << row.degree << ',' << row.out_count << ',' << row.in_count
           << '\n';
    }
  }
  write_text(dir / "degree_histogram.csv", hist.str());

  std::ostringstream roles;
  roles << "user_id,in_deg,out_deg,score,label\n";
  for (const auto& r : classify_roles(g, request.tau)) {
    csv::write_row(roles, {r.user, format_double(r.in_deg), format_double(r.out_deg),
                           format_double(r.score), std::string(role_name(r.label))});
  }
  write_text(dir / "roles.csv", roles.str());

  std::ostringstream arcs;
  arcs << "source,target,weight\n";
  for (const auto& a : g.arcs()) {
    csv::write_row(arcs, {g.user(a.source), g.user(a.target), std::to_string(a.weight)});
  }
  write_text(dir / "retweet_edges.csv", arcs.str());

  write_undirected_graph(symmetrize(g, request.min_weight), dir);
}

std::string communities_file_name(std::size_t k, OverlapRule rule) {
  return "communities_k" + std::to_string(k) + "_" + std::string(rule_name(rule)) +
         ".json";
}

std::string sweep_file_name(OverlapRule rule) {
  return "sweep_" + std::string(rule_name(rule)) + ".csv";
}

void write_cover_json(const CommunityCover& cover, const UndirectedGraph& g,
                      const fs::path& path) {
  ojson arr = ojson::array();
  for (std::size_t i = 0; i < cover.communities.size(); ++i) {
    ojson members = ojson::array();
    for (NodeId v : cover.communities[i]) members.push_back(g.label(v));
    ojson c;
    c["community_id"] = i + 1;
    c["size"] = cover.communities[i].size();
    c["members"] = std::move(members);
    arr.push_back(std::move(c));
  }
  write_json(path, arr);
}

std::vector<std::pair<int, std::set<std::string>>> read_cover_json(const fs::path& path) {
  const json arr = read_json(path);
  if (!arr.is_array()) throw InputError("'" + path.string() + "' is not a JSON array");
  std::vector<std::pair<int, std::set<std::string>>> out;
  try {
    for (const auto& c : arr) {
      out.emplace_back(c.at("community_id").get<int>(),
                       c.at("members").get<std::set<std::string>>());
    }
  } catch (const json::exception& e) {
    throw InputError("malformed communities file '" + path.string() + "': " + e.what());
  }
  return out;
}

void run_communities_stage(const CommunitiesRequest& request) {
  if (request.k_min < 2 || request.k_min > request.k_max) {
    throw DomainError("communities: requires 2 <= k_min <= k_max");
  }
  const UndirectedGraph g = read_undirected_graph(request.graph_dir);
  fs::create_directories(request.outdir);

  const CliqueCommunityIndex index(g, request.threads);
  const SweepResult sweep = index.sweep(request.k_min, request.k_max, request.rule);
  std::ostringstream csv_out;
  csv_out << "k,community_count,clique_count\n";
  for (const auto& e : sweep.entries) {
    csv_out << e.k << ',' << e.community_count << ',' << e.clique_count << '\n';
  }
  write_text(request.outdir / sweep_file_name(request.rule), csv_out.str());

  const CommunityCover cover = detect_communities(g, request.k, request.rule,
                                                  request.max_cliques, request.threads);
  write_cover_json(cover, g, request.outdir / communities_file_name(request.k, request.rule));
}

CorpusSplit split_corpus(const Corpus& corpus, double holdout_fraction,
                         std::uint64_t seed) {
  const std::size_t n = corpus.documents.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }
  std::size_t held = static_cast<std::size_t>(std::floor(holdout_fraction * static_cast<double>(n)));
  if (holdout_fraction > 0.0 && held == 0 && n >= 2) held = 1;
  std::vector<bool> is_held(n, false);
  for (std::size_t i = 0; i < held; ++i) is_held[order[i]] = true;

  auto decode = [&](const Document& d) {
    std::vector<std::string> tokens;
    for (TokenId w : d.tokens) tokens.push_back(corpus.vocab.token(w));
    return tokens;
  };
  std::map<std::string, std::uint64_t> frequency;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_held[i]) continue;
    for (TokenId w : corpus.documents[i].tokens) ++frequency[corpus.vocab.token(w)];
  }
  CorpusSplit split;
  for (const auto& [token, count] : frequency) split.train.vocab.add(token, count);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = corpus.documents[i];
    auto doc = encode_document(split.train.vocab, d.doc_id, decode(d));
    (is_held[i] ? split.held_out : split.train.documents).push_back(std::move(doc));
  }
  return split;
}

void run_topics_stage(const TopicsRequest& request) {
  const ParsedStream parsed = read_tweet_file(request.records);
  const auto communities = read_cover_json(request.communities);
  fs::create_directories(request.outdir);

  CorpusOptions options;
  options.unit = request.unit;
  ojson fitted = ojson::array();
  ojson skipped = ojson::array();
  for (const auto& [id, members] : communities) {
    const std::string label = std::to_string(id);
    CorpusSplit split;
    try {
      const Corpus corpus = build_community_corpus(parsed.records, members, label, options);
      split = split_corpus(corpus, request.holdout_fraction, request.lda.seed);
    } catch (const DomainError& e) {
      skipped.push_back({{"community_id", id}, {"reason", e.what()}});
      continue;
    }

    const TopicModel model = fit_lda(split.train, request.lda);
    ojson topics = ojson::array();
    for (const auto& t : topic_keywords(model, split.train.vocab, request.top_n)) {
      ojson keywords = ojson::array();
      for (const auto& k : t.keywords) keywords.push_back({{"token", k.token}, {"prob", k.prob}});
      topics.push_back({{"topic_id", t.topic_id}, {"keywords", std::move(keywords)}});
    }
    ojson out;
    out["community_id"] = id;
    out["n_topics"] = model.n_topics;
    out["alpha"] = model.alpha;
    out["beta"] = model.beta;
    out["seed"] = model.seed;
    out["iterations"] = request.lda.iterations;
    out["documents"] = split.train.documents.size();
    out["tokens"] = split.train.token_count();
    out["vocabulary_size"] = split.train.vocab.size();
    out["held_out_documents"] = split.held_out.size();
    out["topics"] = std::move(topics);
    out["perplexity"] = nullptr;
    if (!split.held_out.empty()) {
      try {
        const auto p = held_out_perplexity(model, split.held_out,
                                           FoldInOptions{50, request.lda.seed});
        out["perplexity"] = p.perplexity;
        out["held_out_scored_tokens"] = p.scored_tokens;
        out["held_out_skipped_tokens"] = p.skipped_tokens;
      } catch (const DomainError&) {
        // every held-out token was out of vocabulary
      }
    }
    write_json(request.outdir / ("topics_community" + label + ".json"), out);

    std::ostringstream doc_csv;
    doc_csv << "doc_id";
    for (int t = 0; t < model.n_topics; ++t) doc_csv << ",topic_" << t;
    doc_csv << '\n';
    for (std::size_t d = 0; d < model.doc_count(); ++d) {
      const Eigen::VectorXd theta = doc_topic_distribution(model, d);
      doc_csv << csv::escape(split.train.documents[d].doc_id);
      for (Eigen::Index t = 0; t < theta.size(); ++t) doc_csv << ',' << format_double(theta[t]);
      doc_csv << '\n';
    }
    write_text(request.outdir / ("doc_topics_community" + label + ".csv"), doc_csv.str());
    fitted.push_back(id);
  }
  write_json(request.outdir / "topics_summary.json", ojson
             {{"fitted", std::move(fitted)}, {"skipped", std::move(skipped)}});
}

void run_profiles_stage(const ProfilesRequest& request) {
  const ParsedStream parsed = read_tweet_file(request.records);
  const TermFrequencyTable table =
      description_term_proportions(parsed.records, request.stoplist, request.top_n);
  std::ostringstream out;
  out << "rank,term,proportion,user_count\n";
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    csv::write_row(out, {std::to_string(i + 1), e.term, format_double(e.proportion),
                         std::to_string(e.user_count)});
  }
  write_text(request.outdir / "term_frequencies.csv", out.str());
  write_json(request.outdir / "profiles_summary.json", ojson
             {{"user_base", table.user_base}, {"top_n", request.top_n}});
}

// ---- pipeline -------------------------------------------------------------

ReportBundle run_pipeline(const PipelineConfig& config) {
  const auto violations = validate_config(config);
  if (!violations.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& v : violations) msg += " " + v.field + " (" + v.message + ");";
    throw ConfigError(msg);
  }
  const fs::path dir = config.outdir;
  const OverlapRule rule = *parse_rule(config.rule);
  const auto k = static_cast<std::size_t>(config.k);
  const fs::path filtered = dir / "filtered_tweets.jsonl";
  const fs::path communities = dir / communities_file_name(k, rule);

  try {
    fs::create_directories(dir);
    if (!config.resume) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_artifact_name(entry.path().filename().string())) {
          fs::remove(entry.path());
        }
      }
    }
  } catch (const fs::filesystem_error& e) {
    throw StageError("setup", e.what(), kExitInput);
  }

  ReportBundle bundle;
  bundle.directory = dir;
  bundle.config_hash = config_hash(config);
  const std::string started = utc_now();

  struct Stage {
    std::string name;
    std::vector<fs::path> outputs;
    std::function<void()> run;
  };
  LdaParams lda;
  lda.n_topics = static_cast<int>(config.n_topics);
  lda.alpha = config.effective_alpha();
  lda.beta = config.beta;
  lda.iterations = static_cast<int>(config.iterations);
  lda.burn_in = static_cast<int>(config.burn_in);
  lda.seed = config.seed;

  const std::vector<Stage> stages{
      {"ingest",
       {filtered, dir / "corpus_stats.json"},
       [&] {
         run_ingest_stage({config.input, config.keywords, filtered, dir / "corpus_stats.json"});
       }},
      {"graph",
       {dir / "network_stats.json", dir / "undirected_edges.csv", dir / "nodes.csv"},
       [&] {
         run_graph_stage({filtered, config.tau,
                          static_cast<std::uint64_t>(config.min_weight), dir});
       }},
      {"communities",
       {communities, dir / sweep_file_name(rule)},
       [&] {
         run_communities_stage({dir, k, rule, static_cast<std::size_t>(config.k_min),
                                static_cast<std::size_t>(config.k_max), config.max_cliques,
                                static_cast<unsigned>(config.threads), dir});
       }},
      {"topics",
       {dir / "topics_summary.json"},
       [&] {
         run_topics_stage({filtered, communities, lda,
                           static_cast<std::size_t>(config.top_n_keywords),
                           config.holdout_fraction,
                           config.doc_unit == "user" ? DocumentUnit::kUser
                                                     : DocumentUnit::kTweet,
                           dir});
       }},
      {"profiles",
       {dir / "term_frequencies.csv"},
       [&] {
         run_profiles_stage({filtered, static_cast<std::size_t>(config.top_n_terms),
                             resolve_stoplist(config.stoplist), dir});
       }},
  };

  for (const auto& stage : stages) {
    const bool done = std::all_of(stage.outputs.begin(), stage.outputs.end(),
                                  [](const fs::path& p) { return fs::exists(p); });
    if (config.resume && done) {
      bundle.stages.push_back({stage.name, true, 0.0});
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      stage.run();
    } catch (const std::exception& e) {
      const int code = dynamic_cast<const InputError*>(&e) ? kExitInput : kExitStage;
      write_text(dir / kPartialMarker,
                 "stage=" + stage.name + "\nerror=" + std::string(e.what()) + "\n");
      throw StageError(stage.name, e.what(), code);
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    bundle.stages.push_back({stage.name, false, dt.count()});
  }

  fs::remove(dir / kPartialMarker);
  json recorded = config_to_json(config);
  recorded.erase("outdir");
  recorded.erase("threads");
  recorded.erase("resume");
  write_json(dir / "config.json", recorded);

  for (const auto& name : bundle_files(dir)) {
    const std::string bytes = read_text(dir / name);
    bundle.files.push_back({name, bytes.size(), fnv1a64_hex(bytes)});
  }
  ojson manifest;
  manifest["tool"] = "tweetnet";
  manifest["version"] = kToolVersion;
  manifest["config_hash"] = bundle.config_hash;
  manifest["started_at"] = started;
  manifest["finished_at"] = utc_now();
  ojson stages_json = ojson::array();
  for (const auto& s : bundle.stages) {
    stages_json.push_back({{"name", s.name},
                           {"status", s.skipped ? "skipped" : "ran"},
                           {"seconds", s.seconds}});
  }
  manifest["stages"] = std::move(stages_json);
  ojson files_json = ojson::array();
  for (const auto& f : bundle.files) {
    files_json.push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", f.fnv1a64}});
  }
  manifest["files"] = std::move(files_json);
  write_json(dir / kManifestName, manifest);
  return bundle;
}

std::vector<std::string> validate_manifest(const fs::path& dir) {
  std::vector<std::string> problems;
  json manifest;
  try {
    manifest = read_json(dir / kManifestName);
  } catch (const InputError& e) {
    return {e.what()};
  }
  std::set<std::string> listed;
  try {
    for (const auto& f : manifest.at("files")) {
      const auto path = f.at("path").get<std::string>();
      listed.insert(path);
      if (!fs::exists(dir / path)) {
        problems.push_back("listed file missing: " + path);
        continue;
      }
      const std::string bytes = read_text(dir / path);
      if (bytes.size() != f.at("bytes").get<std::uint64_t>() ||
          fnv1a64_hex(bytes) != f.at("fnv1a64").get<std::string>()) {
        problems.push_back("file differs from manifest: " + path);
      }
    }
  } catch (const json::exception& e) {
    problems.push_back(std::string("malformed manifest: ") + e.what());
    return problems;
  }
  for (const auto& name : bundle_files(dir)) {
    if (!listed.contains(name)) problems.push_back("file not in manifest: " + name);
  }
  return problems;
}

std::string render_report(const fs::path& dir) {
  std::ostringstream out;
  const json manifest = read_json(dir / kManifestName);
  out << "tweetnet " << manifest.value("version", "?") << " bundle at " << dir.string() << "\n";
  out << "config hash " << manifest.value("config_hash", "?") << ", finished "
      << manifest.value("finished_at", "?") << "\n";
  for (const auto& s : manifest.at("stages")) {
    out << "  stage " << std::left << std::setw(12) << s.at("name").get<std::string>()
        << s.at("status").get<std::string>() << "  " << std::fixed << std::setprecision(2)
        << s.at("seconds").get<double>() << " s\n";
  }
  out.unsetf(std::ios::fixed);

  if (fs::exists(dir / "corpus_stats.json")) {
    const json s = read_json(dir / "corpus_stats.json");
    const auto& in = s.at("input");
    const auto& kept = s.at("filtered");
    out << "\nCorpus: " << in.at("tweet_count") << " records read ("
        << in.at("malformed_lines") << " malformed lines skipped), "
        << kept.at("tweet_count") << " matched the keywords, from "
        << kept.at("unique_user_count") << " users; " << kept.at("retweet_count")
        << " retweets\n";
  }
  if (fs::exists(dir / "network_stats.json")) {
    const json s = read_json(dir / "network_stats.json");
    out << "\nNetwork: " << s.at("node_count") << " nodes, " << s.at("unique_edge_count")
        << " unique edges, weighted sum " << s.at("weighted_edge_sum") << "\n";
    out << std::setprecision(4);
    for (const char* w : {"unweighted", "weighted"}) {
      const auto& o = s.at(std::string("out_") + w);
      const auto& i = s.at(std::string("in_") + w);
      out << "  " << std::left << std::setw(11) << w << "out/in  min " << o.at("min").get<double>()
          << "/" << i.at("min").get<double>() << "  max " << o.at("max").get<double>() << "/"
          << i.at("max").get<double>() << "  mean " << o.at("mean").get<double>() << "/"
          << i.at("mean").get<double>() << "  variance " << o.at("variance").get<double>()
          << "/" << i.at("variance").get<double>() << "  skew " << o.at("skew").get<double>()
          << "/" << i.at("skew").get<double>() << "\n";
    }
  }
  for (const auto& name : bundle_files(dir)) {
    if (name.rfind("sweep_", 0) == 0) {
      out << "\nCommunity counts (" << name << "):\n" << read_text(dir / name);
    }
  }
  for (const auto& name : bundle_files(dir)) {
    if (name.rfind("communities_k", 0) != 0) continue;
    const json arr = read_json(dir / name);
    out << "\n" << name << ": " << arr.size() << " communities, sizes";
    for (const auto& c : arr) out << " " << c.at("size");
    out << "\n";
  }
  for (const auto& name : bundle_files(dir)) {
    if (name.rfind("topics_community", 0) != 0) continue;
    const json t = read_json(dir / name);
    out << "\nCommunity " << t.at("community_id") << " topics (" << t.at("documents")
        << " documents):\n";
    for (const auto& topic : t.at("topics")) {
      out << "  topic " << topic.at("topic_id") << ":";
      int shown = 0;
      for (const auto& kw : topic.at("keywords")) {
        if (shown++ == 5) break;
        out << " " << kw.at("token").get<std::string>();
      }
      out << "\n";
    }
  }
  if (fs::exists(dir / "term_frequencies.csv")) {
    out << "\nProfile terms:\n" << read_text(dir / "term_frequencies.csv");
  }
  return out.str();
}

}  // namespace tweetnet
