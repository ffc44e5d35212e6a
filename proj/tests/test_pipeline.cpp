#include "tweetnet/pipeline.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tweetnet/errors.hpp"
#include "tweetnet/synth.hpp"

using namespace tweetnet;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tweetnet_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PipelineConfig fixture_config(const fs::path& dir) {
  std::ofstream(dir / "tweets.jsonl") << synth::planted_fixture_jsonl();
  PipelineConfig c;
  c.input = (dir / "tweets.jsonl").string();
  c.outdir = (dir / "out").string();
  c.k = 4;
  c.iterations = 60;
  c.burn_in = 30;
  return c;
}

std::set<std::string> fields(const std::vector<ConfigViolation>& v) {
  std::set<std::string> out;
  for (const auto& x : v) out.insert(x.field);
  return out;
}

int cli(const std::string& args) {
  const int status = std::system((std::string(TWEETNET_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST(ValidateConfig, DefaultIsValid) {
  EXPECT_TRUE(validate_config(PipelineConfig{}).empty());
}

TEST(ValidateConfig, AggregatesViolations) {
  PipelineConfig c;
  c.tau = 1.5;
  c.k_min = 1;
  const auto v = validate_config(c);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(fields(v), (std::set<std::string>{"tau", "k_min"}));
}

TEST(ValidateConfig, AgreesWithStagePreconditions) {
  std::mt19937_64 rng(1);
  const auto fx = synth::planted_communities();
  const auto graph = build_retweet_graph(fx.records);
  const auto ug = symmetrize(graph, 1);
  std::set<std::string> members(fx.planted[0].begin(), fx.planted[0].end());
  const auto corpus = build_community_corpus(fx.records, members, "1");

  for (int trial = 0; trial < 300; ++trial) {
    PipelineConfig c;
    auto pick = [&](auto good, auto bad) { return rng() % 5 == 0 ? bad : good; };
    c.tau = pick(0.05 + 0.9 * static_cast<double>(rng() % 100) / 100.0,
                 rng() % 2 ? -0.5 : 1.0 + static_cast<double>(rng() % 10 + 1) / 10.0);
    c.min_weight = pick(std::int64_t{1} + static_cast<std::int64_t>(rng() % 3), std::int64_t{0});
    c.k_min = pick(std::int64_t{2} + static_cast<std::int64_t>(rng() % 3), std::int64_t{1});
    c.k_max = c.k_min + pick(static_cast<std::int64_t>(rng() % 4), std::int64_t{-1});
    c.k = pick(std::int64_t{3}, std::int64_t{1});
    c.n_topics = pick(std::int64_t{1} + static_cast<std::int64_t>(rng() % 4), std::int64_t{0});
    c.alpha = pick(std::optional<double>{}, std::optional<double>{-1.0});
    c.beta = pick(0.01, 0.0);
    c.iterations = pick(std::int64_t{5}, std::int64_t{0});
    c.top_n_keywords = pick(std::int64_t{5}, std::int64_t{0});
    c.top_n_terms = pick(std::int64_t{5}, std::int64_t{0});

    bool stages_ok = true;
    auto attempt = [&](auto&& f) {
      try {
        f();
      } catch (const DomainError&) {
        stages_ok = false;
      }
    };
    attempt([&] { classify_roles(graph, c.tau); });
    attempt([&] { symmetrize(graph, static_cast<std::uint64_t>(std::max<std::int64_t>(0, c.min_weight))); });
    attempt([&] {
      if (c.k_min < 2 || c.k_max < c.k_min) throw DomainError("range");
      community_count_sweep(ug, static_cast<std::size_t>(c.k_min),
                            static_cast<std::size_t>(c.k_max), OverlapRule::kStandard);
    });
    attempt([&] {
      if (c.k < 2) throw DomainError("k");
      detect_communities(ug, static_cast<std::size_t>(c.k), OverlapRule::kStandard);
    });
    attempt([&] {
      LdaParams p;
      p.n_topics = static_cast<int>(c.n_topics);
      p.alpha = c.alpha ? *c.alpha : (c.n_topics > 0 ? default_alpha(static_cast<int>(c.n_topics)) : 1.0);
      p.beta = c.beta;
      p.iterations = static_cast<int>(c.iterations);
      p.burn_in = 0;
      const auto m = fit_lda(corpus, p);
      topic_keywords(m, corpus.vocab, static_cast<std::size_t>(std::max<std::int64_t>(0, c.top_n_keywords)));
    });
    attempt([&] {
      description_term_proportions(fx.records, default_description_stoplist(),
                                   static_cast<std::size_t>(std::max<std::int64_t>(0, c.top_n_terms)));
    });
    EXPECT_EQ(validate_config(c).empty(), stages_ok) << config_to_json(c).dump();
  }
}

TEST(Config, RoundTripsThroughFile) {
  std::mt19937_64 rng(2);
  const auto dir = scratch("config");
  for (int i = 0; i < 50; ++i) {
    PipelineConfig c;
    c.input = "in" + std::to_string(rng());
    c.keywords = {"k" + std::to_string(rng() % 10), "#x"};
    c.tau = static_cast<double>(rng() % 1000) / 997.0;
    c.k = static_cast<std::int64_t>(rng() % 20);
    c.max_cliques = rng();
    c.alpha = rng() % 2 ? std::optional<double>(0.1 * static_cast<double>(rng() % 50))
                        : std::nullopt;
    c.beta = 1.0 / static_cast<double>(1 + rng() % 1000);
    c.seed = rng();
    c.rule = rng() % 2 ? "loose" : "standard";
    c.resume = rng() % 2;
    save_config(c, dir / "c.json");
    EXPECT_EQ(load_config(dir / "c.json"), c);
  }
}

TEST(Config, RejectsUnknownAndMistypedFields) {
  EXPECT_THROW(config_from_json(nlohmann::json{{"tua", 0.5}}), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"tau", "high"}}), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::array()), ConfigError);
  EXPECT_EQ(config_from_json(nlohmann::json::object()), PipelineConfig{});
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, HashTracksMeaningfulFieldsOnly) {
  const PipelineConfig base;
  const auto h = config_hash(base);
  std::vector<std::function<void(PipelineConfig&)>> meaningful{
      [](auto& c) { c.input = "x"; },        [](auto& c) { c.keywords = {"q"}; },
      [](auto& c) { c.tau = 0.6; },          [](auto& c) { c.min_weight = 2; },
      [](auto& c) { c.k = 5; },              [](auto& c) { c.k_min = 4; },
      [](auto& c) { c.k_max = 11; },         [](auto& c) { c.rule = "loose"; },
      [](auto& c) { c.max_cliques = 5; },    [](auto& c) { c.n_topics = 3; },
      [](auto& c) { c.alpha = 6.25; },       [](auto& c) { c.beta = 0.02; },
      [](auto& c) { c.iterations = 10; },    [](auto& c) { c.burn_in = 3; },
      [](auto& c) { c.seed = 1; },           [](auto& c) { c.top_n_keywords = 3; },
      [](auto& c) { c.top_n_terms = 3; },    [](auto& c) { c.stoplist = "none"; },
      [](auto& c) { c.doc_unit = "user"; },  [](auto& c) { c.holdout_fraction = 0.2; },
  };
  for (const auto& change : meaningful) {
    PipelineConfig c;
    change(c);
    EXPECT_NE(config_hash(c), h) << config_to_json(c).dump();
  }
  PipelineConfig c;
  c.outdir = "elsewhere";
  c.threads = 8;
  c.resume = true;
  EXPECT_EQ(config_hash(c), h);
}

TEST(RunPipeline, FixtureBundleRecoversPlantedCommunities) {
  const auto dir = scratch("run");
  const auto c = fixture_config(dir);
  const auto bundle = run_pipeline(c);
  EXPECT_TRUE(validate_manifest(c.outdir).empty());
  const fs::path out = c.outdir;
  for (const char* f : {"network_stats.json", "degree_histogram.csv", "roles.csv",
                        "communities_k4_standard.json", "sweep_standard.csv",
                        "topics_community1.json", "doc_topics_community1.csv",
                        "term_frequencies.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }

  const auto cover = read_cover_json(out / "communities_k4_standard.json");
  const auto fx = synth::planted_communities();
  std::set<std::set<std::string>> got;
  for (const auto& [id, members] : cover) got.insert(members);
  std::set<std::set<std::string>> planted;
  for (const auto& p : fx.planted) planted.insert({p.begin(), p.end()});
  EXPECT_EQ(got, planted);

  // Same answer from brute force on the emitted undirected graph.
  const auto ug = read_undirected_graph(out);
  oracle::EdgeList edges;
  for (const auto& e : ug.edges()) edges.emplace_back(e.u, e.v);
  std::set<std::set<std::string>> brute;
  for (const auto& comm : oracle::communities(oracle::adjacency(ug.node_count(), edges), 4, false)) {
    std::set<std::string> named;
    for (auto v : comm) named.insert(ug.label(v));
    brute.insert(named);
  }
  EXPECT_EQ(brute, planted);
}

TEST(RunPipeline, DeterministicAndResumable) {
  const auto dir = scratch("determinism");
  auto c = fixture_config(dir);
  run_pipeline(c);
  const fs::path first = c.outdir;
  c.outdir = (dir / "second").string();
  c.threads = 3;
  run_pipeline(c);
  for (const auto& entry : fs::directory_iterator(first)) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(fs::path(c.outdir) / name)) << name;
  }

  c.resume = true;
  const auto resumed = run_pipeline(c);
  for (const auto& s : resumed.stages) EXPECT_TRUE(s.skipped) << s.name;
  EXPECT_TRUE(validate_manifest(c.outdir).empty());
}

TEST(RunPipeline, FailureLeavesPartialMarker) {
  const auto dir = scratch("failure");
  auto c = fixture_config(dir);
  c.input = (dir / "missing.jsonl").string();
  try {
    run_pipeline(c);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
    EXPECT_EQ(e.exit_code(), kExitInput);
  }
  EXPECT_TRUE(fs::exists(fs::path(c.outdir) / ".partial"));

  c = fixture_config(dir);
  c.stoplist = (dir / "no_such_stoplist").string();
  try {
    run_pipeline(c);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "profiles");
  }
  EXPECT_TRUE(fs::exists(fs::path(c.outdir) / "network_stats.json"));
  EXPECT_FALSE(validate_manifest(c.outdir).empty());

  c.k_min = 1;
  EXPECT_THROW(run_pipeline(c), ConfigError);
}

TEST(Manifest, DetectsTamperingAndStrayFiles) {
  const auto dir = scratch("manifest");
  const auto c = fixture_config(dir);
  run_pipeline(c);
  const fs::path out = c.outdir;
  ASSERT_TRUE(validate_manifest(out).empty());
  std::ofstream(out / "roles.csv", std::ios::app) << "x\n";
  EXPECT_EQ(validate_manifest(out).size(), 1u);
  std::ofstream(out / "stray.txt") << "x";
  EXPECT_EQ(validate_manifest(out).size(), 2u);
  fs::remove(out / "sweep_standard.csv");
  EXPECT_EQ(validate_manifest(out).size(), 3u);
  EXPECT_NE(render_report(out).find("Network:"), std::string::npos);
}

TEST(SplitCorpus, DeterministicAndDisjoint) {
  const auto fx = synth::planted_communities();
  std::set<std::string> members(fx.planted[1].begin(), fx.planted[1].end());
  const auto corpus = build_community_corpus(fx.records, members, "2");
  const auto a = split_corpus(corpus, 0.2, 5);
  const auto b = split_corpus(corpus, 0.2, 5);
  EXPECT_EQ(a.held_out.size(), b.held_out.size());
  EXPECT_EQ(a.train.documents.size() + a.held_out.size(), corpus.documents.size());
  std::set<std::string> ids;
  for (const auto& d : a.train.documents) ids.insert(d.doc_id);
  for (const auto& d : a.held_out) EXPECT_FALSE(ids.contains(d.doc_id));
  for (std::size_t i = 0; i < a.held_out.size(); ++i) {
    EXPECT_EQ(a.held_out[i].tokens, b.held_out[i].tokens);
  }
  EXPECT_TRUE(split_corpus(corpus, 0.0, 5).held_out.empty());
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  std::ofstream(dir / "tweets.jsonl") << synth::planted_fixture_jsonl();
  const auto out = (dir / "out").string();
  const auto input = (dir / "tweets.jsonl").string();
  EXPECT_EQ(cli("run --input " + input + " --outdir " + out + " --k 4 --iters 20 --burn-in 5"), 0);
  EXPECT_EQ(cli("report --outdir " + out), 0);
  // The file sets an invalid tau; the flag overrides it.
  std::ofstream(dir / "good.json") << R"({"k": 4, "iterations": 20, "burn_in": 5, "tau": 1.5})";
  EXPECT_EQ(cli("--config " + (dir / "good.json").string() + " --outdir " + out + " graph"), 2);
  EXPECT_EQ(cli("--config " + (dir / "good.json").string() + " --outdir " + out +
                " graph --tau 0.4"),
            0);
  EXPECT_EQ(cli("run --input " + (dir / "nope").string() + " --outdir " + out), 3);
  EXPECT_EQ(cli("graph --outdir " + out + " --tau 7"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli("--config " + (dir / "none.json").string() + " run"), 2);
  std::ofstream(dir / "bad.json") << R"({"tau": 1.5, "k_min": 1})";
  EXPECT_EQ(cli("--config " + (dir / "bad.json").string() + " run --input " + input), 2);

  // Stage subcommands chain through files.
  const auto staged = (dir / "staged").string();
  EXPECT_EQ(cli("ingest --input " + input + " --outdir " + staged), 0);
  EXPECT_EQ(cli("graph --outdir " + staged), 0);
  EXPECT_EQ(cli("communities --k 4 --k-max 6 --outdir " + staged), 0);
  EXPECT_EQ(cli("topics --k 4 --iters 10 --burn-in 2 --outdir " + staged), 0);
  EXPECT_EQ(cli("profiles --top-n 5 --outdir " + staged), 0);
  EXPECT_TRUE(fs::exists(fs::path(staged) / "topics_community2.json"));
  EXPECT_EQ(cli("communities --k 4 --max-cliques 10 --outdir " + staged), 4);
}
