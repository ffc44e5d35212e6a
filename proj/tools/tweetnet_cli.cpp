// tweetnet: retweet-network, community and topic pipeline.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tweetnet/errors.hpp"
#include "tweetnet/pipeline.hpp"

namespace fs = std::filesystem;
using namespace tweetnet;

namespace {

struct Flags {
  std::string config_path;
  std::string outdir;
  std::int64_t threads = 0;
  std::uint64_t seed = 0;
  bool resume = false;

  std::string input;
  std::vector<std::string> keywords;
  std::string output;
  std::string stats;
  double tau = 0;
  std::int64_t min_weight = 0;
  std::string graph_dir;
  std::int64_t k = 0;
  std::string rule;
  std::int64_t k_min = 0;
  std::int64_t k_max = 0;
  std::uint64_t max_cliques = 0;
  std::string records;
  std::string communities;
  std::int64_t n_topics = 0;
  std::int64_t top_n = 0;
  std::string alpha;
  double beta = 0;
  std::int64_t iterations = 0;
  std::int64_t burn_in = 0;
  std::string doc_unit;
  double holdout = 0;
  std::string stoplist;
};

bool given(const CLI::App& app, const std::string& name) {
  return app.count(name) > 0;
}

PipelineConfig merge(const CLI::App& app, const CLI::App& sub, const Flags& f) {
  PipelineConfig c = f.config_path.empty() ? PipelineConfig{} : load_config(f.config_path);
  if (given(app, "--outdir")) c.outdir = f.outdir;
  if (given(app, "--threads")) c.threads = f.threads;
  if (given(app, "--seed")) c.seed = f.seed;
  if (given(app, "--resume")) c.resume = f.resume;

  auto has = [&](const char* name) {
    try {
      return sub.count(name) > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (has("--input")) c.input = f.input;
  if (has("--keywords")) c.keywords = f.keywords;
  if (has("--tau")) c.tau = f.tau;
  if (has("--min-weight")) c.min_weight = f.min_weight;
  if (has("--k")) c.k = f.k;
  if (has("--rule")) c.rule = f.rule;
  if (has("--k-min")) c.k_min = f.k_min;
  if (has("--k-max")) c.k_max = f.k_max;
  if (has("--max-cliques")) c.max_cliques = f.max_cliques;
  if (has("--n-topics")) c.n_topics = f.n_topics;
  if (has("--top-n")) {
    if (sub.get_name() == "profiles") {
      c.top_n_terms = f.top_n;
    } else {
      c.top_n_keywords = f.top_n;
    }
  }
  if (has("--alpha")) {
    if (f.alpha == "auto") {
      c.alpha.reset();
    } else {
      try {
        std::size_t used = 0;
        c.alpha = std::stod(f.alpha, &used);
        if (used != f.alpha.size()) throw std::invalid_argument(f.alpha);
      } catch (const std::exception&) {
        throw ConfigError("--alpha must be a number or 'auto'");
      }
    }
  }
  if (has("--beta")) c.beta = f.beta;
  if (has("--iters")) c.iterations = f.iterations;
  if (has("--burn-in")) c.burn_in = f.burn_in;
  if (has("--doc-unit")) c.doc_unit = f.doc_unit;
  if (has("--holdout")) c.holdout_fraction = f.holdout;
  if (has("--stoplist")) c.stoplist = f.stoplist;
  return c;
}

void require_valid(const PipelineConfig& c, const std::set<std::string>& fields) {
  std::string msg;
  for (const auto& v : validate_config(c)) {
    if (fields.empty() || fields.contains(v.field)) {
      msg += "\n  " + v.field + ": " + v.message;
    }
  }
  if (!msg.empty()) throw ConfigError("invalid configuration:" + msg);
}

std::string or_default(const std::string& value, const fs::path& fallback) {
  return value.empty() ? fallback.string() : value;
}

LdaParams lda_params(const PipelineConfig& c) {
  LdaParams p;
  p.n_topics = static_cast<int>(c.n_topics);
  p.alpha = c.effective_alpha();
  p.beta = c.beta;
  p.iterations = static_cast<int>(c.iterations);
  p.burn_in = static_cast<int>(c.burn_in);
  p.seed = c.seed;
  return p;
}

int run_stage(const std::string& stage, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "tweetnet: " << e.what() << "\n";
    return kExitConfig;
  } catch (const StageError& e) {
    std::cerr << "tweetnet: stage " << e.what() << "\n";
    return e.exit_code();
  } catch (const InputError& e) {
    std::cerr << "tweetnet: " << stage << ": input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "tweetnet: " << stage << " failed: " << e.what() << "\n";
    return kExitStage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retweet network, clique-percolation community and topic-model pipeline"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config_path, "JSON configuration file");
  app.add_option("--outdir", f.outdir, "Output directory (default: report)");
  app.add_option("--threads", f.threads, "Worker threads for clique search");
  app.add_option("--seed", f.seed, "Random seed for topic models");
  app.add_flag("--resume", f.resume, "Skip stages whose outputs already exist");

  auto* ingest = app.add_subcommand("ingest", "Parse and keyword-filter a tweet file");
  ingest->add_option("--input", f.input, "Tweet records (.jsonl or .csv)");
  ingest->add_option("--keywords", f.keywords, "Comma-separated keywords")->delimiter(',');
  ingest->add_option("--output", f.output, "Filtered records (JSON lines)");
  ingest->add_option("--stats", f.stats, "Corpus statistics JSON");

  auto* graph = app.add_subcommand("graph", "Build the retweet graph and degree statistics");
  graph->add_option("--input", f.records, "Filtered records");
  graph->add_option("--tau", f.tau, "Role threshold in (0, 1]");
  graph->add_option("--min-weight", f.min_weight, "Minimum undirected edge weight");

  auto* communities = app.add_subcommand("communities", "Clique percolation and k sweep");
  communities->add_option("--graph", f.graph_dir, "Directory written by the graph stage");
  communities->add_option("--k", f.k, "Clique size for the emitted cover");
  communities->add_option("--rule", f.rule, "standard or loose");
  communities->add_option("--k-min", f.k_min, "Smallest k in the sweep");
  communities->add_option("--k-max", f.k_max, "Largest k in the sweep");
  communities->add_option("--max-cliques", f.max_cliques, "k-clique materialization budget");

  auto* topics = app.add_subcommand("topics", "Per-community LDA over hashtag documents");
  topics->add_option("--records", f.records, "Filtered records");
  topics->add_option("--communities", f.communities, "Communities JSON");
  topics->add_option("--n-topics", f.n_topics, "Topics per community model");
  topics->add_option("--top-n", f.top_n, "Keywords per topic");
  topics->add_option("--alpha", f.alpha, "Document-topic prior or 'auto' (50 / n_topics)");
  topics->add_option("--beta", f.beta, "Topic-word prior");
  topics->add_option("--iters", f.iterations, "Gibbs sweeps");
  topics->add_option("--burn-in", f.burn_in, "Sweeps discarded before observation");
  topics->add_option("--doc-unit", f.doc_unit, "tweet or user");
  topics->add_option("--holdout", f.holdout, "Fraction of documents held out");
  topics->add_option("--k", f.k, "k of the default communities file");
  topics->add_option("--rule", f.rule, "Rule of the default communities file");

  auto* profiles = app.add_subcommand("profiles", "Frequent terms in user descriptions");
  profiles->add_option("--records", f.records, "Filtered records");
  profiles->add_option("--top-n", f.top_n, "Terms to report");
  profiles->add_option("--stoplist", f.stoplist, "default, none or a file path");

  auto* run = app.add_subcommand("run", "Run every stage and write the manifest");
  run->add_option("--input", f.input, "Tweet records (.jsonl or .csv)");
  run->add_option("--keywords", f.keywords, "Comma-separated keywords")->delimiter(',');
  run->add_option("--k", f.k, "Clique size for the emitted cover");
  run->add_option("--rule", f.rule, "standard or loose");
  run->add_option("--k-min", f.k_min, "Smallest k in the sweep");
  run->add_option("--k-max", f.k_max, "Largest k in the sweep");
  run->add_option("--n-topics", f.n_topics, "Topics per community model");
  run->add_option("--iters", f.iterations, "Gibbs sweeps");
  run->add_option("--burn-in", f.burn_in, "Sweeps discarded before observation");

  auto* report = app.add_subcommand("report", "Validate a bundle and print its summary");
  std::string bundle_dir;
  report->add_option("bundle", bundle_dir, "Bundle directory (default: --outdir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  PipelineConfig c;
  try {
    c = merge(app, *sub, f);
  } catch (const ConfigError& e) {
    std::cerr << "tweetnet: " << e.what() << "\n";
    return kExitConfig;
  }
  const fs::path dir = c.outdir;
  const fs::path filtered = dir / "filtered_tweets.jsonl";

  if (sub == ingest) {
    return run_stage("ingest", [&] {
      require_valid(c, {"input", "keywords", "outdir"});
      run_ingest_stage({c.input, c.keywords, or_default(f.output, filtered),
                        or_default(f.stats, dir / "corpus_stats.json")});
    });
  }
  if (sub == graph) {
    return run_stage("graph", [&] {
      require_valid(c, {"tau", "min_weight", "outdir"});
      run_graph_stage({or_default(f.records, filtered), c.tau,
                       static_cast<std::uint64_t>(c.min_weight), dir});
    });
  }
  if (sub == communities) {
    return run_stage("communities", [&] {
      require_valid(c, {"k", "k_min", "k_max", "rule", "max_cliques", "threads", "outdir"});
      run_communities_stage({or_default(f.graph_dir, dir), static_cast<std::size_t>(c.k),
                             *parse_rule(c.rule), static_cast<std::size_t>(c.k_min),
                             static_cast<std::size_t>(c.k_max), c.max_cliques,
                             static_cast<unsigned>(c.threads), dir});
    });
  }
  if (sub == topics) {
    return run_stage("topics", [&] {
      require_valid(c, {"k", "rule", "n_topics", "alpha", "beta", "iterations", "burn_in",
                        "top_n_keywords", "doc_unit", "holdout_fraction", "outdir"});
      const auto cover = dir / communities_file_name(static_cast<std::size_t>(c.k),
                                                     *parse_rule(c.rule));
      run_topics_stage({or_default(f.records, filtered), or_default(f.communities, cover),
                        lda_params(c), static_cast<std::size_t>(c.top_n_keywords),
                        c.holdout_fraction,
                        c.doc_unit == "user" ? DocumentUnit::kUser : DocumentUnit::kTweet, dir});
    });
  }
  if (sub == profiles) {
    return run_stage("profiles", [&] {
      require_valid(c, {"top_n_terms", "stoplist", "outdir"});
      run_profiles_stage({or_default(f.records, filtered),
                          static_cast<std::size_t>(c.top_n_terms), resolve_stoplist(c.stoplist),
                          dir});
    });
  }
  if (sub == run) {
    return run_stage("run", [&] {
      const ReportBundle bundle = run_pipeline(c);
      std::cout << "wrote " << bundle.files.size() << " files to " << dir.string()
                << " (config " << bundle.config_hash << ")\n";
    });
  }
  // report
  const fs::path target = bundle_dir.empty() ? dir : fs::path(bundle_dir);
  return run_stage("report", [&] {
    const auto problems = validate_manifest(target);
    if (!problems.empty()) {
      std::string msg = "bundle failed validation:";
      for (const auto& p : problems) msg += "\n  " + p;
      throw InputError(msg);
    }
    std::cout << render_report(target) << "manifest: ok\n";
  });
}
