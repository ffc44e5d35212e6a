#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "tweetnet/ingest.hpp"
#include "tweetnet/random.hpp"

namespace tweetnet {

using TokenId = std::int32_t;
inline constexpr TokenId kOutOfVocabulary = -1;

/// Dense bijection between hashtag strings and indices 0..size()-1.
class Vocabulary {
 public:
  /// Index of `token`, inserting it if new; adds `count` to its frequency.
  TokenId add(std::string_view token, std::uint64_t count = 1);
  std::optional<TokenId> lookup(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_[id]; }
  std::uint64_t frequency(TokenId id) const { return frequency_[id]; }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> frequency_;
  std::unordered_map<std::string, TokenId> index_;
};

struct Document {
  std::string doc_id;
  std::vector<TokenId> tokens;
};

struct Corpus {
  Vocabulary vocab;
  std::vector<Document> documents;

  std::size_t token_count() const;
};

enum class DocumentUnit { kTweet, kUser };

inline const std::set<std::string>& default_hashtag_stoplist() {
  static const std::set<std::string> kStop{"q", "qanon"};
  return kStop;
}

struct CorpusOptions {
  std::set<std::string> stoplist = default_hashtag_stoplist();
  DocumentUnit unit = DocumentUnit::kTweet;
};

/// Documents built from the hashtags of tweets authored by community
/// members, after removing stoplisted tokens. Vocabulary indices follow
/// lexicographic token order. With DocumentUnit::kUser each member's
/// hashtags form one document. Throws DomainError (naming `community_label`)
/// if the community is empty or no document survives.
Corpus build_community_corpus(std::span<const TweetRecord> records,
                              const std::set<std::string>& community,
                              std::string_view community_label = "",
                              const CorpusOptions& options = {});

/// Maps tokens through `vocab`; unknown tokens become kOutOfVocabulary.
Document encode_document(const Vocabulary& vocab, std::string doc_id,
                         std::span<const std::string> tokens);

using CountMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountVector = Eigen::Matrix<std::int32_t, Eigen::Dynamic, 1>;

struct LdaParams {
  int n_topics = 8;
  double alpha = 50.0 / 8;
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 500;
  std::uint64_t seed = 42;
  /// Verify count conservation after every sweep (always on in debug builds).
  bool check_counts = false;
  /// Replaces the seeded initial assignment when set; shape must match.
  std::optional<std::vector<std::vector<int>>> initial_assignments;
};

/// alpha = 50 / n_topics.
inline double default_alpha(int n_topics) { return 50.0 / n_topics; }

/// Final state of a collapsed Gibbs chain.
struct TopicModel {
  int n_topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  CountMatrix topic_word;   // n_topics x |V|
  CountMatrix doc_topic;    // |D| x n_topics
  CountVector topic_totals;
  std::vector<std::vector<int>> assignments;

  std::size_t vocab_size() const { return static_cast<std::size_t>(topic_word.cols()); }
  std::size_t doc_count() const { return static_cast<std::size_t>(doc_topic.rows()); }

  /// Smoothed topic-word distributions, one row per topic.
  Eigen::MatrixXd phi() const;
};

/// Collapsed Gibbs sampler over a fixed corpus.
class GibbsSampler {
 public:
  GibbsSampler(const Corpus& corpus, const LdaParams& params);

  /// One pass over every token in document order.
  void sweep();

  /// Throws std::logic_error if the count matrices disagree with the
  /// assignments.
  void check_counts() const;

  const TopicModel& state() const { return model_; }
  TopicModel release() && { return std::move(model_); }

 private:
  const Corpus& corpus_;
  TopicModel model_;
  Rng rng_;
  Eigen::VectorXd weights_;
  double vbeta_;
};

/// Observer invoked after every sweep past params.burn_in, with the 1-based
/// sweep number.
using SweepObserver = std::function<void(const TopicModel&, int sweep)>;

/// Runs params.iterations sweeps from a seeded random start. Identical
/// inputs and seed give bit-identical models. Throws DomainError on
/// invalid parameters or an empty corpus.
TopicModel fit_lda(const Corpus& corpus, const LdaParams& params,
                   const SweepObserver& observer = {});

struct Keyword {
  std::string token;
  double prob;
};

struct TopicKeywords {
  int topic_id;
  std::vector<Keyword> keywords;
};

using TopicSummary = std::vector<TopicKeywords>;

/// Top-n tokens of each topic by smoothed probability; ties go to the
/// lower vocabulary index.
TopicSummary topic_keywords(const TopicModel& model, const Vocabulary& vocab,
                            std::size_t top_n);

/// (doc_topic + alpha) / (doc_length + n_topics * alpha).
Eigen::VectorXd doc_topic_distribution(const TopicModel& model,
                                       std::size_t doc_index);

struct PerplexityResult {
  double perplexity = 0.0;
  std::uint64_t scored_tokens = 0;
  std::uint64_t skipped_tokens = 0;
};

struct FoldInOptions {
  int iterations = 50;
  std::uint64_t seed = 7;
};

/// exp(-sum log p(w|d) / N) over in-vocabulary held-out tokens, with
/// p(w|d) = sum_t theta(t|d) phi(w|t). theta comes from a fold-in Gibbs
/// pass that keeps phi frozen. Throws DomainError when nothing is scorable.
PerplexityResult held_out_perplexity(const TopicModel& model,
                                     std::span<const Document> held_out,
                                     const FoldInOptions& options = {});

}  // namespace tweetnet
