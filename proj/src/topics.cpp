#include "tweetnet/topics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "tweetnet/errors.hpp"

namespace tweetnet {
namespace {

void validate(const Corpus& corpus, const LdaParams& p) {
  if (p.n_topics < 1) throw DomainError("fit_lda: n_topics must be >= 1");
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
    throw DomainError("fit_lda: alpha must be positive");
  }
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) {
    throw DomainError("fit_lda: beta must be positive");
  }
  if (p.iterations < 1) throw DomainError("fit_lda: iterations must be >= 1");
  if (p.burn_in < 0) throw DomainError("fit_lda: burn_in must be >= 0");
  if (corpus.documents.empty()) throw DomainError("fit_lda: empty corpus");
  const auto v = static_cast<TokenId>(corpus.vocab.size());
  for (const auto& doc : corpus.documents) {
    if (doc.tokens.empty()) {
      throw DomainError("fit_lda: document '" + doc.doc_id + "' has no tokens");
    }
    for (TokenId w : doc.tokens) {
      if (w < 0 || w >= v) {
        throw DomainError("fit_lda: token outside the vocabulary in '" +
                          doc.doc_id + "'");
      }
    }
  }
}

// Index of the first cumulative weight exceeding u * total.
int draw(const Eigen::VectorXd& weights, double total, double u) {
  double target = u * total;
  const auto n = static_cast<int>(weights.size());
  for (int t = 0; t < n; ++t) {
    target -= weights[t];
    if (target < 0.0) return t;
  }
  return n - 1;
}

}  // namespace

TokenId Vocabulary::add(std::string_view token, std::uint64_t count) {
  auto [it, inserted] =
      index_.try_emplace(std::string(token), static_cast<TokenId>(tokens_.size()));
  if (inserted) {
    tokens_.emplace_back(token);
    frequency_.push_back(0);
  }
  frequency_[it->second] += count;
  return it->second;
}

std::optional<TokenId> Vocabulary::lookup(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.tokens.size();
  return n;
}

Corpus build_community_corpus(std::span<const TweetRecord> records,
                              const std::set<std::string>& community,
                              std::string_view community_label,
                              const CorpusOptions& options) {
  const std::string label =
      community_label.empty() ? std::string("<unnamed>") : std::string(community_label);
  if (community.empty()) {
    throw DomainError("build_community_corpus: community " + label + " is empty");
  }

  std::vector<std::pair<std::string, std::vector<std::string>>> raw;
  std::map<std::string, std::size_t> user_doc;
  for (const auto& r : records) {
    if (!community.contains(r.user_id)) continue;
    std::vector<std::string> tokens;
    for (const auto& tag : r.hashtags) {
      if (!options.stoplist.contains(tag)) tokens.push_back(tag);
    }
    if (options.unit == DocumentUnit::kTweet) {
      if (!tokens.empty()) raw.emplace_back(r.tweet_id, std::move(tokens));
    } else {
      auto [it, inserted] = user_doc.try_emplace(r.user_id, raw.size());
      if (inserted) raw.emplace_back(r.user_id, std::vector<std::string>{});
      auto& doc = raw[it->second].second;
      doc.insert(doc.end(), tokens.begin(), tokens.end());
    }
  }
  if (options.unit == DocumentUnit::kUser) {
    std::erase_if(raw, [](const auto& d) { return d.second.empty(); });
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  if (raw.empty()) {
    throw DomainError("build_community_corpus: community " + label +
                      " has no hashtag documents");
  }

  std::map<std::string, std::uint64_t> frequency;
  for (const auto& [id, tokens] : raw) {
    for (const auto& t : tokens) ++frequency[t];
  }
  Corpus corpus;
  for (const auto& [token, count] : frequency) corpus.vocab.add(token, count);
  corpus.documents.reserve(raw.size());
  for (auto& [id, tokens] : raw) {
    corpus.documents.push_back(encode_document(corpus.vocab, std::move(id), tokens));
  }
  return corpus;
}

Document encode_document(const Vocabulary& vocab, std::string doc_id,
                         std::span<const std::string> tokens) {
  Document doc{std::move(doc_id), {}};
  doc.tokens.reserve(tokens.size());
  for (const auto& t : tokens) doc.tokens.push_back(vocab.lookup(t).value_or(kOutOfVocabulary));
  return doc;
}

Eigen::MatrixXd TopicModel::phi() const {
  const double vbeta = static_cast<double>(vocab_size()) * beta;
  Eigen::MatrixXd p = topic_word.cast<double>().array() + beta;
  const Eigen::VectorXd denom = topic_totals.cast<double>().array() + vbeta;
  return denom.cwiseInverse().asDiagonal() * p;
}

GibbsSampler::GibbsSampler(const Corpus& corpus, const LdaParams& params)
    : corpus_(corpus), rng_(params.seed) {
  validate(corpus, params);
  const int n_topics = params.n_topics;
  const auto n_docs = static_cast<Eigen::Index>(corpus.documents.size());
  const auto n_words = static_cast<Eigen::Index>(corpus.vocab.size());

  model_.n_topics = n_topics;
  model_.alpha = params.alpha;
  model_.beta = params.beta;
  model_.seed = params.seed;
  model_.topic_word = CountMatrix::Zero(n_topics, n_words);
  model_.doc_topic = CountMatrix::Zero(n_docs, n_topics);
  model_.topic_totals = CountVector::Zero(n_topics);
  weights_.resize(n_topics);
  vbeta_ = static_cast<double>(n_words) * params.beta;

  if (params.initial_assignments) {
    const auto& init = *params.initial_assignments;
    if (init.size() != corpus.documents.size()) {
      throw DomainError("fit_lda: initial assignments do not match the corpus");
    }
    for (std::size_t d = 0; d < init.size(); ++d) {
      if (init[d].size() != corpus.documents[d].tokens.size()) {
        throw DomainError("fit_lda: initial assignments do not match the corpus");
      }
      for (int t : init[d]) {
        if (t < 0 || t >= n_topics) {
          throw DomainError("fit_lda: initial assignment out of range");
        }
      }
    }
    model_.assignments = init;
  } else {
    model_.assignments.resize(corpus.documents.size());
    for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
      auto& z = model_.assignments[d];
      z.resize(corpus.documents[d].tokens.size());
      for (int& t : z) t = static_cast<int>(uniform_below(rng_, n_topics));
    }
  }
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& tokens = corpus.documents[d].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const int t = model_.assignments[d][i];
      ++model_.topic_word(t, tokens[i]);
      ++model_.doc_topic(static_cast<Eigen::Index>(d), t);
      ++model_.topic_totals(t);
    }
  }
}

void GibbsSampler::sweep() {
  const int n_topics = model_.n_topics;
  const double alpha = model_.alpha;
  const double beta = model_.beta;
  auto& tw = model_.topic_word;
  auto& dt = model_.doc_topic;
  auto& totals = model_.topic_totals;

  for (std::size_t d = 0; d < corpus_.documents.size(); ++d) {
    const auto row = static_cast<Eigen::Index>(d);
    const auto& tokens = corpus_.documents[d].tokens;
    auto& z = model_.assignments[d];
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const TokenId w = tokens[i];
      int t = z[i];
      --tw(t, w);
      --dt(row, t);
      --totals(t);

      double total = 0.0;
      for (int k = 0; k < n_topics; ++k) {
        const double p = (dt(row, k) + alpha) * (tw(k, w) + beta) /
                         (totals(k) + vbeta_);
        weights_[k] = p;
        total += p;
      }
      t = draw(weights_, total, uniform_unit(rng_));

      z[i] = t;
      ++tw(t, w);
      ++dt(row, t);
      ++totals(t);
    }
  }
}

void GibbsSampler::check_counts() const {
  const std::int64_t tokens = static_cast<std::int64_t>(corpus_.token_count());
  if (model_.topic_word.cast<std::int64_t>().sum() != tokens ||
      model_.doc_topic.cast<std::int64_t>().sum() != tokens ||
      model_.topic_totals.cast<std::int64_t>().sum() != tokens) {
    throw std::logic_error("Gibbs count matrices lost mass");
  }
  if ((model_.topic_word.rowwise().sum() - model_.topic_totals).any()) {
    throw std::logic_error("Gibbs topic totals disagree with topic-word counts");
  }
  for (std::size_t d = 0; d < corpus_.documents.size(); ++d) {
    if (model_.doc_topic.row(static_cast<Eigen::Index>(d)).sum() !=
        static_cast<std::int32_t>(corpus_.documents[d].tokens.size())) {
      throw std::logic_error("Gibbs document counts disagree with lengths");
    }
  }
}

TopicModel fit_lda(const Corpus& corpus, const LdaParams& params,
                   const SweepObserver& observer) {
  GibbsSampler sampler(corpus, params);
#ifndef NDEBUG
  const bool check = true;
#else
  const bool check = params.check_counts;
#endif
  for (int it = 1; it <= params.iterations; ++it) {
    sampler.sweep();
    if (check) sampler.check_counts();
    if (observer && it > params.burn_in) observer(sampler.state(), it);
  }
  return std::move(sampler).release();
}

TopicSummary topic_keywords(const TopicModel& model, const Vocabulary& vocab,
                            std::size_t top_n) {
  if (top_n < 1) throw DomainError("topic_keywords: top_n must be >= 1");
  const Eigen::MatrixXd phi = model.phi();
  const auto n_words = static_cast<TokenId>(phi.cols());
  TopicSummary summary;
  std::vector<TokenId> order(static_cast<std::size_t>(n_words));
  for (int t = 0; t < model.n_topics; ++t) {
    std::iota(order.begin(), order.end(), 0);
    const auto keep = std::min<std::size_t>(top_n, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                      order.end(), [&](TokenId a, TokenId b) {
                        if (phi(t, a) != phi(t, b)) return phi(t, a) > phi(t, b);
                        return a < b;
                      });
    TopicKeywords entry{t, {}};
    for (std::size_t i = 0; i < keep; ++i) {
      entry.keywords.push_back({vocab.token(order[i]), phi(t, order[i])});
    }
    summary.push_back(std::move(entry));
  }
  return summary;
}

Eigen::VectorXd doc_topic_distribution(const TopicModel& model,
                                       std::size_t doc_index) {
  if (doc_index >= model.doc_count()) {
    throw DomainError("doc_topic_distribution: document index out of range");
  }
  const Eigen::VectorXd counts =
      model.doc_topic.row(static_cast<Eigen::Index>(doc_index)).transpose().cast<double>();
  return (counts.array() + model.alpha) /
         (counts.sum() + model.n_topics * model.alpha);
}

PerplexityResult held_out_perplexity(const TopicModel& model,
                                     std::span<const Document> held_out,
                                     const FoldInOptions& options) {
  if (held_out.empty()) throw DomainError("held_out_perplexity: no documents");
  const Eigen::MatrixXd phi = model.phi();
  const auto n_words = static_cast<TokenId>(phi.cols());
  const int n_topics = model.n_topics;
  Rng rng(options.seed);
  Eigen::VectorXd weights(n_topics);
  Eigen::VectorXd counts(n_topics);

  PerplexityResult result;
  double log_likelihood = 0.0;
  std::vector<TokenId> tokens;
  std::vector<int> z;
  for (const auto& doc : held_out) {
    tokens.clear();
    for (TokenId w : doc.tokens) {
      if (w >= 0 && w < n_words) {
        tokens.push_back(w);
      } else {
        ++result.skipped_tokens;
      }
    }
    if (tokens.empty()) continue;

    counts.setZero();
    z.resize(tokens.size());
    for (int& t : z) {
      t = static_cast<int>(uniform_below(rng, n_topics));
      counts[t] += 1.0;
    }
    for (int it = 0; it < options.iterations; ++it) {
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        counts[z[i]] -= 1.0;
        weights = (counts.array() + model.alpha) * phi.col(tokens[i]).array();
        z[i] = draw(weights, weights.sum(), uniform_unit(rng));
        counts[z[i]] += 1.0;
      }
    }
    const Eigen::VectorXd theta =
        (counts.array() + model.alpha) /
        (static_cast<double>(tokens.size()) + n_topics * model.alpha);
    for (TokenId w : tokens) log_likelihood += std::log(theta.dot(phi.col(w)));
    result.scored_tokens += tokens.size();
  }
  if (result.scored_tokens == 0) {
    throw DomainError("held_out_perplexity: no scorable tokens");
  }
  result.perplexity =
      std::exp(-log_likelihood / static_cast<double>(result.scored_tokens));
  return result;
}

}  // namespace tweetnet
