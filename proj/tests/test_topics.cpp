#include "tweetnet/topics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "tweetnet/errors.hpp"

using namespace tweetnet;

namespace {

TweetRecord tagged(std::string id, std::string user, std::vector<std::string> tags) {
  TweetRecord r;
  r.tweet_id = std::move(id);
  r.user_id = std::move(user);
  r.hashtags = std::move(tags);
  return r;
}

Corpus corpus_of(const std::vector<std::vector<std::string>>& docs) {
  std::map<std::string, std::uint64_t> freq;
  for (const auto& d : docs) {
    for (const auto& t : d) ++freq[t];
  }
  Corpus c;
  for (const auto& [t, n] : freq) c.vocab.add(t, n);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    c.documents.push_back(encode_document(c.vocab, "d" + std::to_string(i), docs[i]));
  }
  return c;
}

// Documents drawn from {a,b} or from {c,d}, never both.
Corpus disjoint_corpus(std::mt19937_64& rng, int docs = 60) {
  std::vector<std::vector<std::string>> d;
  for (int i = 0; i < docs; ++i) {
    const bool first = i % 2 == 0;
    std::vector<std::string> doc;
    const int len = 3 + static_cast<int>(rng() % 4);
    for (int j = 0; j < len; ++j) {
      doc.push_back(first ? (rng() % 2 ? "a" : "b") : (rng() % 2 ? "c" : "d"));
    }
    d.push_back(doc);
  }
  return corpus_of(d);
}

LdaParams params(int topics, int iters, std::uint64_t seed) {
  LdaParams p;
  p.n_topics = topics;
  p.alpha = default_alpha(topics);
  p.iterations = iters;
  p.burn_in = iters / 2;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(Vocabulary, IndicesContiguousAndInvertible) {
  Vocabulary v;
  for (const char* t : {"x", "y", "x", "z"}) v.add(t);
  ASSERT_EQ(v.size(), 3u);
  for (TokenId i = 0; i < 3; ++i) EXPECT_EQ(v.lookup(v.token(i)), i);
  EXPECT_EQ(v.frequency(*v.lookup("x")), 2u);
  EXPECT_FALSE(v.lookup("w"));
}

TEST(BuildCorpus, Example) {
  const std::vector<TweetRecord> r{tagged("1", "a", {"x", "y"}), tagged("2", "a", {}),
                                   tagged("3", "c", {"z"})};
  const auto c = build_community_corpus(r, {"a"}, "1");
  ASSERT_EQ(c.documents.size(), 1u);
  EXPECT_EQ(c.vocab.size(), 2u);
  EXPECT_EQ(c.documents[0].doc_id, "1");
  EXPECT_EQ(c.vocab.token(c.documents[0].tokens[0]), "x");
  EXPECT_EQ(c.vocab.token(c.documents[0].tokens[1]), "y");
}

TEST(BuildCorpus, StoplistCanEmptyIt) {
  const std::vector<TweetRecord> r{tagged("1", "a", {"qanon"}), tagged("2", "a", {"q"})};
  try {
    build_community_corpus(r, {"a"}, "17");
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("17"), std::string::npos);
  }
  EXPECT_THROW(build_community_corpus(r, {}, "0"), DomainError);
}

TEST(BuildCorpus, MatchesFilterAndGroupOracle) {
  std::mt19937_64 rng(5);
  std::vector<TweetRecord> records;
  std::vector<std::set<std::string>> communities(5);
  for (int i = 0; i < 2000; ++i) {
    const int c = static_cast<int>(rng() % 6);
    const std::string user = "u" + std::to_string(c) + "_" + std::to_string(rng() % 20);
    if (c < 5) communities[c].insert(user);
    std::vector<std::string> tags;
    for (int j = static_cast<int>(rng() % 4); j > 0; --j) {
      const auto k = rng() % 12;
      tags.push_back(k == 0 ? "qanon" : k == 1 ? "q" : "t" + std::to_string(c) + "_" + std::to_string(k));
    }
    records.push_back(tagged(std::to_string(i), user, tags));
  }
  for (std::size_t c = 0; c < communities.size(); ++c) {
    std::vector<std::pair<std::string, std::vector<std::string>>> want;
    for (const auto& r : records) {
      if (!communities[c].count(r.user_id)) continue;
      std::vector<std::string> kept;
      for (const auto& t : r.hashtags) {
        if (t != "q" && t != "qanon") kept.push_back(t);
      }
      if (!kept.empty()) want.emplace_back(r.tweet_id, kept);
    }
    const auto corpus = build_community_corpus(records, communities[c], std::to_string(c));
    ASSERT_EQ(corpus.documents.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_EQ(corpus.documents[i].doc_id, want[i].first);
      std::vector<std::string> decoded;
      for (TokenId t : corpus.documents[i].tokens) decoded.push_back(corpus.vocab.token(t));
      EXPECT_EQ(decoded, want[i].second);
    }
  }
}

TEST(BuildCorpus, UserUnitAggregates) {
  const std::vector<TweetRecord> r{tagged("1", "b", {"x"}), tagged("2", "a", {"y"}),
                                   tagged("3", "b", {"z", "x"}), tagged("4", "a", {"qanon"})};
  CorpusOptions o;
  o.unit = DocumentUnit::kUser;
  const auto c = build_community_corpus(r, {"a", "b"}, "1", o);
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.documents[0].doc_id, "a");
  EXPECT_EQ(c.documents[1].tokens.size(), 3u);
}

TEST(FitLda, SingleTopic) {
  std::mt19937_64 rng(1);
  const auto c = disjoint_corpus(rng, 10);
  const auto m = fit_lda(c, params(1, 20, 3));
  for (const auto& z : m.assignments) {
    for (int t : z) EXPECT_EQ(t, 0);
  }
  for (std::size_t d = 0; d < m.doc_count(); ++d) {
    EXPECT_DOUBLE_EQ(doc_topic_distribution(m, d)[0], 1.0);
  }
}

TEST(FitLda, PreconditionsAreDomainErrors) {
  std::mt19937_64 rng(1);
  const auto c = disjoint_corpus(rng, 4);
  auto p = params(2, 10, 1);
  p.n_topics = 0;
  EXPECT_THROW(fit_lda(c, p), DomainError);
  p = params(2, 10, 1);
  p.alpha = 0;
  EXPECT_THROW(fit_lda(c, p), DomainError);
  p = params(2, 10, 1);
  p.beta = -1;
  EXPECT_THROW(fit_lda(c, p), DomainError);
  p = params(2, 10, 1);
  p.iterations = 0;
  EXPECT_THROW(fit_lda(c, p), DomainError);
  EXPECT_THROW(fit_lda(Corpus{}, params(2, 10, 1)), DomainError);
}

TEST(FitLda, ConservesCountsEverySweepAndIsDeterministic) {
  std::mt19937_64 rng(2);
  const auto c = disjoint_corpus(rng, 200);
  auto p = params(5, 40, 9);
  p.burn_in = 0;
  p.check_counts = true;
  int sweeps = 0;
  const auto total = static_cast<std::int64_t>(c.token_count());
  const auto a = fit_lda(c, p, [&](const TopicModel& m, int) {
    ++sweeps;
    EXPECT_EQ(m.topic_word.cast<std::int64_t>().sum(), total);
    EXPECT_EQ(m.doc_topic.cast<std::int64_t>().sum(), total);
    EXPECT_EQ(m.topic_totals.cast<std::int64_t>().sum(), total);
  });
  EXPECT_EQ(sweeps, 40);
  const auto b = fit_lda(c, p);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.topic_word, b.topic_word);
  EXPECT_EQ(a.doc_topic, b.doc_topic);
  p.seed = 10;
  EXPECT_NE(fit_lda(c, p).assignments, a.assignments);
}

TEST(FitLda, RowsAreDistributions) {
  std::mt19937_64 rng(3);
  const auto c = disjoint_corpus(rng, 50);
  const auto m = fit_lda(c, params(4, 30, 5));
  const Eigen::MatrixXd phi = m.phi();
  for (Eigen::Index t = 0; t < phi.rows(); ++t) EXPECT_NEAR(phi.row(t).sum(), 1.0, 1e-12);
  for (std::size_t d = 0; d < m.doc_count(); ++d) {
    EXPECT_NEAR(doc_topic_distribution(m, d).sum(), 1.0, 1e-12);
  }
  EXPECT_THROW(doc_topic_distribution(m, m.doc_count()), DomainError);
}

TEST(DocTopicDistribution, DirectFormula) {
  TopicModel m;
  m.n_topics = 2;
  m.alpha = 1.0;
  m.beta = 0.1;
  m.topic_word = CountMatrix::Zero(2, 1);
  m.topic_word(0, 0) = 1;
  m.doc_topic = CountMatrix::Zero(1, 2);
  m.doc_topic(0, 0) = 1;
  m.topic_totals = CountVector::Zero(2);
  m.topic_totals(0) = 1;
  m.assignments = {{0}};
  const auto theta = doc_topic_distribution(m, 0);
  EXPECT_NEAR(theta[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(theta[1], 1.0 / 3.0, 1e-15);
}

TEST(DocTopicDistribution, MatchesRawCounts) {
  std::mt19937_64 rng(4);
  const auto c = disjoint_corpus(rng, 30);
  const auto m = fit_lda(c, params(3, 20, 2));
  for (std::size_t d = 0; d < m.doc_count(); ++d) {
    std::vector<int> counts(3, 0);
    for (int t : m.assignments[d]) ++counts[t];
    const double len = static_cast<double>(m.assignments[d].size());
    const auto theta = doc_topic_distribution(m, d);
    for (int t = 0; t < 3; ++t) {
      EXPECT_NEAR(theta[t], (counts[t] + m.alpha) / (len + 3 * m.alpha), 1e-15);
    }
  }
}

TEST(TopicKeywords, CountRatioAndTruncation) {
  const auto c = corpus_of({{"x", "x", "y"}});
  auto p = params(1, 5, 1);
  p.beta = 1e-6;
  const auto m = fit_lda(c, p);
  const auto s = topic_keywords(m, c.vocab, 2);
  ASSERT_EQ(s.size(), 1u);
  ASSERT_EQ(s[0].keywords.size(), 2u);
  EXPECT_EQ(s[0].keywords[0].token, "x");
  EXPECT_NEAR(s[0].keywords[0].prob, 2.0 / 3.0, 1e-3);
  EXPECT_EQ(s[0].keywords[1].token, "y");
  EXPECT_NEAR(s[0].keywords[1].prob, 1.0 / 3.0, 1e-3);
  EXPECT_EQ(topic_keywords(m, c.vocab, 50)[0].keywords.size(), 2u);
  EXPECT_THROW(topic_keywords(m, c.vocab, 0), DomainError);
}

TEST(TopicKeywords, RankedAndTiesByIndex) {
  std::mt19937_64 rng(5);
  const auto c = disjoint_corpus(rng, 40);
  const auto m = fit_lda(c, params(3, 30, 8));
  for (const auto& t : topic_keywords(m, c.vocab, 4)) {
    for (std::size_t i = 0; i < t.keywords.size(); ++i) {
      EXPECT_GT(t.keywords[i].prob, 0.0);
      EXPECT_LE(t.keywords[i].prob, 1.0);
      if (i == 0) continue;
      EXPECT_LE(t.keywords[i].prob, t.keywords[i - 1].prob);
      if (t.keywords[i].prob == t.keywords[i - 1].prob) {
        EXPECT_LT(*c.vocab.lookup(t.keywords[i - 1].token), *c.vocab.lookup(t.keywords[i].token));
      }
    }
  }
}

TEST(Perplexity, UniformModelGivesVocabularySize) {
  TopicModel m;
  m.n_topics = 2;
  m.alpha = 0.5;
  m.beta = 0.1;
  m.topic_word = CountMatrix::Zero(2, 7);
  m.doc_topic = CountMatrix::Zero(0, 2);
  m.topic_totals = CountVector::Zero(2);
  const std::vector<Document> held{{"h1", {0, 3, 6}}, {"h2", {1, 1, kOutOfVocabulary}}};
  const auto p = held_out_perplexity(m, held);
  EXPECT_NEAR(p.perplexity, 7.0, 1e-9);
  EXPECT_EQ(p.scored_tokens, 5u);
  EXPECT_EQ(p.skipped_tokens, 1u);
  const std::vector<Document> none{{"h", {kOutOfVocabulary}}};
  EXPECT_THROW(held_out_perplexity(m, none), DomainError);
  EXPECT_THROW(held_out_perplexity(m, {}), DomainError);
}

TEST(Perplexity, SingleTopicClosedForm) {
  const auto c = corpus_of({{"x", "x", "y"}, {"x", "z"}});
  auto p = params(1, 3, 1);
  p.beta = 0.5;
  const auto m = fit_lda(c, p);
  // phi = (n_w + 0.5) / (5 + 1.5): x 3.5, y 1.5, z 1.5 over 6.5.
  const std::vector<Document> held{{"h", {*c.vocab.lookup("x"), *c.vocab.lookup("z")}}};
  const double want = std::exp(-(std::log(3.5 / 6.5) + std::log(1.5 / 6.5)) / 2.0);
  EXPECT_NEAR(held_out_perplexity(m, held).perplexity, want, 1e-12);
}

TEST(Perplexity, AtLeastOne) {
  std::mt19937_64 rng(6);
  const auto train = disjoint_corpus(rng, 40);
  const auto test = disjoint_corpus(rng, 10);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto m = fit_lda(train, params(2 + static_cast<int>(seed), 30, seed));
    EXPECT_GE(held_out_perplexity(m, test.documents).perplexity, 1.0);
  }
}

TEST(FitLda, RelabeledInitialisationGivesSameTopics) {
  // Only the topic labels differ between the two runs, so the fitted
  // keyword sets must agree up to order.
  std::mt19937_64 rng(7);
  const auto c = disjoint_corpus(rng, 60);
  auto p = params(2, 200, 4);
  p.alpha = 0.1;
  std::vector<std::vector<int>> init;
  for (const auto& d : c.documents) {
    std::vector<int> z;
    for (std::size_t i = 0; i < d.tokens.size(); ++i) z.push_back(static_cast<int>(rng() % 2));
    init.push_back(z);
  }
  auto swapped = init;
  for (auto& z : swapped) {
    for (int& t : z) t = 1 - t;
  }
  auto top_sets = [&](const std::vector<std::vector<int>>& start) {
    p.initial_assignments = start;
    const auto m = fit_lda(c, p);
    std::set<std::set<std::string>> out;
    for (const auto& t : topic_keywords(m, c.vocab, 2)) {
      out.insert({t.keywords[0].token, t.keywords[1].token});
    }
    return out;
  };
  const std::set<std::set<std::string>> want{{"a", "b"}, {"c", "d"}};
  EXPECT_EQ(top_sets(init), want);
  EXPECT_EQ(top_sets(swapped), want);
}
