#include "tweetnet/profiles.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

#include "tweetnet/errors.hpp"

namespace tweetnet {

const std::set<std::string>& default_description_stoplist() {
  static const std::set<std::string> kStop{
      "a",     "about", "all",   "am",    "an",    "and",   "any",   "are",
      "as",    "at",    "be",    "been",  "but",   "by",    "can",   "do",
      "for",   "from",  "get",   "had",   "has",   "have",  "he",    "her",
      "him",   "his",   "how",   "i",     "if",    "im",    "in",    "into",
      "is",    "it",    "its",   "just",  "me",    "my",    "no",    "not",
      "of",    "on",    "one",   "or",    "our",   "out",   "she",   "so",
      "that",  "the",   "their", "them",  "there", "they",  "this",  "to",
      "up",    "us",    "was",   "we",    "were",  "what",  "when",  "who",
      "will",  "with",  "you",   "your",  "https", "http",  "www",   "com",
      "co",    "amp",   "rt",    "via",   "dont",  "don",   "t",     "s",
  };
  return kStop;
}

std::vector<std::string> tokenize_description(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TermFrequencyTable description_term_proportions(
    std::span<const TweetRecord> records, const std::set<std::string>& stoplist,
    std::size_t top_n) {
  if (top_n < 1) throw DomainError("description_term_proportions: top_n must be >= 1");

  // Latest nonempty description per user; equal timestamps fall back to the
  // larger tweet id so the choice does not depend on record order.
  std::unordered_map<std::string_view, const TweetRecord*> latest;
  for (const auto& r : records) {
    if (!r.has_description()) continue;
    auto [it, inserted] = latest.try_emplace(r.user_id, &r);
    if (inserted) continue;
    const TweetRecord* cur = it->second;
    if (std::tie(r.created_at, r.tweet_id) > std::tie(cur->created_at, cur->tweet_id)) {
      it->second = &r;
    }
  }
  if (latest.empty()) {
    throw DomainError("description_term_proportions: no user has a description");
  }

  std::map<std::string, std::uint64_t> users_with_term;
  for (const auto& [user, record] : latest) {
    auto tokens = tokenize_description(*record->user_description);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) {
      if (t.size() < 2 || stoplist.contains(t)) continue;
      ++users_with_term[t];
    }
  }

  TermFrequencyTable table;
  table.user_base = latest.size();
  std::vector<std::pair<std::string, std::uint64_t>> ranked(users_with_term.begin(),
                                                            users_with_term.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const auto keep = std::min(top_n, ranked.size());
  for (std::size_t i = 0; i < keep; ++i) {
    table.entries.push_back({ranked[i].first,
                             static_cast<double>(ranked[i].second) /
                                 static_cast<double>(table.user_base),
                             ranked[i].second});
  }
  return table;
}

}  // namespace tweetnet
