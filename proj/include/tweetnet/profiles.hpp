#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tweetnet/ingest.hpp"

namespace tweetnet {

struct TermProportion {
  std::string term;
  double proportion;
  std::uint64_t user_count;
};

struct TermFrequencyTable {
  std::uint64_t user_base = 0;  // users with a nonempty description
  std::vector<TermProportion> entries;
};

/// English function words and profile filler.
const std::set<std::string>& default_description_stoplist();

/// Lowercased runs of ASCII alphanumerics.
std::vector<std::string> tokenize_description(std::string_view text);

/// Share of users whose latest nonempty description contains each term.
/// Stoplisted tokens and tokens shorter than two characters are dropped.
/// Ranked by proportion, ties lexicographic. Throws DomainError when
/// top_n < 1 or no user has a description.
TermFrequencyTable description_term_proportions(
    std::span<const TweetRecord> records, const std::set<std::string>& stoplist,
    std::size_t top_n);

}  // namespace tweetnet
