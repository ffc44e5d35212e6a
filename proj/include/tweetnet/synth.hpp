#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tweetnet/ingest.hpp"

namespace tweetnet::synth {

/// Two planted 10-member communities that retweet each other densely, a
/// periphery that retweets at most two core members each (so no 4-clique
/// outside the cores), one bridge between the cores, community-specific
/// hashtags, profile descriptions and some off-keyword chatter.
struct PlantedFixture {
  std::vector<TweetRecord> records;
  std::vector<std::vector<std::string>> planted;  // sorted member ids
};

PlantedFixture planted_communities(std::uint64_t seed = 2018);

/// The fixture as JSON lines with `malformed` broken lines interleaved.
std::string planted_fixture_jsonl(std::uint64_t seed = 2018, int malformed = 3);

/// Retweet records over a preferential-attachment graph: each new user
/// links to 4 or 5 earlier users chosen proportionally to degree, in a
/// random direction, and extra retweets are spread over existing pairs
/// until `weighted_sum` events exist. Yields about 4.3 arcs per user.
std::vector<TweetRecord> scale_free_retweets(std::size_t users,
                                             std::uint64_t weighted_sum,
                                             std::uint64_t seed);

}  // namespace tweetnet::synth
