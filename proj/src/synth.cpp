#include "tweetnet/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>

#include "tweetnet/random.hpp"

namespace tweetnet::synth {
namespace {

std::string padded(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

Timestamp collection_start() {
  using namespace std::chrono;
  return time_point_cast<milliseconds>(sys_days{year{2018} / 6 / 29} + hours{12});
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[uniform_below(rng, items.size())];
}

}  // namespace

PlantedFixture planted_communities(std::uint64_t seed) {
  Rng rng(seed);
  PlantedFixture fx;

  const std::vector<std::vector<std::string>> topic_tags{
      {"guns", "gunsaretools", "peopleareweapons", "deepstatecabal", "superelite",
       "illuminati"},
      {"fakenews", "pizzagate", "savethechildren", "humantrafficking",
       "draintheswamp", "maga"},
  };
  const std::vector<std::string> descriptions{
      "MAGA patriot and proud Christian",
      "Proud conservative. Love God, love my country. #MAGA",
      "Trump supporter, NRA member, patriot",
      "Wife, mother, Christian, conservative",
      "Love my family and my country",
      "God bless America! MAGA",
      "Veteran. Patriot. Trump 2020",
  };
  const std::vector<std::string> keyword_forms{"#QAnon", "#Q", "#qanon", "QAnon"};

  std::vector<std::vector<std::string>> cores(2);
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < 10; ++i) {
      cores[c].push_back(padded(c == 0 ? "alpha" : "bravo", i, 2));
    }
  }
  std::vector<std::string> periphery;
  for (std::size_t i = 0; i < 60; ++i) periphery.push_back(padded("user", i, 3));

  Timestamp clock = collection_start();
  std::size_t next_id = 1000000;
  auto tweet = [&](const std::string& author, std::string text,
                   std::optional<std::string> retweet_of, bool with_description) {
    TweetRecord r;
    r.tweet_id = std::to_string(next_id++);
    r.user_id = author;
    clock += std::chrono::milliseconds(60000 + uniform_below(rng, 600000));
    r.created_at = clock;
    r.text = std::move(text);
    r.hashtags = extract_hashtags(r.text);
    r.retweet_of_user_id = std::move(retweet_of);
    if (with_description) {
      std::size_t h = 0;
      for (char ch : author) h = h * 31 + static_cast<unsigned char>(ch);
      r.user_description = descriptions[h % descriptions.size()];
    }
    fx.records.push_back(std::move(r));
  };
  auto topical_text = [&](int community) {
    std::string text = "Wake up " + pick(rng, keyword_forms);
    const int n = 2 + static_cast<int>(uniform_below(rng, 2));
    for (int i = 0; i < n; ++i) text += " #" + pick(rng, topic_tags[community]);
    return text;
  };

  // Dense cores: every ordered pair retweets at least once.
  for (int c = 0; c < 2; ++c) {
    for (const auto& author : cores[c]) {
      for (int i = 0; i < 3; ++i) tweet(author, topical_text(c), std::nullopt, true);
      for (const auto& other : cores[c]) {
        if (other == author) continue;
        const int times = 1 + static_cast<int>(uniform_below(rng, 2));
        for (int i = 0; i < times; ++i) {
          tweet(author, "RT @" + other + ": " + topical_text(c), other, true);
        }
      }
    }
  }
  tweet(cores[0][0], "RT @" + cores[1][0] + ": " + topical_text(1), cores[1][0], true);

  // Periphery: each user retweets one or two members of a single core.
  for (const auto& user : periphery) {
    const int c = static_cast<int>(uniform_below(rng, 2));
    const int targets = 1 + static_cast<int>(uniform_below(rng, 2));
    std::set<std::size_t> chosen;
    while (static_cast<int>(chosen.size()) < targets) chosen.insert(uniform_below(rng, 10));
    const bool described = uniform_below(rng, 4) != 0;
    for (std::size_t idx : chosen) {
      const auto& target = cores[c][idx];
      tweet(user, "RT @" + target + ": " + topical_text(c), target, described);
    }
    if (uniform_below(rng, 3) == 0) {
      tweet(user, "Nice weather for a barbecue #summer", std::nullopt, described);
    }
  }

  fx.planted = cores;
  return fx;
}

std::string planted_fixture_jsonl(std::uint64_t seed, int malformed) {
  const auto fx = planted_communities(seed);
  const std::vector<std::string> broken{
      R"({"tweet_id": "9000001", "user_id": "user001", "created_at": "2018-07-01T00:00:00Z")",
      R"({"tweet_id": "9000002", "created_at": "2018-07-01T00:00:00Z", "text": "#QAnon no author"})",
      R"({"tweet_id": "9000003", "user_id": "user002", "created_at": "July 1st", "text": "#QAnon"})",
  };
  std::ostringstream out;
  const std::size_t stride = fx.records.size() / static_cast<std::size_t>(malformed + 1);
  int emitted = 0;
  for (std::size_t i = 0; i < fx.records.size(); ++i) {
    if (emitted < malformed && i > 0 && i % stride == 0) {
      out << broken[static_cast<std::size_t>(emitted) % broken.size()] << '\n';
      ++emitted;
    }
    out << serialize_tweet(fx.records[i]) << '\n';
  }
  return out.str();
}

std::vector<TweetRecord> scale_free_retweets(std::size_t users,
                                             std::uint64_t weighted_sum,
                                             std::uint64_t seed) {
  Rng rng(seed);
  constexpr std::size_t kSeedClique = 5;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
  std::vector<std::uint32_t> endpoints;  // one entry per edge endpoint
  auto link = [&](std::uint32_t a, std::uint32_t b) {
    if (uniform_below(rng, 2)) std::swap(a, b);
    arcs.emplace_back(a, b);
    endpoints.push_back(a);
    endpoints.push_back(b);
  };
  for (std::uint32_t i = 0; i < std::min(users, kSeedClique); ++i) {
    for (std::uint32_t j = 0; j < i; ++j) link(i, j);
  }
  std::vector<std::uint32_t> targets;
  for (std::uint32_t v = kSeedClique; v < users; ++v) {
    const std::size_t m = uniform_below(rng, 10) < 3 ? 5 : 4;
    targets.clear();
    while (targets.size() < std::min<std::size_t>(m, v)) {
      const std::uint32_t t = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (std::uint32_t t : targets) link(v, t);
  }

  std::vector<std::uint64_t> times(arcs.size(), 1);
  for (std::uint64_t extra = arcs.size(); extra < weighted_sum; ++extra) {
    ++times[uniform_below(rng, arcs.size())];
  }

  std::vector<std::string> names(users);
  for (std::size_t i = 0; i < users; ++i) names[i] = padded("u", i, 7);
  std::vector<TweetRecord> records;
  records.reserve(std::max<std::uint64_t>(weighted_sum, arcs.size()));
  Timestamp clock = collection_start();
  std::size_t next_id = 1;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    for (std::uint64_t i = 0; i < times[a]; ++i) {
      TweetRecord r;
      r.tweet_id = std::to_string(next_id++);
      r.user_id = names[arcs[a].first];
      r.created_at = clock;
      r.retweet_of_user_id = names[arcs[a].second];
      records.push_back(std::move(r));
    }
  }
  return records;
}

}  // namespace tweetnet::synth
