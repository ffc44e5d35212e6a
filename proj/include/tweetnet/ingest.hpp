#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tweetnet {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// One ingested tweet.
///
/// Hashtags are lowercase tokens without the leading '#'. A record is a
/// retweet iff retweet_of_user_id is set.
struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  Timestamp created_at{};
  std::string text;
  std::vector<std::string> hashtags;
  std::optional<std::string> retweet_of_user_id;
  std::optional<std::string> user_description;

  bool is_retweet() const { return retweet_of_user_id.has_value(); }
  bool has_description() const {
    return user_description.has_value() && !user_description->empty();
  }

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

struct CorpusStats {
  std::uint64_t tweet_count = 0;
  std::uint64_t unique_user_count = 0;
  std::uint64_t retweet_count = 0;
  std::uint64_t records_with_description = 0;
  std::uint64_t malformed_lines = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

enum class InputFormat { kJsonLines, kCsv };

struct ParsedStream {
  std::vector<TweetRecord> records;
  std::uint64_t malformed_lines = 0;
};

/// Filter terms used to collect the original corpus.
inline const std::vector<std::string>& default_keywords() {
  static const std::vector<std::string> kKeywords{"qanon", "#q", "#qanon"};
  return kKeywords;
}

// Timestamps accept "YYYY-MM-DD[T ]hh:mm:ss[.fff][Z|+hh:mm|-hh:mm]" and
// are normalized to UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

/// Hashtags found in free text: '#' followed by a maximal run of ASCII
/// alphanumerics or underscores, lowercased, in order of appearance.
std::vector<std::string> extract_hashtags(std::string_view text);

/// Lowercases and strips one leading '#'; nullopt if the result is not a
/// valid hashtag token.
std::optional<std::string> normalize_hashtag(std::string_view raw);

std::string to_lower_ascii(std::string_view s);

/// Reads line-delimited records. Malformed lines are skipped and counted;
/// blank lines are ignored. Throws InputError if the stream fails.
ParsedStream parse_tweet_stream(std::istream& source,
                                InputFormat format = InputFormat::kJsonLines);

/// Opens and parses a file. The format is CSV for a ".csv" extension,
/// JSON lines otherwise.
ParsedStream read_tweet_file(const std::filesystem::path& path);
InputFormat format_for_path(const std::filesystem::path& path);

/// One JSON object, no trailing newline. Inverse of the JSON-lines parser.
std::string serialize_tweet(const TweetRecord& record);
void write_tweet_stream(std::ostream& out, std::span<const TweetRecord> records);

/// True iff any term matches. Terms starting with '#' must equal one of the
/// record's hashtag tokens; bare terms match as substrings of the text.
/// Matching is case-insensitive.
bool keyword_filter(const TweetRecord& record,
                    std::span<const std::string> keywords);

CorpusStats corpus_summary(std::span<const TweetRecord> records);

}  // namespace tweetnet
