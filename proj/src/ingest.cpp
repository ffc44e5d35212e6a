#include "tweetnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tweetnet/csv.hpp"
#include "tweetnet/errors.hpp"

namespace tweetnet {
namespace {

using nlohmann::json;

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && (std::isalnum(u) || c == '_');
}

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

template <typename Int>
bool parse_digits(std::string_view s, std::size_t pos, std::size_t len,
                  Int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return std::from_chars(s.data() + pos, s.data() + pos + len, out).ec ==
         std::errc{};
}

std::optional<std::string> id_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_unsigned()) return std::to_string(it->get<std::uint64_t>());
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  throw std::invalid_argument(key);
}

std::optional<std::string> string_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(key);
  return it->get<std::string>();
}

// Shared validation for both input formats. Empty optional strings mean
// "absent". Returns nullopt for any schema violation.
std::optional<TweetRecord> make_record(
    std::optional<std::string> tweet_id, std::optional<std::string> user_id,
    std::optional<std::string> created_at, std::optional<std::string> text,
    std::optional<std::string> retweet_of, std::optional<std::string> description,
    std::optional<std::vector<std::string>> raw_hashtags) {
  if (!tweet_id || tweet_id->empty() || !user_id || user_id->empty() ||
      !created_at || !text) {
    return std::nullopt;
  }
  const auto ts = parse_timestamp(*created_at);
  if (!ts) return std::nullopt;

  TweetRecord r;
  r.tweet_id = std::move(*tweet_id);
  r.user_id = std::move(*user_id);
  r.created_at = *ts;
  r.text = std::move(*text);
  if (raw_hashtags) {
    r.hashtags.reserve(raw_hashtags->size());
    for (const auto& raw : *raw_hashtags) {
      auto tag = normalize_hashtag(raw);
      if (!tag) return std::nullopt;
      r.hashtags.push_back(std::move(*tag));
    }
  } else {
    r.hashtags = extract_hashtags(r.text);
  }
  if (retweet_of && !retweet_of->empty()) r.retweet_of_user_id = std::move(retweet_of);
  if (description) r.user_description = std::move(description);
  return r;
}

std::optional<TweetRecord> parse_json_line(std::string_view line) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) return std::nullopt;
  try {
    std::optional<std::vector<std::string>> tags;
    if (const auto it = obj.find("hashtags"); it != obj.end() && !it->is_null()) {
      if (!it->is_array()) return std::nullopt;
      tags.emplace();
      for (const auto& t : *it) {
        if (!t.is_string()) return std::nullopt;
        tags->push_back(t.get<std::string>());
      }
    }
    return make_record(id_field(obj, "tweet_id"), id_field(obj, "user_id"),
                       string_field(obj, "created_at"),
                       string_field(obj, "text"),
                       id_field(obj, "retweet_of_user_id"),
                       string_field(obj, "user_description"), std::move(tags));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), is_space);
}

ParsedStream parse_json_lines(std::istream& in) {
  ParsedStream out;
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    if (auto r = parse_json_line(line)) {
      out.records.push_back(std::move(*r));
    } else {
      ++out.malformed_lines;
    }
  }
  if (in.bad()) throw InputError("read error while parsing tweet stream");
  return out;
}

ParsedStream parse_csv(std::istream& in) {
  ParsedStream out;
  std::vector<std::string> header;
  bool ok = true;
  if (!csv::read_record(in, header, ok)) return out;
  if (!ok) throw InputError("unterminated quote in CSV header");

  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = header[i];
    while (!name.empty() && is_space(name.back())) name.pop_back();
    column.emplace(std::move(name), i);
  }
  for (const char* required : {"tweet_id", "user_id", "created_at", "text"}) {
    if (!column.contains(required)) {
      throw InputError(std::string("CSV header lacks required column '") +
                       required + "'");
    }
  }

  std::vector<std::string> fields;
  while (csv::read_record(in, fields, ok)) {
    if (fields.size() == 1 && blank(fields[0])) continue;
    if (!ok || fields.size() != header.size()) {
      ++out.malformed_lines;
      continue;
    }
    auto cell = [&](const char* name) -> std::optional<std::string> {
      const auto it = column.find(name);
      if (it == column.end()) return std::nullopt;
      return fields[it->second];
    };
    auto optional_cell = [&](const char* name) -> std::optional<std::string> {
      auto v = cell(name);
      if (v && v->empty()) return std::nullopt;
      return v;
    };
    std::optional<std::vector<std::string>> tags;
    if (auto raw = cell("hashtags")) {
      tags.emplace();
      std::string_view rest = *raw;
      while (!rest.empty()) {
        const auto bar = rest.find('|');
        tags->emplace_back(rest.substr(0, bar));
        if (bar == std::string_view::npos) break;
        rest.remove_prefix(bar + 1);
      }
    }
    if (auto r = make_record(cell("tweet_id"), cell("user_id"),
                             cell("created_at"), cell("text"),
                             optional_cell("retweet_of_user_id"),
                             optional_cell("user_description"), std::move(tags))) {
      out.records.push_back(std::move(*r));
    } else {
      ++out.malformed_lines;
    }
  }
  if (in.bad()) throw InputError("read error while parsing CSV tweet stream");
  return out;
}

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  int y = 0;
  unsigned mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
  if (s.size() < 19 || !parse_digits(s, 0, 4, y) || s[4] != '-' ||
      !parse_digits(s, 5, 2, mo) || s[7] != '-' || !parse_digits(s, 8, 2, d) ||
      (s[10] != 'T' && s[10] != ' ') || !parse_digits(s, 11, 2, hh) ||
      s[13] != ':' || !parse_digits(s, 14, 2, mm) || s[16] != ':' ||
      !parse_digits(s, 17, 2, ss)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) return std::nullopt;

  std::size_t pos = 19;
  long long millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      if (pos - start < 3) millis = millis * 10 + (s[pos] - '0');
      ++pos;
    }
    if (pos == start) return std::nullopt;
    for (std::size_t n = pos - start; n < 3; ++n) millis *= 10;
  }

  long long offset_minutes = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z' || s[pos] == 'z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      const int sign = s[pos] == '-' ? -1 : 1;
      unsigned oh = 0, om = 0;
      if (!parse_digits(s, pos + 1, 2, oh)) return std::nullopt;
      pos += 3;
      if (pos < s.size() && s[pos] == ':') ++pos;
      if (!parse_digits(s, pos, 2, om)) return std::nullopt;
      pos += 2;
      if (oh > 23 || om > 59) return std::nullopt;
      offset_minutes = sign * static_cast<long long>(oh * 60 + om);
    } else {
      return std::nullopt;
    }
  }
  if (pos != s.size()) return std::nullopt;

  const auto tp = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} +
                  milliseconds{millis} - minutes{offset_minutes};
  return time_point_cast<milliseconds>(tp);
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  auto rest = ts - day_point;
  const auto h = duration_cast<hours>(rest);
  rest -= h;
  const auto m = duration_cast<minutes>(rest);
  rest -= m;
  const auto s = duration_cast<seconds>(rest);
  rest -= s;
  const auto ms = rest.count();

  char buf[40];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02lld",
                        static_cast<int>(ymd.year()),
                        static_cast<unsigned>(ymd.month()),
                        static_cast<unsigned>(ymd.day()),
                        static_cast<int>(h.count()), static_cast<int>(m.count()),
                        static_cast<long long>(s.count()));
  if (ms != 0) {
    n += std::snprintf(buf + n, sizeof buf - n, ".%03lld",
                       static_cast<long long>(ms));
  }
  std::snprintf(buf + n, sizeof buf - n, "Z");
  return buf;
}

std::vector<std::string> extract_hashtags(std::string_view text) {
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '#') continue;
    std::size_t end = i + 1;
    while (end < text.size() && is_word_char(text[end])) ++end;
    if (end > i + 1) tags.push_back(to_lower_ascii(text.substr(i + 1, end - i - 1)));
    i = end - 1;
  }
  return tags;
}

std::optional<std::string> normalize_hashtag(std::string_view raw) {
  if (!raw.empty() && raw.front() == '#') raw.remove_prefix(1);
  if (raw.empty()) return std::nullopt;
  for (char c : raw) {
    if (c == '#' || is_space(c)) return std::nullopt;
  }
  return to_lower_ascii(raw);
}

ParsedStream parse_tweet_stream(std::istream& source, InputFormat format) {
  if (!source) throw InputError("tweet stream is not readable");
  return format == InputFormat::kCsv ? parse_csv(source)
                                     : parse_json_lines(source);
}

InputFormat format_for_path(const std::filesystem::path& path) {
  return to_lower_ascii(path.extension().string()) == ".csv"
             ? InputFormat::kCsv
             : InputFormat::kJsonLines;
}

ParsedStream read_tweet_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input '" + path.string() + "'");
  return parse_tweet_stream(in, format_for_path(path));
}

std::string serialize_tweet(const TweetRecord& r) {
  nlohmann::ordered_json obj;
  obj["tweet_id"] = r.tweet_id;
  obj["user_id"] = r.user_id;
  obj["created_at"] = format_timestamp(r.created_at);
  obj["text"] = r.text;
  obj["hashtags"] = r.hashtags;
  if (r.retweet_of_user_id) obj["retweet_of_user_id"] = *r.retweet_of_user_id;
  if (r.user_description) obj["user_description"] = *r.user_description;
  return obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void write_tweet_stream(std::ostream& out, std::span<const TweetRecord> records) {
  for (const auto& r : records) out << serialize_tweet(r) << '\n';
}

bool keyword_filter(const TweetRecord& record,
                    std::span<const std::string> keywords) {
  if (keywords.empty()) throw DomainError("keyword_filter: empty keyword list");
  const std::string text = to_lower_ascii(record.text);
  for (const auto& keyword : keywords) {
    const std::string term = to_lower_ascii(keyword);
    if (term.empty()) continue;
    if (term.front() == '#') {
      const std::string_view tag = std::string_view(term).substr(1);
      if (tag.empty()) continue;
      for (const auto& h : record.hashtags) {
        if (to_lower_ascii(h) == tag) return true;
      }
    } else if (text.find(term) != std::string::npos) {
      return true;
    }
  }
  return false;
}

CorpusStats corpus_summary(std::span<const TweetRecord> records) {
  CorpusStats stats;
  std::unordered_set<std::string_view> users;
  users.reserve(records.size());
  for (const auto& r : records) {
    ++stats.tweet_count;
    users.insert(r.user_id);
    if (r.is_retweet()) ++stats.retweet_count;
    if (r.has_description()) ++stats.records_with_description;
  }
  stats.unique_user_count = users.size();
  return stats;
}

}  // namespace tweetnet
