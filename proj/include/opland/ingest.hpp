#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "opland/core.hpp"

namespace opland::ingest {

struct TweetRecord {
  std::string tweet_id;
  UserId user = kInvalidId;
  int64_t timestamp = 0;  // UTC epoch seconds
  std::vector<TagId> hashtags;
  bool is_reply = false;
  bool is_retweet = false;
  bool is_quote = false;
  UserId retweeted_user = kInvalidId;
};

enum class TweetClass { Reply, SimpleRetweet, QuoteRetweet, Original };

const char* to_string(TweetClass c);

// Precedence: reply > simple retweet > quote retweet > original.
TweetClass classify_tweet(const TweetRecord& r);

struct CaptureConfig {
  int64_t start_day = 0;  // inclusive
  int64_t end_day = 0;    // inclusive
  int window_days = 7;
  int probe_days = 30;
  int utc_offset_minutes = -180;  // Argentina default

  int64_t day_of(int64_t ts) const {
    int64_t t = ts + static_cast<int64_t>(utc_offset_minutes) * 60;
    return t >= 0 ? t / 86400 : (t - 86399) / 86400;
  }
  // capture interval as UTC epoch seconds, [begin, end)
  int64_t ts_begin() const { return start_day * 86400 - static_cast<int64_t>(utc_offset_minutes) * 60; }
  int64_t ts_end() const { return (end_day + 1) * 86400 - static_cast<int64_t>(utc_offset_minutes) * 60; }
};

struct ParseStats {
  uint64_t total_lines = 0;
  uint64_t malformed = 0;
  uint64_t dropped_outside = 0;
  uint64_t duplicates = 0;
  uint64_t filtered_users = 0;
};

struct ParseResult {
  std::vector<TweetRecord> records;  // timestamp order (stable)
  Interner users;
  Interner tags;
  ParseStats stats;
};

// Strip one leading '#', case-fold (ASCII + Latin-1 supplement in UTF-8).
// Returns empty string if nothing remains.
std::string normalize_hashtag(std::string_view raw);

// Parses a line-delimited JSON record file. Malformed lines are counted and
// skipped; throws std::runtime_error if the file is unreadable or more than
// half the lines are malformed.
ParseResult parse_stream(const std::string& path, const CaptureConfig& config,
                         const std::unordered_set<std::string>* user_allowlist = nullptr);

// Users with at least one record in [start, start + probe_days) local days.
// Input must be timestamp-ordered. Returns sorted unique ids.
std::vector<UserId> active_users(std::span<const TweetRecord> records,
                                 const CaptureConfig& config);

// On-disk indexed store produced by the ingest stage.
void save_store(const std::string& dir, const ParseResult& result, const CaptureConfig& config);
ParseResult load_store(const std::string& dir, CaptureConfig* config_out = nullptr);

}  // namespace opland::ingest
