#include "opland/ingest.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "json.hpp"

namespace opland::ingest {

using nlohmann::json;

const char* to_string(TweetClass c) {
  switch (c) {
    case TweetClass::Reply: return "reply";
    case TweetClass::SimpleRetweet: return "simple_retweet";
    case TweetClass::QuoteRetweet: return "quote_retweet";
    case TweetClass::Original: return "original";
  }
  return "?";
}

TweetClass classify_tweet(const TweetRecord& r) {
  if (r.is_reply) return TweetClass::Reply;
  if (r.is_retweet) return TweetClass::SimpleRetweet;
  if (r.is_quote) return TweetClass::QuoteRetweet;
  return TweetClass::Original;
}

std::string normalize_hashtag(std::string_view raw) {
  if (!raw.empty() && raw[0] == '#') raw.remove_prefix(1);
  std::string out;
  out.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    unsigned char c = raw[i];
    if (c < 0x80) {
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == 0xC3 && i + 1 < raw.size()) {
      // Latin-1 supplement: U+00C0..U+00DE upper -> lower, except U+00D7
      unsigned char c2 = raw[i + 1];
      if (c2 >= 0x80 && c2 <= 0x9E && c2 != 0x97) c2 += 0x20;
      out.push_back(static_cast<char>(c));
      out.push_back(static_cast<char>(c2));
      ++i;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

namespace {

bool parse_line(const std::string& line, const CaptureConfig& config, ParseResult& out,
                TweetRecord& rec) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  auto it = j.find("tweet_id");
  if (it == j.end()) return false;
  rec.tweet_id = it->is_string() ? it->get<std::string>() : it->dump();

  it = j.find("user_id");
  if (it == j.end()) return false;
  std::string user = it->is_string() ? it->get<std::string>() : it->dump();

  it = j.find("timestamp");
  if (it == j.end()) return false;
  if (it->is_number_integer()) {
    rec.timestamp = it->get<int64_t>();
  } else if (it->is_string()) {
    try {
      rec.timestamp = parse_timestamp(it->get<std::string>());
    } catch (const std::exception&) {
      return false;
    }
  } else {
    return false;
  }

  rec.hashtags.clear();
  it = j.find("hashtags");
  if (it != j.end() && !it->is_null()) {
    if (!it->is_array()) return false;
    for (const auto& h : *it) {
      if (!h.is_string()) return false;
      std::string norm = normalize_hashtag(h.get<std::string>());
      if (norm.empty()) continue;
      TagId id = out.tags.intern(norm);
      if (std::find(rec.hashtags.begin(), rec.hashtags.end(), id) == rec.hashtags.end())
        rec.hashtags.push_back(id);
    }
  }

  auto flag = [&](const char* key) {
    auto f = j.find(key);
    if (f == j.end() || f->is_null()) return false;
    if (f->is_boolean()) return f->get<bool>();
    if (f->is_number_integer()) return f->get<int64_t>() != 0;
    return false;
  };
  rec.is_reply = flag("is_reply");
  rec.is_retweet = flag("is_retweet");
  rec.is_quote = flag("is_quote");

  rec.retweeted_user = kInvalidId;
  it = j.find("retweeted_user_id");
  if (it != j.end() && !it->is_null()) {
    std::string ru = it->is_string() ? it->get<std::string>() : it->dump();
    rec.retweeted_user = out.users.intern(ru);
  }

  rec.user = out.users.intern(user);
  (void)config;
  return true;
}

}  // namespace

ParseResult parse_stream(const std::string& path, const CaptureConfig& config,
                         const std::unordered_set<std::string>* user_allowlist) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);

  ParseResult out;
  std::unordered_map<std::string, size_t> by_tweet_id;
  std::string line;
  TweetRecord rec;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++out.stats.total_lines;
    if (!parse_line(line, config, out, rec)) {
      ++out.stats.malformed;
      continue;
    }
    if (rec.timestamp < config.ts_begin() || rec.timestamp >= config.ts_end()) {
      ++out.stats.dropped_outside;
      continue;
    }
    if (user_allowlist && !user_allowlist->count(out.users.name(rec.user))) {
      ++out.stats.filtered_users;
      continue;
    }
    auto [it, inserted] = by_tweet_id.try_emplace(rec.tweet_id, out.records.size());
    if (inserted) {
      out.records.push_back(std::move(rec));
    } else {
      // duplicate tweet id: last record wins
      ++out.stats.duplicates;
      out.records[it->second] = std::move(rec);
    }
    rec = TweetRecord{};
  }
  if (in.bad()) throw std::runtime_error("I/O error while reading: " + path);
  if (out.stats.total_lines > 0 && out.stats.malformed * 2 > out.stats.total_lines)
    throw std::runtime_error("more than half of the input lines are malformed; wrong schema?");

  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const TweetRecord& a, const TweetRecord& b) { return a.timestamp < b.timestamp; });
  return out;
}

std::vector<UserId> active_users(std::span<const TweetRecord> records, const CaptureConfig& config) {
  const int64_t probe_end = config.start_day + config.probe_days;
  std::vector<UserId> out;
  for (const auto& r : records) {
    int64_t day = config.day_of(r.timestamp);
    if (day >= probe_end) break;  // records are timestamp ordered
    if (day >= config.start_day) out.push_back(r.user);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void save_store(const std::string& dir, const ParseResult& result, const CaptureConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  {
    std::ofstream f(dir + "/users.tsv");
    for (uint32_t i = 0; i < result.users.size(); ++i) f << i << '\t' << result.users.name(i) << '\n';
  }
  {
    std::ofstream f(dir + "/hashtags.tsv");
    for (uint32_t i = 0; i < result.tags.size(); ++i) f << i << '\t' << result.tags.name(i) << '\n';
  }
  {
    std::ofstream f(dir + "/records.tsv");
    for (const auto& r : result.records) {
      int flags = (r.is_reply ? 1 : 0) | (r.is_retweet ? 2 : 0) | (r.is_quote ? 4 : 0);
      f << r.tweet_id << '\t' << r.user << '\t' << r.timestamp << '\t' << flags << '\t'
        << static_cast<int64_t>(r.retweeted_user == kInvalidId ? -1 : static_cast<int64_t>(r.retweeted_user))
        << '\t';
      for (size_t i = 0; i < r.hashtags.size(); ++i) {
        if (i) f << ',';
        f << r.hashtags[i];
      }
      f << '\n';
    }
  }
  {
    json meta;
    meta["capture_start"] = format_date(config.start_day);
    meta["capture_end"] = format_date(config.end_day);
    meta["window_days"] = config.window_days;
    meta["probe_days"] = config.probe_days;
    meta["utc_offset_minutes"] = config.utc_offset_minutes;
    meta["records"] = result.records.size();
    meta["total_lines"] = result.stats.total_lines;
    meta["malformed"] = result.stats.malformed;
    meta["dropped_outside"] = result.stats.dropped_outside;
    meta["duplicates"] = result.stats.duplicates;
    meta["filtered_users"] = result.stats.filtered_users;
    std::ofstream f(dir + "/meta.json");
    f << meta.dump(2) << '\n';
  }
}

ParseResult load_store(const std::string& dir, CaptureConfig* config_out) {
  ParseResult out;
  {
    std::ifstream f(dir + "/users.tsv");
    if (!f) throw std::runtime_error("missing store file: " + dir + "/users.tsv");
    std::string line;
    while (std::getline(f, line)) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      out.users.intern(line.substr(tab + 1));
    }
  }
  {
    std::ifstream f(dir + "/hashtags.tsv");
    if (!f) throw std::runtime_error("missing store file: " + dir + "/hashtags.tsv");
    std::string line;
    while (std::getline(f, line)) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      out.tags.intern(line.substr(tab + 1));
    }
  }
  {
    std::ifstream f(dir + "/records.tsv");
    if (!f) throw std::runtime_error("missing store file: " + dir + "/records.tsv");
    std::string line;
    while (std::getline(f, line)) {
      TweetRecord r;
      size_t pos = 0;
      auto next = [&](char sep) {
        size_t e = line.find(sep, pos);
        std::string_view tok(line.data() + pos, (e == std::string::npos ? line.size() : e) - pos);
        pos = (e == std::string::npos) ? line.size() : e + 1;
        return tok;
      };
      r.tweet_id = std::string(next('\t'));
      r.user = static_cast<UserId>(std::stoul(std::string(next('\t'))));
      r.timestamp = std::stoll(std::string(next('\t')));
      int flags = std::stoi(std::string(next('\t')));
      r.is_reply = flags & 1;
      r.is_retweet = flags & 2;
      r.is_quote = flags & 4;
      int64_t ru = std::stoll(std::string(next('\t')));
      r.retweeted_user = ru < 0 ? kInvalidId : static_cast<UserId>(ru);
      while (pos < line.size()) {
        r.hashtags.push_back(static_cast<TagId>(std::stoul(std::string(next(',')))));
      }
      out.records.push_back(std::move(r));
    }
  }
  if (config_out) {
    std::ifstream f(dir + "/meta.json");
    if (!f) throw std::runtime_error("missing store file: " + dir + "/meta.json");
    json meta = json::parse(f);
    config_out->start_day = parse_date(meta.at("capture_start").get<std::string>());
    config_out->end_day = parse_date(meta.at("capture_end").get<std::string>());
    config_out->window_days = meta.at("window_days").get<int>();
    config_out->probe_days = meta.at("probe_days").get<int>();
    config_out->utc_offset_minutes = meta.at("utc_offset_minutes").get<int>();
  }
  return out;
}

}  // namespace opland::ingest
