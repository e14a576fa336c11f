#include "opland/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace opland::synth {

using nlohmann::json;

void SynthSpec::validate() const {
  if (parties.size() < 2) throw std::runtime_error("synth spec needs at least two parties");
  if (topic_sizes.empty()) throw std::runtime_error("synth spec needs at least one topic");
  for (uint32_t n : topic_sizes)
    if (n < 2) throw std::runtime_error("each planted topic needs at least two hashtags");
  int64_t start = parse_date(capture_start);
  int64_t end = parse_date(capture_end);
  if (end < start) throw std::runtime_error("capture_end precedes capture_start");
  for (const auto& p : parties) {
    if (p.users == 0) throw std::runtime_error("party '" + p.id + "' has no users");
    if (p.candidates == 0) throw std::runtime_error("party '" + p.id + "' has no candidates");
    if (p.preferences.size() != topic_sizes.size())
      throw std::runtime_error("party '" + p.id + "' preference vector length != topic count");
    double sum = 0.0;
    for (double w : p.preferences) {
      if (w < 0.0) throw std::runtime_error("negative topic preference for party '" + p.id + "'");
      sum += w;
    }
    if (sum <= 0.0) throw std::runtime_error("party '" + p.id + "' has all-zero preferences");
  }
  for (const auto& e : events) {
    if (e.party >= parties.size()) throw std::runtime_error("event names an unknown party");
    if (e.topic >= topic_sizes.size()) throw std::runtime_error("event names an unknown topic");
    int64_t d = parse_date(e.date);
    if (d < start || d > end) throw std::runtime_error("event date outside the capture interval");
  }
  for (const auto& r : realignments) {
    if (r.party >= parties.size()) throw std::runtime_error("realignment names an unknown party");
    if (r.preferences.size() != topic_sizes.size())
      throw std::runtime_error("realignment preference vector length != topic count");
    parse_date(r.date);
  }
}

SynthSpec load_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open synth spec: " + path);
  json j = json::parse(f);

  SynthSpec s;
  s.seed = j.value("seed", uint64_t{1});
  s.capture_start = j.at("capture_start").get<std::string>();
  s.capture_end = j.at("capture_end").get<std::string>();
  s.topic_sizes = j.at("topics").get<std::vector<uint32_t>>();
  s.tweets_per_user_per_day = j.value("tweets_per_user_per_day", 1.4);
  s.hashtag_fraction = j.value("hashtag_fraction", 0.14);
  s.topic_volatility = j.value("topic_volatility", 0.0);

  for (const auto& pj : j.at("parties")) {
    PartySpec p;
    p.id = pj.at("id").get<std::string>();
    p.acronym = pj.value("acronym", p.id);
    p.users = pj.at("users").get<uint32_t>();
    p.candidates = pj.value("candidates", uint32_t{2});
    p.preferences = pj.at("preferences").get<std::vector<double>>();
    p.candidate_retweet_prob = pj.value("candidate_retweet_prob", 0.05);
    s.parties.push_back(std::move(p));
  }
  if (j.contains("events")) {
    for (const auto& ej : j.at("events")) {
      EventSpec e;
      e.date = ej.at("date").get<std::string>();
      e.party = ej.at("party").get<uint32_t>();
      e.topic = ej.at("topic").get<uint32_t>();
      e.intensity = ej.value("intensity", 1.0);
      s.events.push_back(std::move(e));
    }
  }
  if (j.contains("realignments")) {
    for (const auto& rj : j.at("realignments")) {
      RealignmentSpec r;
      r.date = rj.at("date").get<std::string>();
      r.party = rj.at("party").get<uint32_t>();
      r.preferences = rj.at("preferences").get<std::vector<double>>();
      s.realignments.push_back(std::move(r));
    }
  }
  s.validate();
  return s;
}

namespace {

void sample_tags(Rng& rng, uint32_t topic_base, uint32_t topic_size, std::vector<uint32_t>& out) {
  out.clear();
  uint32_t want = 1 + static_cast<uint32_t>(rng.below(3));
  want = std::min(want, topic_size);
  while (out.size() < want) {
    uint32_t tag = topic_base + static_cast<uint32_t>(rng.below(topic_size));
    if (std::find(out.begin(), out.end(), tag) == out.end()) out.push_back(tag);
  }
}

}  // namespace

GroundTruth generate(const SynthSpec& spec, const std::string& out_dir) {
  spec.validate();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const int64_t start = parse_date(spec.capture_start);
  const int64_t end = parse_date(spec.capture_end);
  const size_t num_topics = spec.topic_sizes.size();

  GroundTruth gt;
  std::vector<uint32_t> topic_base(num_topics);
  for (size_t t = 0; t < num_topics; ++t) {
    topic_base[t] = static_cast<uint32_t>(gt.tag_names.size());
    for (uint32_t k = 0; k < spec.topic_sizes[t]; ++k) {
      gt.tag_names.push_back("t" + std::to_string(t) + "tag" + std::to_string(k));
      gt.topic_of_tag.push_back(static_cast<TopicId>(t));
    }
  }

  std::vector<std::vector<std::string>> candidates(spec.parties.size());
  for (size_t p = 0; p < spec.parties.size(); ++p)
    for (uint32_t c = 0; c < spec.parties[p].candidates; ++c)
      candidates[p].push_back("cand" + std::to_string(p) + "_" + std::to_string(c));

  for (size_t p = 0; p < spec.parties.size(); ++p) {
    for (uint32_t i = 0; i < spec.parties[p].users; ++i) {
      gt.user_names.push_back("u" + std::to_string(p) + "_" + std::to_string(i));
      gt.party_of_user.push_back(static_cast<uint32_t>(p));
    }
  }

  {
    std::ofstream f(out_dir + "/roster.tsv");
    if (!f) throw std::runtime_error("cannot write: " + out_dir + "/roster.tsv");
    for (size_t p = 0; p < spec.parties.size(); ++p) {
      f << spec.parties[p].id << '\t' << spec.parties[p].acronym << '\t';
      for (size_t c = 0; c < candidates[p].size(); ++c) {
        if (c) f << ',';
        f << candidates[p][c];
      }
      f << '\n';
    }
  }
  {
    std::ofstream f(out_dir + "/follows.tsv");
    if (!f) throw std::runtime_error("cannot write: " + out_dir + "/follows.tsv");
    size_t u = 0;
    for (size_t p = 0; p < spec.parties.size(); ++p)
      for (uint32_t i = 0; i < spec.parties[p].users; ++i, ++u)
        f << gt.user_names[u] << '\t' << candidates[p][i % candidates[p].size()] << '\n';
  }

  // per-day preference profiles after applying realignments
  std::vector<std::pair<int64_t, RealignmentSpec>> realigns;
  for (const auto& r : spec.realignments) realigns.emplace_back(parse_date(r.date), r);
  std::sort(realigns.begin(), realigns.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::pair<int64_t, EventSpec>> events;
  for (const auto& e : spec.events) events.emplace_back(parse_date(e.date), e);

  Rng rng(spec.seed ^ 0x73796e7468ull);
  std::ofstream out(out_dir + "/records.jsonl");
  if (!out) throw std::runtime_error("cannot write: " + out_dir + "/records.jsonl");

  uint64_t next_id = 0;
  std::vector<uint32_t> tags;
  std::vector<double> weights(num_topics);
  std::vector<std::vector<double>> prefs;
  for (const auto& p : spec.parties) prefs.push_back(p.preferences);

  auto emit = [&](const std::string& user, int64_t ts, const std::vector<uint32_t>& tag_ids,
                  const std::string* retweeted) {
    out << "{\"tweet_id\":\"s" << next_id++ << "\",\"user_id\":\"" << user
        << "\",\"timestamp\":" << ts;
    if (!tag_ids.empty()) {
      out << ",\"hashtags\":[";
      for (size_t i = 0; i < tag_ids.size(); ++i) {
        if (i) out << ',';
        out << '"' << gt.tag_names[tag_ids[i]] << '"';
      }
      out << ']';
    }
    if (retweeted) out << ",\"is_retweet\":true,\"retweeted_user_id\":\"" << *retweeted << '"';
    out << "}\n";
  };

  for (int64_t day = start; day <= end; ++day) {
    for (const auto& [d, r] : realigns)
      if (d == day) prefs[r.party] = r.preferences;

    // shared daily news cycle: lognormal shock per topic
    std::vector<double> mult(num_topics, 1.0);
    if (spec.topic_volatility > 0.0)
      for (auto& m : mult) m = std::exp(spec.topic_volatility * rng.normal());

    // local days run UTC-3; day d spans [d*86400 + 10800, ...)
    const int64_t day_base = day * 86400 + 10800;

    size_t u = 0;
    for (size_t p = 0; p < spec.parties.size(); ++p) {
      const auto& party = spec.parties[p];
      for (size_t t = 0; t < num_topics; ++t) weights[t] = prefs[p][t] * mult[t];

      double burst_mean = 0.0;
      uint32_t burst_topic = 0;
      for (const auto& [d, e] : events) {
        if (d == day && e.party == p) {
          burst_mean += 2.0 * e.intensity * spec.tweets_per_user_per_day * spec.hashtag_fraction;
          burst_topic = e.topic;
        }
      }

      for (uint32_t i = 0; i < party.users; ++i, ++u) {
        const std::string& name = gt.user_names[u];
        uint64_t n = rng.poisson(spec.tweets_per_user_per_day);
        for (uint64_t k = 0; k < n; ++k) {
          int64_t ts = day_base + static_cast<int64_t>(rng.below(86400));
          if (rng.next_double() < party.candidate_retweet_prob) {
            const std::string& cand = candidates[p][rng.below(candidates[p].size())];
            emit(name, ts, {}, &cand);
          } else if (rng.next_double() < spec.hashtag_fraction) {
            size_t topic = rng.pick(weights);
            sample_tags(rng, topic_base[topic], spec.topic_sizes[topic], tags);
            emit(name, ts, tags, nullptr);
          } else {
            emit(name, ts, {}, nullptr);
          }
        }
        if (burst_mean > 0.0) {
          uint64_t extra = rng.poisson(burst_mean);
          for (uint64_t k = 0; k < extra; ++k) {
            int64_t ts = day_base + static_cast<int64_t>(rng.below(86400));
            sample_tags(rng, topic_base[burst_topic], spec.topic_sizes[burst_topic], tags);
            emit(name, ts, tags, nullptr);
          }
        }
      }
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("I/O error while writing: " + out_dir + "/records.jsonl");

  {
    json j;
    j["capture_start"] = spec.capture_start;
    j["capture_end"] = spec.capture_end;
    j["seed"] = spec.seed;
    json topics = json::array();
    for (size_t t = 0; t < num_topics; ++t) {
      json tl = json::array();
      for (uint32_t k = 0; k < spec.topic_sizes[t]; ++k) tl.push_back(gt.tag_names[topic_base[t] + k]);
      topics.push_back(std::move(tl));
    }
    j["topics"] = std::move(topics);
    json parties = json::object();
    for (size_t i = 0; i < gt.user_names.size(); ++i)
      parties[gt.user_names[i]] = gt.party_of_user[i];
    j["party_of_user"] = std::move(parties);
    std::ofstream f(out_dir + "/ground_truth.json");
    f << j.dump(2) << '\n';
  }
  return gt;
}

}  // namespace opland::synth
