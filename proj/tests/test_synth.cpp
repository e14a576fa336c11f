#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "opland/ingest.hpp"
#include "opland/synth.hpp"

using namespace opland;
using namespace opland::synth;

namespace {

SynthSpec small_spec() {
  SynthSpec s;
  s.seed = 11;
  s.capture_start = "2015-03-01";
  s.capture_end = "2015-03-20";
  s.topic_sizes = {5, 5, 5};
  s.parties.push_back({"p0", "AAA", 50, 2, {0.6, 0.3, 0.1}, 0.05});
  s.parties.push_back({"p1", "BBB", 50, 2, {0.1, 0.3, 0.6}, 0.05});
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fresh_dir(const std::string& name) {
  auto dir = (std::filesystem::temp_directory_path() / name).string();
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("spec validation rejects inconsistent configurations") {
  auto s = small_spec();
  CHECK_NOTHROW(s.validate());

  auto bad = s;
  bad.parties.pop_back();
  CHECK_THROWS(bad.validate());  // one party

  bad = s;
  bad.parties[0].preferences = {0.5, 0.5};
  CHECK_THROWS(bad.validate());  // wrong preference length

  bad = s;
  bad.parties[0].preferences = {0.0, 0.0, 0.0};
  CHECK_THROWS(bad.validate());  // all-zero preferences

  bad = s;
  bad.events.push_back({"2016-01-01", 0, 0, 1.0});
  CHECK_THROWS(bad.validate());  // event outside the capture

  bad = s;
  bad.events.push_back({"2015-03-05", 0, 9, 1.0});
  CHECK_THROWS(bad.validate());  // unknown topic

  bad = s;
  bad.capture_end = "2015-02-01";
  CHECK_THROWS(bad.validate());  // end before start
}

TEST_CASE("the same seed yields a byte-identical corpus") {
  auto spec = small_spec();
  auto d1 = fresh_dir("opland_synth_a"), d2 = fresh_dir("opland_synth_b");
  generate(spec, d1);
  generate(spec, d2);
  CHECK(slurp(d1 + "/records.jsonl") == slurp(d2 + "/records.jsonl"));
  CHECK(slurp(d1 + "/roster.tsv") == slurp(d2 + "/roster.tsv"));
  CHECK(slurp(d1 + "/follows.tsv") == slurp(d2 + "/follows.tsv"));
  CHECK(slurp(d1 + "/ground_truth.json") == slurp(d2 + "/ground_truth.json"));

  auto spec2 = spec;
  spec2.seed = 12;
  auto d3 = fresh_dir("opland_synth_c");
  generate(spec2, d3);
  CHECK(slurp(d1 + "/records.jsonl") != slurp(d3 + "/records.jsonl"));
}

TEST_CASE("the emitted corpus parses with ingest and matches spec statistics") {
  auto spec = small_spec();
  spec.capture_end = "2015-04-30";  // longer run for tighter statistics
  auto dir = fresh_dir("opland_synth_stats");
  auto gt = generate(spec, dir);

  ingest::CaptureConfig cc;
  cc.start_day = parse_date(spec.capture_start);
  cc.end_day = parse_date(spec.capture_end);
  auto result = ingest::parse_stream(dir + "/records.jsonl", cc);
  CHECK(result.stats.malformed == 0);
  CHECK(result.stats.dropped_outside == 0);

  // volume ~ users * days * rate
  double expected = 100.0 * 61.0 * spec.tweets_per_user_per_day;
  CHECK(static_cast<double>(result.records.size()) ==
        doctest::Approx(expected).epsilon(0.05));

  // tagged fraction ~ (1 - retweet_prob) * hashtag_fraction
  size_t tagged = 0, retweets = 0;
  for (const auto& r : result.records) {
    if (!r.hashtags.empty()) ++tagged;
    if (r.is_retweet) ++retweets;
  }
  double tag_rate = static_cast<double>(tagged) / static_cast<double>(result.records.size());
  CHECK(tag_rate == doctest::Approx(0.95 * 0.14).epsilon(0.1));
  double rt_rate = static_cast<double>(retweets) / static_cast<double>(result.records.size());
  CHECK(rt_rate == doctest::Approx(0.05).epsilon(0.15));

  // per-party topic usage tracks the preference profiles
  std::map<std::string, uint32_t> party_of;
  for (size_t i = 0; i < gt.user_names.size(); ++i) party_of[gt.user_names[i]] = gt.party_of_user[i];
  std::vector<std::vector<double>> counts(2, std::vector<double>(3, 0.0));
  for (const auto& r : result.records) {
    uint32_t p = party_of.at(result.users.name(r.user));
    for (TagId tag : r.hashtags) {
      std::string name = result.tags.name(tag);
      uint32_t topic = static_cast<uint32_t>(name[1] - '0');
      counts[p][topic] += 1.0;
    }
  }
  for (int p = 0; p < 2; ++p) {
    double total = counts[p][0] + counts[p][1] + counts[p][2];
    for (int t = 0; t < 3; ++t)
      CHECK(std::abs(counts[p][t] / total - spec.parties[p].preferences[t]) < 0.05);
  }

  // ground truth is self-consistent
  CHECK(gt.tag_names.size() == 15);
  CHECK(gt.topic_of_tag[0] == 0);
  CHECK(gt.topic_of_tag[14] == 2);
  CHECK(gt.user_names.size() == 100);
}

TEST_CASE("follows and roster wire every user to their own party") {
  auto spec = small_spec();
  auto dir = fresh_dir("opland_synth_roster");
  auto gt = generate(spec, dir);

  std::ifstream rf(dir + "/roster.tsv");
  std::string line;
  std::getline(rf, line);
  CHECK(line.substr(0, 7) == "p0\tAAA\t");

  std::map<std::string, uint32_t> party_of;
  for (size_t i = 0; i < gt.user_names.size(); ++i) party_of[gt.user_names[i]] = gt.party_of_user[i];
  std::ifstream ff(dir + "/follows.tsv");
  size_t n = 0;
  while (std::getline(ff, line)) {
    auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    std::string user = line.substr(0, tab), cand = line.substr(tab + 1);
    // candidate names are "cand<party>_<i>"
    uint32_t cand_party = static_cast<uint32_t>(cand[4] - '0');
    CHECK(party_of.at(user) == cand_party);
    ++n;
  }
  CHECK(n == 100);
}

TEST_CASE("spec files load with defaults applied") {
  auto path = (std::filesystem::temp_directory_path() / "opland_synth_spec.json").string();
  {
    std::ofstream f(path);
    f << R"({
      "capture_start": "2015-03-01",
      "capture_end": "2015-03-10",
      "topics": [4, 4],
      "parties": [
        {"id": "a", "users": 10, "preferences": [0.8, 0.2]},
        {"id": "b", "users": 10, "preferences": [0.2, 0.8]}
      ],
      "events": [{"date": "2015-03-05", "party": 0, "topic": 1, "intensity": 3}]
    })";
  }
  auto spec = load_spec(path);
  CHECK(spec.seed == 1);
  CHECK(spec.tweets_per_user_per_day == doctest::Approx(1.4));
  CHECK(spec.hashtag_fraction == doctest::Approx(0.14));
  CHECK(spec.parties[0].acronym == "a");
  CHECK(spec.parties[0].candidates == 2);
  REQUIRE(spec.events.size() == 1);
  CHECK(spec.events[0].intensity == doctest::Approx(3.0));
}
