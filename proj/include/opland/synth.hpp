#pragma once

#include <string>
#include <vector>

#include "opland/core.hpp"

namespace opland::synth {

struct PartySpec {
  std::string id;
  std::string acronym;
  uint32_t users = 0;
  uint32_t candidates = 2;
  std::vector<double> preferences;  // over topics, sums to 1
  // probability that a tweet retweets one of the party's candidates
  double candidate_retweet_prob = 0.05;
};

struct EventSpec {
  std::string date;  // YYYY-MM-DD
  uint32_t party = 0;
  uint32_t topic = 0;
  double intensity = 1.0;
};

struct RealignmentSpec {
  std::string date;
  uint32_t party = 0;
  std::vector<double> preferences;  // profile used from `date` on
};

struct SynthSpec {
  uint64_t seed = 1;
  std::string capture_start;
  std::string capture_end;
  std::vector<PartySpec> parties;
  std::vector<uint32_t> topic_sizes;  // hashtags per planted topic
  double tweets_per_user_per_day = 1.4;
  double hashtag_fraction = 0.14;
  // daily lognormal shock applied to topic prevalence (news cycle); 0 = off
  double topic_volatility = 0.0;
  std::vector<EventSpec> events;
  std::vector<RealignmentSpec> realignments;

  void validate() const;
};

SynthSpec load_spec(const std::string& path);

struct GroundTruth {
  std::vector<TopicId> topic_of_tag;      // planted partition, dense tag index
  std::vector<std::string> tag_names;
  std::vector<uint32_t> party_of_user;    // dense user index within the corpus
  std::vector<std::string> user_names;
};

// Writes records.jsonl, roster.tsv, follows.tsv and ground_truth.json into
// out_dir. Byte-identical output for identical spec + seed.
GroundTruth generate(const SynthSpec& spec, const std::string& out_dir);

}  // namespace opland::synth
