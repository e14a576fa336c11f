#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "opland/core.hpp"
#include "opland/ingest.hpp"

namespace opland::affiliation {

inline constexpr uint32_t kNoParty = 0xFFFFFFFFu;

struct Party {
  std::string id;
  std::string acronym;
  std::vector<std::string> candidates;
};

struct PartyRoster {
  std::vector<Party> parties;

  // candidate account id -> party index; candidates are disjoint across parties
  std::unordered_map<std::string, uint32_t> candidate_party;

  void finalize();  // builds candidate_party, validates
  uint32_t find_party(std::string_view id_or_acronym) const;  // kNoParty if unknown
};

// Tab-separated: party_id \t acronym \t cand1,cand2,...
PartyRoster load_roster(const std::string& path);

// Tab-separated edges: user_id \t candidate_id
using FollowEdges = std::vector<std::pair<std::string, std::string>>;
FollowEdges load_follows(const std::string& path);

struct UserEvidence {
  std::vector<uint32_t> retweets_per_party;  // size = number of parties
  uint64_t followed_party_mask = 0;          // bit per party (<=64 parties)
};

struct AffiliationResult {
  // user dense id -> party index, kNoParty when unassigned
  std::vector<uint32_t> party_of;
  std::vector<UserEvidence> evidence;
  int64_t cutoff_ts = 0;
  size_t num_parties = 0;

  uint32_t party(UserId u) const { return u < party_of.size() ? party_of[u] : kNoParty; }
  std::vector<size_t> party_sizes() const;
};

// Evidence is taken from records with timestamp < cutoff_ts. A user who
// retweeted at least one candidate is assigned the party whose retweet share
// reaches `threshold`; otherwise a user following candidates of exactly one
// party is assigned that party; otherwise no party.
AffiliationResult infer_affiliations(std::span<const ingest::TweetRecord> records,
                                     Interner& users, const FollowEdges& follows,
                                     const PartyRoster& roster, int64_t cutoff_ts,
                                     double threshold = 0.75);

void save_affiliations(const std::string& path, const AffiliationResult& result,
                       const Interner& users, const PartyRoster& roster);
// Loads "user \t party_id" (extra columns ignored) back into a result.
AffiliationResult load_affiliations(const std::string& path, Interner& users,
                                    const PartyRoster& roster);

}  // namespace opland::affiliation
