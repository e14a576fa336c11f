#include "opland/affiliation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace opland::affiliation {

void PartyRoster::finalize() {
  if (parties.size() < 2) throw std::runtime_error("roster needs at least 2 parties");
  if (parties.size() > 64) throw std::runtime_error("roster supports at most 64 parties");
  candidate_party.clear();
  for (uint32_t p = 0; p < parties.size(); ++p) {
    for (const auto& c : parties[p].candidates) {
      auto [it, inserted] = candidate_party.emplace(c, p);
      if (!inserted && it->second != p)
        throw std::runtime_error("candidate listed under two parties: " + c);
    }
  }
}

uint32_t PartyRoster::find_party(std::string_view id_or_acronym) const {
  for (uint32_t p = 0; p < parties.size(); ++p)
    if (parties[p].id == id_or_acronym || parties[p].acronym == id_or_acronym) return p;
  return kNoParty;
}

PartyRoster load_roster(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open roster file: " + path);
  PartyRoster roster;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Party party;
    std::string cands;
    if (!std::getline(ss, party.id, '\t') || !std::getline(ss, party.acronym, '\t') ||
        !std::getline(ss, cands, '\t'))
      throw std::runtime_error("bad roster line: " + line);
    std::istringstream cs(cands);
    std::string c;
    while (std::getline(cs, c, ','))
      if (!c.empty()) party.candidates.push_back(c);
    roster.parties.push_back(std::move(party));
  }
  roster.finalize();
  return roster;
}

FollowEdges load_follows(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open follows file: " + path);
  FollowEdges edges;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("bad follows line: " + line);
    edges.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return edges;
}

std::vector<size_t> AffiliationResult::party_sizes() const {
  std::vector<size_t> sizes(num_parties, 0);
  for (uint32_t p : party_of)
    if (p != kNoParty) ++sizes[p];
  return sizes;
}

AffiliationResult infer_affiliations(std::span<const ingest::TweetRecord> records,
                                     Interner& users, const FollowEdges& follows,
                                     const PartyRoster& roster, int64_t cutoff_ts,
                                     double threshold) {
  if (roster.parties.empty()) throw std::runtime_error("empty party roster");
  const size_t np = roster.parties.size();

  AffiliationResult out;
  out.cutoff_ts = cutoff_ts;
  out.num_parties = np;

  // map candidate user strings to dense ids so retweet targets can be matched
  std::unordered_map<UserId, uint32_t> cand_dense;
  for (const auto& [cand, p] : roster.candidate_party) {
    if (auto id = users.lookup(cand)) cand_dense.emplace(*id, p);
  }

  out.evidence.resize(users.size());
  for (auto& e : out.evidence) e.retweets_per_party.assign(np, 0);

  for (const auto& r : records) {
    if (r.timestamp >= cutoff_ts) break;  // records are timestamp ordered
    if (r.retweeted_user == kInvalidId) continue;
    auto it = cand_dense.find(r.retweeted_user);
    if (it == cand_dense.end()) continue;
    ++out.evidence[r.user].retweets_per_party[it->second];
  }

  for (const auto& [user, cand] : follows) {
    auto cit = roster.candidate_party.find(cand);
    if (cit == roster.candidate_party.end()) continue;
    UserId u = users.intern(user);
    if (u >= out.evidence.size()) {
      out.evidence.resize(users.size());
      out.evidence[u].retweets_per_party.assign(np, 0);
    }
    out.evidence[u].followed_party_mask |= (1ull << cit->second);
  }

  out.party_of.assign(out.evidence.size(), kNoParty);
  for (UserId u = 0; u < out.evidence.size(); ++u) {
    const auto& e = out.evidence[u];
    uint64_t total = 0;
    for (uint32_t c : e.retweets_per_party) total += c;
    if (total > 0) {
      for (uint32_t p = 0; p < np; ++p) {
        double share = static_cast<double>(e.retweets_per_party[p]) / static_cast<double>(total);
        if (share >= threshold) {
          out.party_of[u] = p;
          break;  // threshold > 0.5 makes a second qualifying party impossible
        }
      }
    } else if (e.followed_party_mask != 0 &&
               (e.followed_party_mask & (e.followed_party_mask - 1)) == 0) {
      uint32_t p = 0;
      while (!((e.followed_party_mask >> p) & 1)) ++p;
      out.party_of[u] = p;
    }
  }
  return out;
}

void save_affiliations(const std::string& path, const AffiliationResult& result,
                       const Interner& users, const PartyRoster& roster) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write: " + path);
  f << "# user\tparty\tretweets_per_party\tfollowed_parties\n";
  for (UserId u = 0; u < result.party_of.size(); ++u) {
    uint32_t p = result.party_of[u];
    const auto& e = result.evidence[u];
    uint64_t total = 0;
    for (uint32_t c : e.retweets_per_party) total += c;
    if (p == kNoParty && total == 0 && e.followed_party_mask == 0) continue;
    f << users.name(u) << '\t' << (p == kNoParty ? "none" : roster.parties[p].id) << '\t';
    for (size_t i = 0; i < e.retweets_per_party.size(); ++i) {
      if (i) f << ',';
      f << e.retweets_per_party[i];
    }
    f << '\t';
    bool first = true;
    for (uint32_t i = 0; i < roster.parties.size(); ++i) {
      if ((e.followed_party_mask >> i) & 1) {
        if (!first) f << ',';
        f << roster.parties[i].id;
        first = false;
      }
    }
    f << '\n';
  }
}

AffiliationResult load_affiliations(const std::string& path, Interner& users,
                                    const PartyRoster& roster) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open affiliations file: " + path);
  AffiliationResult out;
  out.num_parties = roster.parties.size();
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string user, party;
    if (!std::getline(ss, user, '\t') || !std::getline(ss, party, '\t')) continue;
    UserId u = users.intern(user);
    if (u >= out.party_of.size()) out.party_of.resize(users.size(), kNoParty);
    if (party != "none") {
      uint32_t p = roster.find_party(party);
      if (p == kNoParty) throw std::runtime_error("unknown party in affiliations: " + party);
      out.party_of[u] = p;
    }
  }
  out.party_of.resize(users.size(), kNoParty);
  out.evidence.resize(users.size());
  return out;
}

}  // namespace opland::affiliation
