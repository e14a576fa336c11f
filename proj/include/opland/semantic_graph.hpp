#pragma once

#include <span>
#include <string>
#include <vector>

#include "opland/affiliation.hpp"
#include "opland/core.hpp"
#include "opland/ingest.hpp"

namespace opland::semgraph {

struct Edge {
  TagId a = 0;  // a < b
  TagId b = 0;
  uint32_t weight = 0;  // number of distinct users who co-used the pair
};

struct CooccurrenceGraph {
  uint32_t num_tags = 0;            // dense tag id space of the source stream
  std::vector<Edge> edges;          // sorted by (a, b), weight >= min_weight
  std::vector<uint32_t> tag_users;  // per tag id, distinct users that used it
  std::vector<TagId> nodes;         // non-isolated tags after pruning, sorted

  std::vector<std::vector<std::pair<TagId, uint32_t>>> adjacency() const;
};

// Edge weight counts distinct users per unordered tag pair within single
// tweets; edges below min_weight and isolated nodes are removed.
CooccurrenceGraph build_graph(std::span<const ingest::TweetRecord> records,
                              uint32_t num_tags, uint32_t min_weight = 5);

struct PoliticalScore {
  TagId tag = 0;
  double dkl = 0.0;            // bits
  std::vector<double> shares;  // P_h, per party
  uint32_t affiliated_users = 0;
  bool is_political = false;
};

// Relative entropy in bits between the per-party distribution of a hashtag's
// users and the party-size distribution. Hashtags never used by an affiliated
// user are excluded.
std::vector<PoliticalScore> political_scores(std::span<const ingest::TweetRecord> records,
                                             const affiliation::AffiliationResult& affiliations,
                                             double kl_threshold = 0.5);

void save_graph(const std::string& edges_path, const std::string& nodes_path,
                const CooccurrenceGraph& graph, const Interner& tags);
// Interchange format for external community detection: "denseA denseB weight"
void save_interchange(const std::string& path, const CooccurrenceGraph& graph);
CooccurrenceGraph load_graph(const std::string& edges_path, const std::string& nodes_path,
                             Interner& tags);
void save_political(const std::string& path, const std::vector<PoliticalScore>& scores,
                    const Interner& tags, const affiliation::PartyRoster& roster);

}  // namespace opland::semgraph
