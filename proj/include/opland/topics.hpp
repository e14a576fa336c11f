#pragma once

#include <string>
#include <vector>

#include "opland/core.hpp"
#include "opland/semantic_graph.hpp"

namespace opland::topics {

struct TopicPartition {
  uint32_t num_topics = 0;
  std::vector<TopicId> topic_of;             // indexed by tag id, kInvalidId = unassigned
  std::vector<std::vector<TagId>> members;   // per topic, sorted
  std::string detector;                      // provenance tag

  TopicId topic(TagId t) const { return t < topic_of.size() ? topic_of[t] : kInvalidId; }
};

// Default detector: greedy weighted-modularity maximization (Louvain style)
// with a node-visit order derived from the seed. Deterministic given seed.
// Singleton communities are left unassigned.
TopicPartition detect_topics(const semgraph::CooccurrenceGraph& graph, uint64_t seed);

// Reduces (possibly overlapping) communities to a partition: each node goes
// to the community where the sum of its incident edge weights to members is
// highest, ties to the lowest topic id. Throws if a community references a
// node that is not in the graph.
TopicPartition partition_from_communities(const semgraph::CooccurrenceGraph& graph,
                                          const std::vector<std::vector<TagId>>& communities,
                                          const std::string& provenance);

// Community file: one line per topic, "topic_id tag tag ...".
void save_communities(const std::string& path, const TopicPartition& partition,
                      const Interner& tags);
std::vector<std::vector<TagId>> load_communities(const std::string& path, const Interner& tags);

struct CorenessEntry {
  TagId tag = 0;
  uint32_t degree = 0;
  uint32_t coreness = 0;
};

// Peeling on the unweighted subgraph induced by the topic's members.
std::vector<CorenessEntry> coreness(const semgraph::CooccurrenceGraph& graph,
                                    const TopicPartition& partition, TopicId topic);

// Normalized mutual information (2I / (Ha + Hb)) between two labelings over
// the items assigned in both (kInvalidId entries are skipped). Returns 1 for
// two identical single-cluster labelings.
double nmi(const std::vector<TopicId>& a, const std::vector<TopicId>& b);

// Weighted modularity of the partition (unassigned nodes count as singletons).
double modularity(const semgraph::CooccurrenceGraph& graph, const std::vector<TopicId>& topic_of);

}  // namespace opland::topics
