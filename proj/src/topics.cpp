#include "opland/topics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace opland::topics {

namespace {

struct CompactGraph {
  size_t n = 0;
  // per node: (neighbor, weight); self loops carry the full internal weight
  std::vector<std::vector<std::pair<uint32_t, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> strength;  // weighted degree incl. 2*self_loop
  double total_weight = 0.0;     // sum of edge weights incl. self loops
};

// One Louvain level. Returns node -> community (renumbered 0..k-1) or an
// empty vector when no node moved.
std::vector<uint32_t> louvain_level(const CompactGraph& g, Rng& rng) {
  const size_t n = g.n;
  const double m2 = 2.0 * g.total_weight;
  std::vector<uint32_t> comm(n);
  std::iota(comm.begin(), comm.end(), 0u);
  std::vector<double> tot(g.strength);  // Σ strength per community

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(order);

  std::vector<double> w_to(n, 0.0);
  std::vector<uint32_t> touched;
  bool any_move = false;
  bool improved = true;
  while (improved) {
    improved = false;
    for (uint32_t u : order) {
      uint32_t cu = comm[u];
      touched.clear();
      for (const auto& [v, w] : g.adj[u]) {
        if (v == u) continue;
        uint32_t c = comm[v];
        if (w_to[c] == 0.0) touched.push_back(c);
        w_to[c] += w;
      }
      if (w_to[cu] == 0.0) touched.push_back(cu);

      tot[cu] -= g.strength[u];
      double best_gain = w_to[cu] - tot[cu] * g.strength[u] / m2;
      uint32_t best = cu;
      std::sort(touched.begin(), touched.end());
      for (uint32_t c : touched) {
        if (c == cu) continue;
        double gain = w_to[c] - tot[c] * g.strength[u] / m2;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += g.strength[u];
      if (best != cu) {
        comm[u] = best;
        improved = true;
        any_move = true;
      }
      for (uint32_t c : touched) w_to[c] = 0.0;
    }
  }
  if (!any_move) return {};

  // renumber communities contiguously, keeping relative order
  std::vector<uint32_t> renum(n, kInvalidId);
  uint32_t next = 0;
  for (size_t u = 0; u < n; ++u) {
    if (renum[comm[u]] == kInvalidId) renum[comm[u]] = next++;
    comm[u] = renum[comm[u]];
  }
  return comm;
}

CompactGraph aggregate(const CompactGraph& g, const std::vector<uint32_t>& comm) {
  uint32_t k = *std::max_element(comm.begin(), comm.end()) + 1;
  CompactGraph out;
  out.n = k;
  out.adj.resize(k);
  out.self_loop.assign(k, 0.0);
  out.strength.assign(k, 0.0);
  std::vector<std::unordered_map<uint32_t, double>> acc(k);
  for (size_t u = 0; u < g.n; ++u) {
    uint32_t cu = comm[u];
    out.self_loop[cu] += g.self_loop[u];
    for (const auto& [v, w] : g.adj[u]) {
      if (v == u) continue;
      uint32_t cv = comm[v];
      if (cv == cu)
        out.self_loop[cu] += w / 2.0;  // each internal edge visited from both ends
      else
        acc[cu][cv] += w;
    }
  }
  for (uint32_t c = 0; c < k; ++c) {
    std::vector<std::pair<uint32_t, double>> nb(acc[c].begin(), acc[c].end());
    std::sort(nb.begin(), nb.end());
    out.adj[c] = std::move(nb);
    if (out.self_loop[c] > 0.0) out.adj[c].emplace_back(c, out.self_loop[c]);
  }
  for (uint32_t c = 0; c < k; ++c) {
    double s = 2.0 * out.self_loop[c];
    for (const auto& [v, w] : out.adj[c])
      if (v != c) s += w;
    out.strength[c] = s;
    out.total_weight += out.self_loop[c];
    for (const auto& [v, w] : out.adj[c])
      if (v > c) out.total_weight += w;
  }
  return out;
}

TopicPartition finalize_partition(const semgraph::CooccurrenceGraph& graph,
                                  std::vector<std::vector<TagId>> groups,
                                  const std::string& provenance) {
  TopicPartition part;
  part.detector = provenance;
  part.topic_of.assign(graph.num_tags, kInvalidId);

  // topics keep only groups with >= 2 members; ids ordered by smallest member
  std::erase_if(groups, [](const std::vector<TagId>& g) { return g.size() < 2; });
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  part.num_topics = static_cast<uint32_t>(groups.size());
  part.members = std::move(groups);
  for (TopicId t = 0; t < part.num_topics; ++t)
    for (TagId tag : part.members[t]) part.topic_of[tag] = t;
  return part;
}

}  // namespace

TopicPartition detect_topics(const semgraph::CooccurrenceGraph& graph, uint64_t seed) {
  const size_t n = graph.nodes.size();
  CompactGraph g;
  g.n = n;
  g.adj.resize(n);
  g.self_loop.assign(n, 0.0);
  g.strength.assign(n, 0.0);
  std::unordered_map<TagId, uint32_t> index;
  index.reserve(n);
  for (uint32_t i = 0; i < n; ++i) index.emplace(graph.nodes[i], i);
  for (const auto& e : graph.edges) {
    uint32_t a = index.at(e.a), b = index.at(e.b);
    g.adj[a].emplace_back(b, static_cast<double>(e.weight));
    g.adj[b].emplace_back(a, static_cast<double>(e.weight));
    g.strength[a] += e.weight;
    g.strength[b] += e.weight;
    g.total_weight += e.weight;
  }

  Rng rng(seed ^ 0x6f70616e64ull);

  // community assignment of original nodes, refined level by level
  std::vector<uint32_t> node_comm(n);
  std::iota(node_comm.begin(), node_comm.end(), 0u);
  CompactGraph level = std::move(g);
  while (true) {
    std::vector<uint32_t> comm = louvain_level(level, rng);
    if (comm.empty()) break;
    for (auto& c : node_comm) c = comm[c];
    CompactGraph next = aggregate(level, comm);
    if (next.n == level.n) break;
    level = std::move(next);
  }

  uint32_t k = n ? *std::max_element(node_comm.begin(), node_comm.end()) + 1 : 0;
  std::vector<std::vector<TagId>> groups(k);
  for (uint32_t i = 0; i < n; ++i) groups[node_comm[i]].push_back(graph.nodes[i]);
  return finalize_partition(graph, std::move(groups), "default-modularity");
}

TopicPartition partition_from_communities(const semgraph::CooccurrenceGraph& graph,
                                          const std::vector<std::vector<TagId>>& communities,
                                          const std::string& provenance) {
  std::vector<char> in_graph(graph.num_tags, 0);
  for (TagId t : graph.nodes) in_graph[t] = 1;
  for (const auto& comm : communities)
    for (TagId t : comm)
      if (t >= graph.num_tags || !in_graph[t])
        throw std::runtime_error("external community references unknown node id " + std::to_string(t));

  // memberships per node
  std::vector<std::vector<uint32_t>> node_comms(graph.num_tags);
  for (uint32_t c = 0; c < communities.size(); ++c)
    for (TagId t : communities[c]) node_comms[t].push_back(c);

  auto adj = graph.adjacency();
  std::vector<std::vector<TagId>> groups(communities.size());
  for (TagId t = 0; t < graph.num_tags; ++t) {
    const auto& cs = node_comms[t];
    if (cs.empty()) continue;
    uint32_t best = cs.front();
    if (cs.size() > 1) {
      // assign to the community with the highest internal strength
      std::vector<char> member(communities.size(), 0);
      for (uint32_t c : cs) member[c] = 1;
      std::unordered_map<uint32_t, double> strength;
      for (const auto& [v, w] : adj[t])
        for (uint32_t c : node_comms[v])
          if (member[c]) strength[c] += w;
      double best_s = -1.0;
      for (uint32_t c : cs) {
        double s = strength.count(c) ? strength[c] : 0.0;
        if (s > best_s + 1e-12 || (std::abs(s - best_s) <= 1e-12 && c < best)) {
          best_s = s;
          best = c;
        }
      }
    }
    groups[best].push_back(t);
  }
  return finalize_partition(graph, std::move(groups), provenance);
}

void save_communities(const std::string& path, const TopicPartition& partition,
                      const Interner& tags) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write: " + path);
  for (TopicId t = 0; t < partition.num_topics; ++t) {
    f << t;
    for (TagId tag : partition.members[t]) f << ' ' << tags.name(tag);
    f << '\n';
  }
}

std::vector<std::vector<TagId>> load_communities(const std::string& path, const Interner& tags) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open communities file: " + path);
  std::vector<std::vector<TagId>> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string topic_id, tag;
    ss >> topic_id;
    std::vector<TagId> members;
    while (ss >> tag) {
      auto id = tags.lookup(tag);
      if (!id) throw std::runtime_error("community file references unknown hashtag: " + tag);
      members.push_back(*id);
    }
    out.push_back(std::move(members));
  }
  return out;
}

std::vector<CorenessEntry> coreness(const semgraph::CooccurrenceGraph& graph,
                                    const TopicPartition& partition, TopicId topic) {
  if (topic >= partition.num_topics) throw std::runtime_error("unknown topic id");
  const auto& members = partition.members[topic];
  const size_t n = members.size();
  std::unordered_map<TagId, uint32_t> index;
  for (uint32_t i = 0; i < n; ++i) index.emplace(members[i], i);

  std::vector<std::vector<uint32_t>> adj(n);
  for (const auto& e : graph.edges) {
    auto ia = index.find(e.a), ib = index.find(e.b);
    if (ia == index.end() || ib == index.end()) continue;
    adj[ia->second].push_back(ib->second);
    adj[ib->second].push_back(ia->second);
  }

  // bucket peeling
  std::vector<uint32_t> deg(n), core(n);
  uint32_t max_deg = 0;
  for (size_t i = 0; i < n; ++i) {
    deg[i] = static_cast<uint32_t>(adj[i].size());
    max_deg = std::max(max_deg, deg[i]);
  }
  std::vector<uint32_t> bin(max_deg + 2, 0), pos(n), vert(n);
  for (size_t i = 0; i < n; ++i) ++bin[deg[i]];
  uint32_t start = 0;
  for (uint32_t d = 0; d <= max_deg; ++d) {
    uint32_t c = bin[d];
    bin[d] = start;
    start += c;
  }
  for (uint32_t i = 0; i < n; ++i) {
    pos[i] = bin[deg[i]]++;
    vert[pos[i]] = i;
  }
  for (uint32_t d = max_deg + 1; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  std::vector<uint32_t> cur(deg);
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t v = vert[i];
    core[v] = cur[v];
    for (uint32_t u : adj[v]) {
      if (cur[u] > cur[v]) {
        uint32_t du = cur[u], pu = pos[u];
        uint32_t pw = bin[du], w = vert[pw];
        if (u != w) {
          std::swap(vert[pu], vert[pw]);
          pos[u] = pw;
          pos[w] = pu;
        }
        ++bin[du];
        --cur[u];
      }
    }
  }

  std::vector<CorenessEntry> out(n);
  for (uint32_t i = 0; i < n; ++i) out[i] = {members[i], deg[i], core[i]};
  return out;
}

double nmi(const std::vector<TopicId>& a, const std::vector<TopicId>& b) {
  if (a.size() != b.size()) throw std::runtime_error("nmi: label vectors differ in length");
  std::unordered_map<uint64_t, double> joint;
  std::unordered_map<uint32_t, double> ma, mb;
  double n = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == kInvalidId || b[i] == kInvalidId) continue;
    ++joint[(static_cast<uint64_t>(a[i]) << 32) | b[i]];
    ++ma[a[i]];
    ++mb[b[i]];
    ++n;
  }
  if (n == 0) return 0.0;
  double ha = 0, hb = 0, mi = 0;
  for (auto& [k, c] : ma) ha -= (c / n) * std::log(c / n);
  for (auto& [k, c] : mb) hb -= (c / n) * std::log(c / n);
  for (auto& [k, c] : joint) {
    double pa = ma[static_cast<uint32_t>(k >> 32)] / n;
    double pb = mb[static_cast<uint32_t>(k & 0xFFFFFFFFu)] / n;
    double pj = c / n;
    mi += pj * std::log(pj / (pa * pb));
  }
  if (ha + hb == 0.0) return 1.0;  // both single-cluster
  return 2.0 * mi / (ha + hb);
}

double modularity(const semgraph::CooccurrenceGraph& graph, const std::vector<TopicId>& topic_of) {
  double m = 0.0;
  std::unordered_map<uint64_t, double> internal;  // includes singleton pseudo-communities
  std::unordered_map<uint64_t, double> degree;
  auto label = [&](TagId t) -> uint64_t {
    TopicId c = t < topic_of.size() ? topic_of[t] : kInvalidId;
    // unassigned nodes act as singleton communities
    return c == kInvalidId ? (0x100000000ull | t) : c;
  };
  for (const auto& e : graph.edges) {
    m += e.weight;
    degree[label(e.a)] += e.weight;
    degree[label(e.b)] += e.weight;
    if (label(e.a) == label(e.b)) internal[label(e.a)] += e.weight;
  }
  if (m == 0.0) return 0.0;
  double q = 0.0;
  for (auto& [c, d] : degree) {
    double in = internal.count(c) ? internal[c] : 0.0;
    q += in / m - (d / (2.0 * m)) * (d / (2.0 * m));
  }
  return q;
}

}  // namespace opland::topics
