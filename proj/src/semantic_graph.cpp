#include "opland/semantic_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace opland::semgraph {

std::vector<std::vector<std::pair<TagId, uint32_t>>> CooccurrenceGraph::adjacency() const {
  std::vector<std::vector<std::pair<TagId, uint32_t>>> adj(num_tags);
  for (const auto& e : edges) {
    adj[e.a].emplace_back(e.b, e.weight);
    adj[e.b].emplace_back(e.a, e.weight);
  }
  return adj;
}

CooccurrenceGraph build_graph(std::span<const ingest::TweetRecord> records,
                              uint32_t num_tags, uint32_t min_weight) {
  CooccurrenceGraph g;
  g.num_tags = num_tags;

  // (pair, user) and (tag, user) incidences; sort + unique gives the
  // distinct-user counts, so a user repeating a pair contributes once.
  std::vector<std::pair<uint64_t, UserId>> pair_users;
  std::vector<std::pair<TagId, UserId>> tag_users;
  for (const auto& r : records) {
    for (size_t i = 0; i < r.hashtags.size(); ++i) {
      tag_users.emplace_back(r.hashtags[i], r.user);
      for (size_t j = i + 1; j < r.hashtags.size(); ++j) {
        TagId a = r.hashtags[i], b = r.hashtags[j];
        if (a == b) continue;  // hashtags are deduplicated per record, but be safe
        if (a > b) std::swap(a, b);
        pair_users.emplace_back((static_cast<uint64_t>(a) << 32) | b, r.user);
      }
    }
  }

  std::sort(pair_users.begin(), pair_users.end());
  pair_users.erase(std::unique(pair_users.begin(), pair_users.end()), pair_users.end());
  std::sort(tag_users.begin(), tag_users.end());
  tag_users.erase(std::unique(tag_users.begin(), tag_users.end()), tag_users.end());

  g.tag_users.assign(num_tags, 0);
  for (const auto& [tag, user] : tag_users) ++g.tag_users[tag];

  for (size_t i = 0; i < pair_users.size();) {
    uint64_t key = pair_users[i].first;
    size_t j = i;
    while (j < pair_users.size() && pair_users[j].first == key) ++j;
    uint32_t w = static_cast<uint32_t>(j - i);
    if (w >= min_weight)
      g.edges.push_back({static_cast<TagId>(key >> 32), static_cast<TagId>(key & 0xFFFFFFFFu), w});
    i = j;
  }

  std::vector<char> present(num_tags, 0);
  for (const auto& e : g.edges) present[e.a] = present[e.b] = 1;
  for (TagId t = 0; t < num_tags; ++t)
    if (present[t]) g.nodes.push_back(t);
  return g;
}

std::vector<PoliticalScore> political_scores(std::span<const ingest::TweetRecord> records,
                                             const affiliation::AffiliationResult& affiliations,
                                             double kl_threshold) {
  const size_t np = affiliations.num_parties;
  auto sizes = affiliations.party_sizes();
  uint64_t total_affiliated = 0;
  for (size_t s : sizes) total_affiliated += s;
  size_t parties_with_users = 0;
  for (size_t s : sizes)
    if (s > 0) ++parties_with_users;
  if (parties_with_users < 2)
    throw std::runtime_error("political scores need at least 2 parties with affiliated users");

  std::vector<double> q(np);
  for (size_t p = 0; p < np; ++p) q[p] = static_cast<double>(sizes[p]) / static_cast<double>(total_affiliated);

  // distinct (tag, user) over affiliated users
  std::vector<std::pair<TagId, UserId>> tag_users;
  for (const auto& r : records) {
    if (affiliations.party(r.user) == affiliation::kNoParty) continue;
    for (TagId t : r.hashtags) tag_users.emplace_back(t, r.user);
  }
  std::sort(tag_users.begin(), tag_users.end());
  tag_users.erase(std::unique(tag_users.begin(), tag_users.end()), tag_users.end());

  std::vector<PoliticalScore> out;
  for (size_t i = 0; i < tag_users.size();) {
    TagId tag = tag_users[i].first;
    PoliticalScore score;
    score.tag = tag;
    std::vector<uint32_t> counts(np, 0);
    size_t j = i;
    for (; j < tag_users.size() && tag_users[j].first == tag; ++j)
      ++counts[affiliations.party(tag_users[j].second)];
    i = j;

    uint32_t n = 0;
    for (uint32_t c : counts) n += c;
    score.affiliated_users = n;
    score.shares.resize(np);
    double dkl = 0.0;
    for (size_t p = 0; p < np; ++p) {
      double ph = static_cast<double>(counts[p]) / static_cast<double>(n);
      score.shares[p] = ph;
      if (ph > 0.0) dkl += ph * std::log2(ph / q[p]);
    }
    score.dkl = std::max(dkl, 0.0);  // clamp -0 and tiny negative rounding
    score.is_political = score.dkl >= kl_threshold;
    out.push_back(std::move(score));
  }
  return out;
}

void save_graph(const std::string& edges_path, const std::string& nodes_path,
                const CooccurrenceGraph& graph, const Interner& tags) {
  {
    std::ofstream f(edges_path);
    if (!f) throw std::runtime_error("cannot write: " + edges_path);
    for (const auto& e : graph.edges)
      f << tags.name(e.a) << '\t' << tags.name(e.b) << '\t' << e.weight << '\n';
  }
  {
    std::ofstream f(nodes_path);
    if (!f) throw std::runtime_error("cannot write: " + nodes_path);
    for (TagId t : graph.nodes) f << tags.name(t) << '\t' << graph.tag_users[t] << '\n';
  }
}

void save_interchange(const std::string& path, const CooccurrenceGraph& graph) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write: " + path);
  for (const auto& e : graph.edges) f << e.a << ' ' << e.b << ' ' << e.weight << '\n';
}

CooccurrenceGraph load_graph(const std::string& edges_path, const std::string& nodes_path,
                             Interner& tags) {
  CooccurrenceGraph g;
  {
    std::ifstream f(nodes_path);
    if (!f) throw std::runtime_error("cannot open: " + nodes_path);
    std::string line;
    std::vector<std::pair<TagId, uint32_t>> usage;
    while (std::getline(f, line)) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      TagId t = tags.intern(line.substr(0, tab));
      usage.emplace_back(t, static_cast<uint32_t>(std::stoul(line.substr(tab + 1))));
      g.nodes.push_back(t);
    }
    g.num_tags = tags.size();
    g.tag_users.assign(g.num_tags, 0);
    for (auto& [t, u] : usage) g.tag_users[t] = u;
  }
  {
    std::ifstream f(edges_path);
    if (!f) throw std::runtime_error("cannot open: " + edges_path);
    std::string line;
    while (std::getline(f, line)) {
      std::istringstream ss(line);
      std::string a, b, w;
      if (!std::getline(ss, a, '\t') || !std::getline(ss, b, '\t') || !std::getline(ss, w, '\t'))
        throw std::runtime_error("bad edge line: " + line);
      Edge e;
      e.a = tags.intern(a);
      e.b = tags.intern(b);
      e.weight = static_cast<uint32_t>(std::stoul(w));
      if (e.a > e.b) std::swap(e.a, e.b);
      g.edges.push_back(e);
    }
    g.num_tags = tags.size();
    g.tag_users.resize(g.num_tags, 0);
    std::sort(g.edges.begin(), g.edges.end(),
              [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  return g;
}

void save_political(const std::string& path, const std::vector<PoliticalScore>& scores,
                    const Interner& tags, const affiliation::PartyRoster& roster) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write: " + path);
  f << "# tag\tdkl_bits\tusers";
  for (const auto& p : roster.parties) f << '\t' << p.acronym;
  f << "\tis_political\n";
  for (const auto& s : scores) {
    f << tags.name(s.tag) << '\t' << s.dkl << '\t' << s.affiliated_users;
    for (double sh : s.shares) f << '\t' << sh;
    f << '\t' << (s.is_political ? 1 : 0) << '\n';
  }
}

}  // namespace opland::semgraph
