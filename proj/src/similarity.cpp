#include "opland/similarity.hpp"

#include <fstream>
#include <stdexcept>

namespace opland::similarity {

double pair_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::runtime_error("description vector dimensions differ");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

GroupVector group_vector(const dynamics::WindowVectors& vectors,
                         const affiliation::AffiliationResult& affiliations, uint32_t party) {
  GroupVector g;
  g.mean.assign(vectors.num_topics, 0.0);
  for (size_t i = 0; i < vectors.users.size(); ++i) {
    if (affiliations.party(vectors.users[i]) != party) continue;
    auto v = vectors.vec(i);
    for (uint32_t k = 0; k < vectors.num_topics; ++k) g.mean[k] += v[k];
    ++g.size;
  }
  if (g.size > 0)
    for (auto& x : g.mean) x /= static_cast<double>(g.size);
  return g;
}

double self_similarity(const GroupVector& g) {
  if (g.size == 0) throw std::runtime_error("self similarity of an empty group is undefined");
  double s = 0.0;
  for (double x : g.mean) s += x * x;
  return s;
}

double cross_similarity(const GroupVector& a, const GroupVector& b) {
  if (a.size == 0 || b.size == 0)
    throw std::runtime_error("cross similarity with an empty group is undefined");
  if (a.mean.size() != b.mean.size()) throw std::runtime_error("group dimensions differ");
  double s = 0.0;
  for (size_t i = 0; i < a.mean.size(); ++i) s += a.mean[i] * b.mean[i];
  return s;
}

std::vector<SimilaritySeries> similarity_series(
    const std::vector<dynamics::WindowVectors>& windows,
    const affiliation::AffiliationResult& affiliations,
    const std::vector<SeriesRequest>& requests) {
  for (const auto& r : requests) {
    if (r.group_a >= affiliations.num_parties || r.group_b >= affiliations.num_parties)
      throw std::runtime_error("similarity series request names an unknown party");
  }

  std::vector<SimilaritySeries> out;
  for (const auto& r : requests) {
    SimilaritySeries s;
    s.kind = (r.group_a == r.group_b) ? "self" : "cross";
    s.group_a = r.group_a;
    s.group_b = r.group_b;
    out.push_back(std::move(s));
  }

  // group vectors are computed once per (window, party) and shared
  std::vector<uint32_t> needed;
  for (const auto& r : requests) {
    needed.push_back(r.group_a);
    needed.push_back(r.group_b);
  }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

  for (const auto& w : windows) {
    std::vector<GroupVector> groups(affiliations.num_parties);
    for (uint32_t p : needed) groups[p] = group_vector(w, affiliations, p);
    for (size_t i = 0; i < requests.size(); ++i) {
      const auto& ga = groups[requests[i].group_a];
      const auto& gb = groups[requests[i].group_b];
      if (ga.size == 0 || gb.size == 0) continue;  // gap
      double v = (requests[i].group_a == requests[i].group_b) ? self_similarity(ga)
                                                              : cross_similarity(ga, gb);
      out[i].points.push_back({w.window_end_day, v, ga.size, gb.size});
    }
  }
  return out;
}

void save_series(const std::string& path, const std::vector<SimilaritySeries>& series,
                 const affiliation::PartyRoster& roster) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write: " + path);
  f << "date,kind,group_a,group_b,value,n_a,n_b\n";
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      f << format_date(p.day) << ',' << s.kind << ',' << roster.parties[s.group_a].acronym << ','
        << roster.parties[s.group_b].acronym << ',' << p.value << ',' << p.n_a << ',' << p.n_b
        << '\n';
    }
  }
}

}  // namespace opland::similarity
