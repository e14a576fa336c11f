#pragma once

#include <span>
#include <string>
#include <vector>

#include "opland/affiliation.hpp"
#include "opland/dynamics.hpp"

namespace opland::similarity {

// Cosine similarity of two unit description vectors (inner product).
double pair_similarity(std::span<const double> a, std::span<const double> b);

struct GroupVector {
  std::vector<double> mean;  // average of the members' unit vectors
  size_t size = 0;
};

GroupVector group_vector(const dynamics::WindowVectors& vectors,
                         const affiliation::AffiliationResult& affiliations, uint32_t party);

// ||D_G||^2: average pairwise similarity over all ordered member pairs,
// including i = j.
double self_similarity(const GroupVector& g);
// <D_G1, D_G2>: average pairwise similarity across the two groups.
double cross_similarity(const GroupVector& a, const GroupVector& b);

struct SeriesPoint {
  int64_t day = 0;
  double value = 0.0;
  size_t n_a = 0;
  size_t n_b = 0;
};

struct SimilaritySeries {
  std::string kind;  // "self" or "cross"
  uint32_t group_a = 0;
  uint32_t group_b = 0;  // == group_a for self
  std::vector<SeriesPoint> points;  // strictly increasing days, gaps omitted
};

struct SeriesRequest {
  uint32_t group_a = 0;
  uint32_t group_b = 0;  // == group_a requests a self series
};

// One series per request; windows where a group has no valid vectors are
// omitted (gaps, never interpolated).
std::vector<SimilaritySeries> similarity_series(
    const std::vector<dynamics::WindowVectors>& windows,
    const affiliation::AffiliationResult& affiliations,
    const std::vector<SeriesRequest>& requests);

void save_series(const std::string& path, const std::vector<SimilaritySeries>& series,
                 const affiliation::PartyRoster& roster);

}  // namespace opland::similarity
