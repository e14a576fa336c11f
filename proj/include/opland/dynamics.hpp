#pragma once

#include <span>
#include <vector>

#include "opland/affiliation.hpp"
#include "opland/core.hpp"
#include "opland/ingest.hpp"
#include "opland/topics.hpp"

namespace opland::dynamics {

struct Triplet {
  UserId user;
  TopicId topic;
  uint32_t count;
  auto operator<=>(const Triplet&) const = default;
};

// Per-window sparse user-topic counts; rows cover affiliated users only,
// entries sorted by (user, topic).
struct UserTopicMatrix {
  int64_t window_end_day = 0;
  std::vector<Triplet> entries;
  bool degenerate() const { return entries.empty(); }
};

enum class GlobalWeighting {
  // reference distribution = mean of the row-normalized usage vectors, one
  // vote per active user; robust to high-activity accounts
  UniformUsers,
  // reference distribution = normalized column sums (raw usage counts)
  RawCounts,
};

// One matrix per day t in [start_day, end_day], window [t-(window_days-1), t]
// clipped to the capture. Incremental day-shift update; bit-identical to
// build_window_matrix on every day.
std::vector<UserTopicMatrix> window_matrices(std::span<const ingest::TweetRecord> records,
                                             const topics::TopicPartition& partition,
                                             const affiliation::AffiliationResult& affiliations,
                                             const ingest::CaptureConfig& config);

// From-scratch construction of a single window, used as the reference path.
UserTopicMatrix build_window_matrix(std::span<const ingest::TweetRecord> records,
                                    const topics::TopicPartition& partition,
                                    const affiliation::AffiliationResult& affiliations,
                                    const ingest::CaptureConfig& config, int64_t end_day);

struct WindowVectors {
  int64_t window_end_day = 0;
  uint32_t num_topics = 0;
  std::vector<int64_t> topic_totals;   // exact column sums of the matrix
  std::vector<UserId> users;           // users with a valid description vector
  std::vector<double> vectors;         // row-major |users| x num_topics, unit rows
  std::span<const double> vec(size_t i) const { return {vectors.data() + i * num_topics, num_topics}; }
};

// Reference topic distribution of a matrix under the given weighting.
// Empty vector for a degenerate matrix.
std::vector<double> reference_distribution(const UserTopicMatrix& matrix, uint32_t num_topics,
                                           GlobalWeighting weighting);

// Description vectors: each user's topic frequency vector minus the global
// reference, normalized to unit length. Users with no usage in the window or
// a zero deviation vector are dropped. When `reference` is given it replaces
// the per-window reference (e.g. a capture-wide distribution).
WindowVectors description_vectors(const UserTopicMatrix& matrix, uint32_t num_topics,
                                  GlobalWeighting weighting = GlobalWeighting::UniformUsers,
                                  const std::vector<double>* reference = nullptr);

}  // namespace opland::dynamics
