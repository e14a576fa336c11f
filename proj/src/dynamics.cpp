#include "opland/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace opland::dynamics {

namespace {

// per-day aggregated (user, topic) counts for affiliated users
std::vector<std::vector<Triplet>> daily_counts(std::span<const ingest::TweetRecord> records,
                                               const topics::TopicPartition& partition,
                                               const affiliation::AffiliationResult& affiliations,
                                               const ingest::CaptureConfig& config) {
  const size_t n_days = static_cast<size_t>(config.end_day - config.start_day + 1);
  std::vector<std::vector<Triplet>> days(n_days);
  for (const auto& r : records) {
    if (affiliations.party(r.user) == affiliation::kNoParty) continue;
    int64_t day = config.day_of(r.timestamp);
    if (day < config.start_day || day > config.end_day) continue;
    auto& bucket = days[static_cast<size_t>(day - config.start_day)];
    for (TagId tag : r.hashtags) {
      TopicId topic = partition.topic(tag);
      if (topic == kInvalidId) continue;
      bucket.push_back({r.user, topic, 1});
    }
  }
  for (auto& bucket : days) {
    std::sort(bucket.begin(), bucket.end(),
              [](const Triplet& a, const Triplet& b) {
                return std::tie(a.user, a.topic) < std::tie(b.user, b.topic);
              });
    // merge duplicates
    size_t out = 0;
    for (size_t i = 0; i < bucket.size();) {
      Triplet t = bucket[i];
      size_t j = i + 1;
      while (j < bucket.size() && bucket[j].user == t.user && bucket[j].topic == t.topic) {
        t.count += bucket[j].count;
        ++j;
      }
      bucket[out++] = t;
      i = j;
    }
    bucket.resize(out);
  }
  return days;
}

UserTopicMatrix snapshot(int64_t day, const std::map<std::pair<UserId, TopicId>, uint32_t>& acc) {
  UserTopicMatrix m;
  m.window_end_day = day;
  m.entries.reserve(acc.size());
  for (const auto& [key, count] : acc)
    if (count > 0) m.entries.push_back({key.first, key.second, count});
  return m;
}

}  // namespace

std::vector<UserTopicMatrix> window_matrices(std::span<const ingest::TweetRecord> records,
                                             const topics::TopicPartition& partition,
                                             const affiliation::AffiliationResult& affiliations,
                                             const ingest::CaptureConfig& config) {
  auto days = daily_counts(records, partition, affiliations, config);
  const int64_t w = config.window_days;

  std::vector<UserTopicMatrix> out;
  std::map<std::pair<UserId, TopicId>, uint32_t> acc;
  for (int64_t t = config.start_day; t <= config.end_day; ++t) {
    // add day t, drop day t-w
    for (const auto& e : days[static_cast<size_t>(t - config.start_day)])
      acc[{e.user, e.topic}] += e.count;
    int64_t gone = t - w;
    if (gone >= config.start_day) {
      for (const auto& e : days[static_cast<size_t>(gone - config.start_day)]) {
        auto it = acc.find({e.user, e.topic});
        it->second -= e.count;
        if (it->second == 0) acc.erase(it);
      }
    }
    out.push_back(snapshot(t, acc));
  }
  return out;
}

UserTopicMatrix build_window_matrix(std::span<const ingest::TweetRecord> records,
                                    const topics::TopicPartition& partition,
                                    const affiliation::AffiliationResult& affiliations,
                                    const ingest::CaptureConfig& config, int64_t end_day) {
  std::map<std::pair<UserId, TopicId>, uint32_t> acc;
  const int64_t first = std::max(config.start_day, end_day - config.window_days + 1);
  for (const auto& r : records) {
    if (affiliations.party(r.user) == affiliation::kNoParty) continue;
    int64_t day = config.day_of(r.timestamp);
    if (day < first || day > end_day) continue;
    for (TagId tag : r.hashtags) {
      TopicId topic = partition.topic(tag);
      if (topic == kInvalidId) continue;
      ++acc[{r.user, topic}];
    }
  }
  return snapshot(end_day, acc);
}

namespace {

// row spans over entries sorted by (user, topic)
std::vector<std::pair<size_t, size_t>> row_spans(const UserTopicMatrix& matrix) {
  std::vector<std::pair<size_t, size_t>> rows;
  for (size_t i = 0; i < matrix.entries.size();) {
    size_t j = i;
    while (j < matrix.entries.size() && matrix.entries[j].user == matrix.entries[i].user) ++j;
    rows.emplace_back(i, j);
    i = j;
  }
  return rows;
}

}  // namespace

std::vector<double> reference_distribution(const UserTopicMatrix& matrix, uint32_t num_topics,
                                           GlobalWeighting weighting) {
  if (matrix.degenerate()) return {};
  std::vector<double> reference(num_topics, 0.0);
  if (weighting == GlobalWeighting::RawCounts) {
    int64_t total = 0;
    for (const auto& e : matrix.entries) total += e.count;
    for (const auto& e : matrix.entries)
      reference[e.topic] += static_cast<double>(e.count) / static_cast<double>(total);
  } else {
    auto rows = row_spans(matrix);
    for (const auto& [lo, hi] : rows) {
      uint64_t row_sum = 0;
      for (size_t i = lo; i < hi; ++i) row_sum += matrix.entries[i].count;
      for (size_t i = lo; i < hi; ++i)
        reference[matrix.entries[i].topic] +=
            static_cast<double>(matrix.entries[i].count) / static_cast<double>(row_sum);
    }
    for (auto& v : reference) v /= static_cast<double>(rows.size());
  }
  return reference;
}

WindowVectors description_vectors(const UserTopicMatrix& matrix, uint32_t num_topics,
                                  GlobalWeighting weighting,
                                  const std::vector<double>* reference_in) {
  WindowVectors out;
  out.window_end_day = matrix.window_end_day;
  out.num_topics = num_topics;
  out.topic_totals.assign(num_topics, 0);
  if (matrix.degenerate()) return out;

  for (const auto& e : matrix.entries) out.topic_totals[e.topic] += e.count;

  auto rows = row_spans(matrix);

  std::vector<double> reference;
  if (reference_in) {
    if (reference_in->size() != num_topics)
      throw std::runtime_error("reference distribution has the wrong dimension");
    reference = *reference_in;
  } else {
    reference = reference_distribution(matrix, num_topics, weighting);
  }

  std::vector<double> v(num_topics);
  for (const auto& [lo, hi] : rows) {
    uint64_t row_sum = 0;
    for (size_t i = lo; i < hi; ++i) row_sum += matrix.entries[i].count;
    for (uint32_t k = 0; k < num_topics; ++k) v[k] = -reference[k];
    for (size_t i = lo; i < hi; ++i)
      v[matrix.entries[i].topic] +=
          static_cast<double>(matrix.entries[i].count) / static_cast<double>(row_sum);
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    double norm = std::sqrt(norm2);
    if (norm < 1e-12) continue;  // user indistinguishable from the reference
    out.users.push_back(matrix.entries[lo].user);
    for (double x : v) out.vectors.push_back(x / norm);
  }
  return out;
}

}  // namespace opland::dynamics
