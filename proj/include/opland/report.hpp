#pragma once

#include <span>
#include <string>
#include <vector>

#include "opland/affiliation.hpp"
#include "opland/core.hpp"
#include "opland/ingest.hpp"
#include "opland/similarity.hpp"
#include "opland/topics.hpp"

namespace opland::report {

struct TopicUsageSeries {
  TopicId topic = 0;
  uint32_t party = 0;
  int64_t start_day = 0;            // daily[k] covers day start_day + k
  std::vector<int64_t> daily;       // topic-hashtag usages by the party's supporters
  std::vector<double> rolling;      // trailing window average (window clipped at the start)
  std::vector<int64_t> cumulative;  // prefix sums of daily
};

// One series per party, in roster order.
std::vector<TopicUsageSeries> topic_usage(std::span<const ingest::TweetRecord> records,
                                          const topics::TopicPartition& partition,
                                          const affiliation::AffiliationResult& affiliations,
                                          const ingest::CaptureConfig& config, TopicId topic,
                                          int rolling_days = 7);

enum class UsageMode { Daily, Rolling, Cumulative };

// date,party,daily,value rows; one block per party, gap-free over the capture.
void save_usage_csv(const std::string& path, const std::vector<TopicUsageSeries>& series,
                    const affiliation::PartyRoster& roster, UsageMode mode);

// Minimal deterministic line chart (one polyline per party).
void save_usage_svg(const std::string& path, const std::vector<TopicUsageSeries>& series,
                    const affiliation::PartyRoster& roster, UsageMode mode);

// Wide export: one column per series (self:X, cross:X-Y), empty cell on gaps.
void save_similarity_wide_csv(const std::string& path,
                              const std::vector<similarity::SimilaritySeries>& series,
                              const affiliation::PartyRoster& roster);

void save_similarity_svg(const std::string& path,
                         const std::vector<similarity::SimilaritySeries>& series,
                         const affiliation::PartyRoster& roster);

// Layout-ready export: tag,topic,coreness,degree.
void save_coreness_csv(const std::string& path, const std::vector<topics::CorenessEntry>& entries,
                       TopicId topic, const Interner& tags);

}  // namespace opland::report
