#pragma once

#include <string>
#include <vector>

#include "opland/dynamics.hpp"

namespace opland::pipeline {

struct RunConfig {
  std::string input;    // line-delimited record file
  std::string roster;   // party roster TSV
  std::string follows;  // user->candidate edges TSV
  std::string out;      // artifact directory

  std::string capture_start;
  std::string capture_end;
  int probe_days = 30;
  int window_days = 7;
  int utc_offset_minutes = -180;

  std::string cutoff;  // affiliation evidence cutoff date; empty = capture end
  double affiliation_threshold = 0.75;
  uint32_t min_weight = 5;
  double kl_threshold = 0.5;

  std::string detector = "default";  // "default" or "external"
  std::string communities;           // community file, required for "external"
  uint64_t seed = 1;

  dynamics::GlobalWeighting weighting = dynamics::GlobalWeighting::UniformUsers;
  bool capture_reference = false;  // capture-wide reference instead of per-window

  // similarity requests as acronym pairs, e.g. "A:A" (self) or "A:B" (cross);
  // empty = all self series + all unordered cross pairs
  std::vector<std::string> similarity_pairs;

  void validate() const;
  // serialization of the fields a stage depends on, used for stage stamps
  std::string stage_key(const std::string& stage) const;
};

RunConfig load_run_config(const std::string& path);

struct StageStatus {
  std::string name;
  bool skipped = false;  // artifacts were up to date
};

// Runs ingest -> affiliate -> graph -> topics -> dynamics -> similarity ->
// report. Each stage writes artifacts under out/<stage>/ with a content stamp;
// a stage whose inputs and config are unchanged is skipped. Errors are
// reported as "<stage>: <message>".
std::vector<StageStatus> run_pipeline(const RunConfig& config);

}  // namespace opland::pipeline
