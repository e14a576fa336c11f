#include "opland/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "opland/affiliation.hpp"
#include "opland/ingest.hpp"
#include "opland/report.hpp"
#include "opland/semantic_graph.hpp"
#include "opland/similarity.hpp"
#include "opland/topics.hpp"

namespace opland::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormatVersion = "1";

uint64_t file_hash(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (f.read(buf, sizeof(buf)) || f.gcount() > 0)
    h = fnv1a(std::string_view(buf, static_cast<size_t>(f.gcount())), h);
  return h;
}

std::string hex(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::optional<std::string> read_stamp(const std::string& dir) {
  std::ifstream f(dir + "/.stamp");
  if (!f) return std::nullopt;
  std::string s;
  std::getline(f, s);
  return s;
}

void write_stamp(const std::string& dir, const std::string& stamp) {
  std::ofstream f(dir + "/.stamp");
  f << stamp << '\n';
}

}  // namespace

void RunConfig::validate() const {
  if (input.empty()) throw std::runtime_error("config: missing input path");
  if (roster.empty()) throw std::runtime_error("config: missing roster path");
  if (follows.empty()) throw std::runtime_error("config: missing follows path");
  if (out.empty()) throw std::runtime_error("config: missing output directory");
  int64_t start = parse_date(capture_start);
  int64_t end = parse_date(capture_end);
  if (end < start) throw std::runtime_error("config: capture_end precedes capture_start");
  if (!cutoff.empty()) parse_date(cutoff);
  if (window_days < 1) throw std::runtime_error("config: window_days must be >= 1");
  if (probe_days < 0) throw std::runtime_error("config: probe_days must be >= 0");
  if (affiliation_threshold <= 0.5 || affiliation_threshold > 1.0)
    throw std::runtime_error("config: affiliation threshold must be in (0.5, 1]");
  if (kl_threshold < 0.0) throw std::runtime_error("config: kl_threshold must be >= 0");
  if (min_weight < 1) throw std::runtime_error("config: min_weight must be >= 1");
  if (detector != "default" && detector != "external")
    throw std::runtime_error("config: detector must be 'default' or 'external'");
  if (detector == "external" && communities.empty())
    throw std::runtime_error("config: external detector needs a communities file");
}

std::string RunConfig::stage_key(const std::string& stage) const {
  std::ostringstream k;
  k << kFormatVersion << '|' << stage << '|';
  if (stage == "ingest") {
    k << capture_start << '|' << capture_end << '|' << probe_days << '|' << utc_offset_minutes;
  } else if (stage == "affiliate") {
    k << (cutoff.empty() ? capture_end : cutoff) << '|' << affiliation_threshold;
  } else if (stage == "graph") {
    k << min_weight << '|' << kl_threshold;
  } else if (stage == "topics") {
    k << detector << '|' << seed;
  } else if (stage == "dynamics") {
    k << window_days << '|' << (weighting == dynamics::GlobalWeighting::RawCounts ? "counts" : "uniform")
      << '|' << (capture_reference ? "capture" : "window");
  } else if (stage == "similarity") {
    for (const auto& p : similarity_pairs) k << p << ';';
  } else if (stage == "report") {
    k << window_days;
  }
  return k.str();
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open run config: " + path);
  json j = json::parse(f);

  RunConfig c;
  c.input = j.at("input").get<std::string>();
  c.roster = j.at("roster").get<std::string>();
  c.follows = j.at("follows").get<std::string>();
  c.out = j.at("out").get<std::string>();
  c.capture_start = j.at("capture_start").get<std::string>();
  c.capture_end = j.at("capture_end").get<std::string>();
  c.probe_days = j.value("probe_days", 30);
  c.window_days = j.value("window_days", 7);
  c.utc_offset_minutes = j.value("utc_offset_minutes", -180);
  c.cutoff = j.value("cutoff", std::string{});
  c.affiliation_threshold = j.value("affiliation_threshold", 0.75);
  c.min_weight = j.value("min_weight", uint32_t{5});
  c.kl_threshold = j.value("kl_threshold", 0.5);
  c.detector = j.value("detector", std::string{"default"});
  c.communities = j.value("communities", std::string{});
  c.seed = j.value("seed", uint64_t{1});
  std::string w = j.value("global_weighting", std::string{"uniform"});
  if (w == "uniform") c.weighting = dynamics::GlobalWeighting::UniformUsers;
  else if (w == "counts") c.weighting = dynamics::GlobalWeighting::RawCounts;
  else throw std::runtime_error("config: global_weighting must be 'uniform' or 'counts'");
  std::string r = j.value("global_reference", std::string{"window"});
  if (r == "capture") c.capture_reference = true;
  else if (r != "window")
    throw std::runtime_error("config: global_reference must be 'window' or 'capture'");
  if (j.contains("similarity_pairs"))
    c.similarity_pairs = j.at("similarity_pairs").get<std::vector<std::string>>();
  c.validate();
  return c;
}

namespace {

// lazily materialized cross-stage state; skipped stages reload from artifacts
struct PipelineState {
  const RunConfig& cfg;
  ingest::CaptureConfig cc;
  int64_t cutoff_ts = 0;

  std::optional<ingest::ParseResult> store;
  std::optional<affiliation::PartyRoster> roster;
  std::optional<affiliation::AffiliationResult> aff;
  std::optional<semgraph::CooccurrenceGraph> graph;
  std::optional<topics::TopicPartition> partition;
  std::optional<std::vector<dynamics::WindowVectors>> windows;
  std::optional<std::vector<similarity::SimilaritySeries>> series;

  explicit PipelineState(const RunConfig& c) : cfg(c) {
    cc.start_day = parse_date(c.capture_start);
    cc.end_day = parse_date(c.capture_end);
    cc.window_days = c.window_days;
    cc.probe_days = c.probe_days;
    cc.utc_offset_minutes = c.utc_offset_minutes;
    cutoff_ts = c.cutoff.empty()
                    ? cc.ts_end()
                    : parse_date(c.cutoff) * 86400 - static_cast<int64_t>(c.utc_offset_minutes) * 60;
  }

  std::string dir(const std::string& stage) const { return cfg.out + "/" + stage; }

  ingest::ParseResult& get_store() {
    if (!store) store = ingest::load_store(dir("ingest"));
    return *store;
  }
  affiliation::PartyRoster& get_roster() {
    if (!roster) roster = affiliation::load_roster(cfg.roster);
    return *roster;
  }
  affiliation::AffiliationResult& get_aff() {
    if (!aff)
      aff = affiliation::load_affiliations(dir("affiliate") + "/affiliations.tsv",
                                           get_store().users, get_roster());
    return *aff;
  }
  semgraph::CooccurrenceGraph& get_graph() {
    if (!graph)
      graph = semgraph::load_graph(dir("graph") + "/edges.tsv", dir("graph") + "/nodes.tsv",
                                   get_store().tags);
    return *graph;
  }
  topics::TopicPartition& get_partition() {
    if (!partition) {
      auto comm = topics::load_communities(dir("topics") + "/communities.txt", get_store().tags);
      partition = topics::partition_from_communities(get_graph(), comm, "artifact");
    }
    return *partition;
  }
  std::vector<dynamics::WindowVectors>& get_windows();
  std::vector<similarity::SimilaritySeries>& get_series();
};

std::vector<dynamics::WindowVectors>& PipelineState::get_windows() {
  if (windows) return *windows;
  std::ifstream f(dir("dynamics") + "/vectors.tsv");
  if (!f) throw std::runtime_error("missing artifact: " + dir("dynamics") + "/vectors.tsv");
  const uint32_t nt = get_partition().num_topics;
  std::vector<dynamics::WindowVectors> w;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ls(line);
    std::string date;
    UserId user;
    TopicId topic;
    double value;
    if (!(ls >> date >> user >> topic >> value)) continue;
    int64_t day = parse_date(date);
    if (w.empty() || w.back().window_end_day != day) {
      w.emplace_back();
      w.back().window_end_day = day;
      w.back().num_topics = nt;
      w.back().topic_totals.assign(nt, 0);
    }
    auto& cur = w.back();
    if (cur.users.empty() || cur.users.back() != user) {
      cur.users.push_back(user);
      cur.vectors.resize(cur.users.size() * nt, 0.0);
    }
    cur.vectors[(cur.users.size() - 1) * nt + topic] = value;
  }
  windows = std::move(w);
  return *windows;
}

std::vector<similarity::SimilaritySeries>& PipelineState::get_series() {
  if (series) return *series;
  std::ifstream f(dir("similarity") + "/series.csv");
  if (!f) throw std::runtime_error("missing artifact: " + dir("similarity") + "/series.csv");
  auto& roster = get_roster();
  std::vector<similarity::SimilaritySeries> out;
  std::string line;
  std::getline(f, line);  // header
  while (std::getline(f, line)) {
    std::istringstream ls(line);
    std::string date, kind, ga, gb, val, na, nb;
    std::getline(ls, date, ',');
    std::getline(ls, kind, ',');
    std::getline(ls, ga, ',');
    std::getline(ls, gb, ',');
    std::getline(ls, val, ',');
    std::getline(ls, na, ',');
    std::getline(ls, nb, ',');
    uint32_t a = roster.find_party(ga), b = roster.find_party(gb);
    if (a == affiliation::kNoParty || b == affiliation::kNoParty)
      throw std::runtime_error("series artifact names an unknown party: " + line);
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) {
      return s.kind == kind && s.group_a == a && s.group_b == b;
    });
    if (it == out.end()) {
      out.push_back({kind, a, b, {}});
      it = out.end() - 1;
    }
    it->points.push_back({parse_date(date), std::stod(val),
                          static_cast<size_t>(std::stoull(na)),
                          static_cast<size_t>(std::stoull(nb))});
  }
  series = std::move(out);
  return *series;
}

using StageFn = void (*)(PipelineState&);

void run_ingest(PipelineState& s) {
  auto result = ingest::parse_stream(s.cfg.input, s.cc);
  if (s.cc.probe_days > 0) {
    // keep only users active during the probe interval
    auto active = ingest::active_users(result.records, s.cc);
    std::vector<bool> keep(result.users.size(), false);
    for (UserId u : active) keep[u] = true;
    std::erase_if(result.records, [&](const ingest::TweetRecord& r) { return !keep[r.user]; });
  }
  ingest::save_store(s.dir("ingest"), result, s.cc);
  s.store = std::move(result);
}

void run_affiliate(PipelineState& s) {
  auto follows = affiliation::load_follows(s.cfg.follows);
  auto& store = s.get_store();
  s.aff = affiliation::infer_affiliations(store.records, store.users, follows, s.get_roster(),
                                          s.cutoff_ts, s.cfg.affiliation_threshold);
  affiliation::save_affiliations(s.dir("affiliate") + "/affiliations.tsv", *s.aff, store.users,
                                 s.get_roster());
}

void run_graph(PipelineState& s) {
  auto& store = s.get_store();
  s.graph = semgraph::build_graph(store.records, store.tags.size(), s.cfg.min_weight);
  semgraph::save_graph(s.dir("graph") + "/edges.tsv", s.dir("graph") + "/nodes.tsv", *s.graph,
                       store.tags);
  semgraph::save_interchange(s.dir("graph") + "/interchange.txt", *s.graph);
  auto scores = semgraph::political_scores(store.records, s.get_aff(), s.cfg.kl_threshold);
  semgraph::save_political(s.dir("graph") + "/political.tsv", scores, store.tags, s.get_roster());
}

void run_topics(PipelineState& s) {
  if (s.cfg.detector == "external") {
    auto comm = topics::load_communities(s.cfg.communities, s.get_store().tags);
    s.partition = topics::partition_from_communities(s.get_graph(), comm, "external");
  } else {
    s.partition = topics::detect_topics(s.get_graph(), s.cfg.seed);
  }
  topics::save_communities(s.dir("topics") + "/communities.txt", *s.partition,
                           s.get_store().tags);
}

void run_dynamics(PipelineState& s) {
  auto& store = s.get_store();
  auto& partition = s.get_partition();
  auto matrices = dynamics::window_matrices(store.records, partition, s.get_aff(), s.cc);

  std::vector<double> capture_ref;
  if (s.cfg.capture_reference) {
    ingest::CaptureConfig whole = s.cc;
    whole.window_days = static_cast<int>(s.cc.end_day - s.cc.start_day + 1);
    auto capture_matrix = dynamics::build_window_matrix(store.records, partition, s.get_aff(),
                                                        whole, s.cc.end_day);
    capture_ref =
        dynamics::reference_distribution(capture_matrix, partition.num_topics, s.cfg.weighting);
  }

  std::ofstream mf(s.dir("dynamics") + "/matrices.tsv");
  std::ofstream vf(s.dir("dynamics") + "/vectors.tsv");
  if (!mf || !vf) throw std::runtime_error("cannot write dynamics artifacts");
  char buf[64];

  std::vector<dynamics::WindowVectors> windows;
  for (const auto& m : matrices) {
    std::string date = format_date(m.window_end_day);
    for (const auto& e : m.entries)
      mf << date << '\t' << e.user << '\t' << e.topic << '\t' << e.count << '\n';
    auto wv = dynamics::description_vectors(m, partition.num_topics, s.cfg.weighting,
                                            capture_ref.empty() ? nullptr : &capture_ref);
    for (size_t i = 0; i < wv.users.size(); ++i) {
      auto v = wv.vec(i);
      for (uint32_t t = 0; t < wv.num_topics; ++t) {
        std::snprintf(buf, sizeof(buf), "%.17g", v[t]);
        vf << date << '\t' << wv.users[i] << '\t' << t << '\t' << buf << '\n';
      }
    }
    windows.push_back(std::move(wv));
  }
  s.windows = std::move(windows);
}

void run_similarity(PipelineState& s) {
  auto& roster = s.get_roster();
  std::vector<similarity::SeriesRequest> requests;
  if (s.cfg.similarity_pairs.empty()) {
    for (uint32_t a = 0; a < roster.parties.size(); ++a) requests.push_back({a, a});
    for (uint32_t a = 0; a < roster.parties.size(); ++a)
      for (uint32_t b = a + 1; b < roster.parties.size(); ++b) requests.push_back({a, b});
  } else {
    for (const auto& p : s.cfg.similarity_pairs) {
      auto colon = p.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("similarity pair must be 'A:B': " + p);
      uint32_t a = roster.find_party(p.substr(0, colon));
      uint32_t b = roster.find_party(p.substr(colon + 1));
      if (a == affiliation::kNoParty || b == affiliation::kNoParty)
        throw std::runtime_error("similarity pair names an unknown party: " + p);
      requests.push_back({a, b});
    }
  }
  s.series = similarity::similarity_series(s.get_windows(), s.get_aff(), requests);
  similarity::save_series(s.dir("similarity") + "/series.csv", *s.series, roster);
}

void run_report(PipelineState& s) {
  auto& store = s.get_store();
  auto& partition = s.get_partition();
  auto& roster = s.get_roster();
  std::string d = s.dir("report");
  for (TopicId t = 0; t < partition.num_topics; ++t) {
    auto usage = report::topic_usage(store.records, partition, s.get_aff(), s.cc, t);
    std::string base = d + "/topic_" + std::to_string(t);
    report::save_usage_csv(base + "_rolling.csv", usage, roster, report::UsageMode::Rolling);
    report::save_usage_csv(base + "_cumulative.csv", usage, roster,
                           report::UsageMode::Cumulative);
    report::save_usage_svg(base + "_rolling.svg", usage, roster, report::UsageMode::Rolling);
    auto core = topics::coreness(s.get_graph(), partition, t);
    report::save_coreness_csv(base + "_coreness.csv", core, t, store.tags);
  }
  report::save_similarity_wide_csv(d + "/similarity_wide.csv", s.get_series(), roster);
  report::save_similarity_svg(d + "/similarity.svg", s.get_series(), roster);
}

}  // namespace

std::vector<StageStatus> run_pipeline(const RunConfig& config) {
  config.validate();
  fs::create_directories(config.out);

  PipelineState state(config);

  struct Stage {
    const char* name;
    StageFn fn;
  };
  const Stage stages[] = {
      {"ingest", run_ingest},   {"affiliate", run_affiliate}, {"graph", run_graph},
      {"topics", run_topics},   {"dynamics", run_dynamics},   {"similarity", run_similarity},
      {"report", run_report},
  };

  std::vector<StageStatus> status;
  uint64_t chain = 14695981039346656037ull;
  for (const auto& stage : stages) {
    std::string dir = state.dir(stage.name);
    uint64_t h = fnv1a(config.stage_key(stage.name), chain);
    try {
      if (std::string(stage.name) == "ingest") h = fnv1a(hex(file_hash(config.input)), h);
      if (std::string(stage.name) == "affiliate") {
        h = fnv1a(hex(file_hash(config.roster)), h);
        h = fnv1a(hex(file_hash(config.follows)), h);
      }
      if (std::string(stage.name) == "topics" && config.detector == "external")
        h = fnv1a(hex(file_hash(config.communities)), h);
      chain = h;

      std::string stamp = hex(h);
      if (auto existing = read_stamp(dir); existing && *existing == stamp) {
        status.push_back({stage.name, true});
        continue;
      }
      fs::create_directories(dir);
      fs::remove(dir + "/.stamp");  // invalidate while rebuilding
      stage.fn(state);
      write_stamp(dir, stamp);
      status.push_back({stage.name, false});
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(stage.name) + ": " + e.what());
    }
  }
  return status;
}

}  // namespace opland::pipeline
