#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opland/affiliation.hpp"
#include "opland/dynamics.hpp"
#include "opland/ingest.hpp"
#include "opland/pipeline.hpp"
#include "opland/report.hpp"
#include "opland/semantic_graph.hpp"
#include "opland/similarity.hpp"
#include "opland/synth.hpp"
#include "opland/topics.hpp"

namespace {

using namespace opland;

struct StoreArgs {
  std::string store;
  ingest::ParseResult data;
  ingest::CaptureConfig cc;

  void load() { data = ingest::load_store(store, &cc); }
};

dynamics::GlobalWeighting parse_weighting(const std::string& s) {
  if (s == "uniform") return dynamics::GlobalWeighting::UniformUsers;
  if (s == "counts") return dynamics::GlobalWeighting::RawCounts;
  throw CLI::ValidationError("--global-weighting", "must be 'uniform' or 'counts'");
}

topics::TopicPartition load_partition(const semgraph::CooccurrenceGraph& graph,
                                      const std::string& path, Interner& tags) {
  auto comm = topics::load_communities(path, tags);
  return topics::partition_from_communities(graph, comm, "file");
}

std::vector<dynamics::WindowVectors> compute_windows(const StoreArgs& store,
                                                     const topics::TopicPartition& partition,
                                                     const affiliation::AffiliationResult& aff,
                                                     dynamics::GlobalWeighting weighting,
                                                     bool capture_reference) {
  auto matrices = dynamics::window_matrices(store.data.records, partition, aff, store.cc);
  std::vector<double> ref;
  if (capture_reference) {
    ingest::CaptureConfig whole = store.cc;
    whole.window_days = static_cast<int>(store.cc.end_day - store.cc.start_day + 1);
    auto capture = dynamics::build_window_matrix(store.data.records, partition, aff, whole,
                                                 store.cc.end_day);
    ref = dynamics::reference_distribution(capture, partition.num_topics, weighting);
  }
  std::vector<dynamics::WindowVectors> out;
  for (const auto& m : matrices)
    out.push_back(dynamics::description_vectors(m, partition.num_topics, weighting,
                                                ref.empty() ? nullptr : &ref));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal opinion-landscape pipeline"};
  app.require_subcommand(1);

  // --- synth ---
  std::string synth_spec, synth_out;
  uint64_t synth_seed = 0;
  bool synth_seed_set = false;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--spec", synth_spec, "Generator spec (JSON)")->required();
  synth->add_option("--seed", synth_seed, "Override the spec's seed")
      ->each([&](const std::string&) { synth_seed_set = true; });
  synth->add_option("--out", synth_out, "Output directory")->required();

  // --- ingest ---
  std::string in_input, in_start, in_end, in_out;
  int in_probe = 30, in_window = 7, in_offset = -180;
  auto* ing = app.add_subcommand("ingest", "Parse a record stream into an indexed store");
  ing->add_option("--input", in_input)->required();
  ing->add_option("--start", in_start, "Capture start date (YYYY-MM-DD)")->required();
  ing->add_option("--end", in_end, "Capture end date (YYYY-MM-DD)")->required();
  ing->add_option("--probe-days", in_probe, "Activity probe length");
  ing->add_option("--window-days", in_window);
  ing->add_option("--utc-offset-minutes", in_offset);
  ing->add_option("--out", in_out, "Store directory")->required();

  // --- affiliate ---
  StoreArgs aff_store;
  std::string aff_roster, aff_follows, aff_cutoff, aff_out;
  double aff_threshold = 0.75;
  auto* aff_cmd = app.add_subcommand("affiliate", "Infer party affiliations");
  aff_cmd->add_option("--store", aff_store.store)->required();
  aff_cmd->add_option("--roster", aff_roster)->required();
  aff_cmd->add_option("--follows", aff_follows)->required();
  aff_cmd->add_option("--cutoff", aff_cutoff, "Evidence cutoff date")->required();
  aff_cmd->add_option("--threshold", aff_threshold, "Retweet share threshold");
  aff_cmd->add_option("--out", aff_out)->required();

  // --- graph build ---
  StoreArgs gb_store;
  uint32_t gb_min_weight = 5;
  std::string gb_out;
  auto* graph_cmd = app.add_subcommand("graph", "Hashtag co-occurrence network");
  graph_cmd->require_subcommand(1);
  auto* gb = graph_cmd->add_subcommand("build", "Build and prune the network");
  gb->add_option("--store", gb_store.store)->required();
  gb->add_option("--min-weight", gb_min_weight);
  gb->add_option("--out", gb_out, "Output directory")->required();

  // --- graph political ---
  StoreArgs gp_store;
  std::string gp_aff, gp_roster, gp_out;
  double gp_kl = 0.5;
  auto* gp = graph_cmd->add_subcommand("political", "Score hashtags by relative entropy");
  gp->add_option("--store", gp_store.store)->required();
  gp->add_option("--affiliations", gp_aff)->required();
  gp->add_option("--roster", gp_roster)->required();
  gp->add_option("--kl-threshold", gp_kl);
  gp->add_option("--out", gp_out)->required();

  // --- topics detect ---
  StoreArgs td_store;
  std::string td_graph, td_detector = "default", td_communities, td_out;
  uint64_t td_seed = 1;
  auto* topics_cmd = app.add_subcommand("topics", "Topic communities and k-cores");
  topics_cmd->require_subcommand(1);
  auto* td = topics_cmd->add_subcommand("detect", "Detect topic communities");
  td->add_option("--store", td_store.store)->required();
  td->add_option("--graph", td_graph, "Graph artifact directory")->required();
  td->add_option("--detector", td_detector)->check(CLI::IsMember({"default", "external"}));
  td->add_option("--communities", td_communities, "Community file for --detector external");
  td->add_option("--seed", td_seed);
  td->add_option("--out", td_out, "Community file to write")->required();

  // --- topics kcore ---
  StoreArgs tk_store;
  std::string tk_graph, tk_communities, tk_out;
  uint32_t tk_topic = 0;
  auto* tk = topics_cmd->add_subcommand("kcore", "k-core decomposition of a topic");
  tk->add_option("--store", tk_store.store)->required();
  tk->add_option("--graph", tk_graph)->required();
  tk->add_option("--communities", tk_communities)->required();
  tk->add_option("--topic", tk_topic)->required();
  tk->add_option("--out", tk_out)->required();

  // --- dynamics vectors ---
  StoreArgs dv_store;
  std::string dv_graph, dv_communities, dv_aff, dv_roster, dv_out;
  std::string dv_weighting = "uniform", dv_reference = "window";
  int dv_window = 7;
  auto* dyn_cmd = app.add_subcommand("dynamics", "Windowed description vectors");
  dyn_cmd->require_subcommand(1);
  auto* dv = dyn_cmd->add_subcommand("vectors", "Dump per-window description vectors");
  dv->add_option("--store", dv_store.store)->required();
  dv->add_option("--graph", dv_graph)->required();
  dv->add_option("--communities", dv_communities)->required();
  dv->add_option("--affiliations", dv_aff)->required();
  dv->add_option("--roster", dv_roster)->required();
  dv->add_option("--window-days", dv_window);
  dv->add_option("--global-weighting", dv_weighting)->check(CLI::IsMember({"uniform", "counts"}));
  dv->add_option("--global-reference", dv_reference)->check(CLI::IsMember({"window", "capture"}));
  dv->add_option("--out", dv_out, "Output directory")->required();

  // --- similarity ---
  StoreArgs sm_store;
  std::string sm_graph, sm_communities, sm_aff, sm_roster, sm_out;
  std::string sm_self = "all", sm_cross, sm_weighting = "uniform", sm_reference = "window";
  int sm_window = 7;
  auto* sm = app.add_subcommand("similarity", "Self/cross group similarity series");
  sm->add_option("--store", sm_store.store)->required();
  sm->add_option("--graph", sm_graph)->required();
  sm->add_option("--communities", sm_communities)->required();
  sm->add_option("--affiliations", sm_aff)->required();
  sm->add_option("--roster", sm_roster)->required();
  sm->add_option("--self", sm_self, "'all', 'none', or comma-separated acronyms");
  sm->add_option("--cross", sm_cross, "'all' or comma-separated A:B pairs");
  sm->add_option("--window-days", sm_window);
  sm->add_option("--global-weighting", sm_weighting)->check(CLI::IsMember({"uniform", "counts"}));
  sm->add_option("--global-reference", sm_reference)->check(CLI::IsMember({"window", "capture"}));
  sm->add_option("--out", sm_out, "CSV path")->required();

  // --- report topic ---
  StoreArgs rt_store;
  std::string rt_graph, rt_communities, rt_aff, rt_roster, rt_out, rt_mode = "rolling";
  uint32_t rt_id = 0;
  auto* rep_cmd = app.add_subcommand("report", "Plot-ready exports");
  rep_cmd->require_subcommand(1);
  auto* rt = rep_cmd->add_subcommand("topic", "Per-party topic usage series");
  rt->add_option("--store", rt_store.store)->required();
  rt->add_option("--graph", rt_graph)->required();
  rt->add_option("--communities", rt_communities)->required();
  rt->add_option("--affiliations", rt_aff)->required();
  rt->add_option("--roster", rt_roster)->required();
  rt->add_option("--id", rt_id, "Topic id")->required();
  rt->add_option("--mode", rt_mode)->check(CLI::IsMember({"daily", "rolling", "cumulative"}));
  rt->add_option("--out", rt_out, "Output directory")->required();

  // --- report similarity ---
  std::string rs_series, rs_roster, rs_out;
  auto* rs = rep_cmd->add_subcommand("similarity", "Wide CSV + chart from a series file");
  rs->add_option("--series", rs_series, "Long-format series CSV")->required();
  rs->add_option("--roster", rs_roster)->required();
  rs->add_option("--out", rs_out, "Output directory")->required();

  // --- report kcore ---
  StoreArgs rk_store;
  std::string rk_graph, rk_communities, rk_out;
  uint32_t rk_topic = 0;
  auto* rk = rep_cmd->add_subcommand("kcore", "Layout-ready coreness export");
  rk->add_option("--store", rk_store.store)->required();
  rk->add_option("--graph", rk_graph)->required();
  rk->add_option("--communities", rk_communities)->required();
  rk->add_option("--topic", rk_topic)->required();
  rk->add_option("--out", rk_out)->required();

  // --- run ---
  std::string run_config;
  auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
  run->add_option("--config", run_config, "Run configuration (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    namespace fs = std::filesystem;

    if (*synth) {
      auto spec = synth::load_spec(synth_spec);
      if (synth_seed_set) spec.seed = synth_seed;
      synth::generate(spec, synth_out);
      std::cout << "wrote corpus to " << synth_out << "\n";
    } else if (*ing) {
      ingest::CaptureConfig cc;
      cc.start_day = parse_date(in_start);
      cc.end_day = parse_date(in_end);
      cc.probe_days = in_probe;
      cc.window_days = in_window;
      cc.utc_offset_minutes = in_offset;
      auto result = ingest::parse_stream(in_input, cc);
      ingest::save_store(in_out, result, cc);
      std::cout << "records=" << result.records.size() << " users=" << result.users.size()
                << " hashtags=" << result.tags.size() << " malformed=" << result.stats.malformed
                << " duplicates=" << result.stats.duplicates << "\n";
    } else if (*aff_cmd) {
      aff_store.load();
      auto roster = affiliation::load_roster(aff_roster);
      auto follows = affiliation::load_follows(aff_follows);
      int64_t cutoff_ts = parse_date(aff_cutoff) * 86400 -
                          static_cast<int64_t>(aff_store.cc.utc_offset_minutes) * 60;
      auto result = affiliation::infer_affiliations(aff_store.data.records, aff_store.data.users,
                                                    follows, roster, cutoff_ts, aff_threshold);
      affiliation::save_affiliations(aff_out, result, aff_store.data.users, roster);
      auto sizes = result.party_sizes();
      std::cout << "affiliated:";
      for (size_t p = 0; p < sizes.size(); ++p)
        std::cout << ' ' << roster.parties[p].acronym << '=' << sizes[p];
      std::cout << "\n";
    } else if (*gb) {
      gb_store.load();
      auto graph = semgraph::build_graph(gb_store.data.records, gb_store.data.tags.size(),
                                         gb_min_weight);
      fs::create_directories(gb_out);
      semgraph::save_graph(gb_out + "/edges.tsv", gb_out + "/nodes.tsv", graph,
                           gb_store.data.tags);
      semgraph::save_interchange(gb_out + "/interchange.txt", graph);
      std::cout << "nodes=" << graph.nodes.size() << " edges=" << graph.edges.size() << "\n";
    } else if (*gp) {
      gp_store.load();
      auto roster = affiliation::load_roster(gp_roster);
      auto aff = affiliation::load_affiliations(gp_aff, gp_store.data.users, roster);
      auto scores = semgraph::political_scores(gp_store.data.records, aff, gp_kl);
      semgraph::save_political(gp_out, scores, gp_store.data.tags, roster);
      size_t political = 0;
      for (const auto& s : scores) political += s.is_political;
      std::cout << "scored=" << scores.size() << " political=" << political << "\n";
    } else if (*td) {
      td_store.load();
      auto graph = semgraph::load_graph(td_graph + "/edges.tsv", td_graph + "/nodes.tsv",
                                        td_store.data.tags);
      topics::TopicPartition partition;
      if (td_detector == "external") {
        if (td_communities.empty())
          throw std::runtime_error("--detector external requires --communities");
        partition = load_partition(graph, td_communities, td_store.data.tags);
      } else {
        partition = topics::detect_topics(graph, td_seed);
      }
      topics::save_communities(td_out, partition, td_store.data.tags);
      std::cout << "topics=" << partition.num_topics << "\n";
    } else if (*tk) {
      tk_store.load();
      auto graph = semgraph::load_graph(tk_graph + "/edges.tsv", tk_graph + "/nodes.tsv",
                                        tk_store.data.tags);
      auto partition = load_partition(graph, tk_communities, tk_store.data.tags);
      auto core = topics::coreness(graph, partition, tk_topic);
      report::save_coreness_csv(tk_out, core, tk_topic, tk_store.data.tags);
      uint32_t kmax = 0;
      for (const auto& e : core) kmax = std::max(kmax, e.coreness);
      std::cout << "tags=" << core.size() << " max_coreness=" << kmax << "\n";
    } else if (*dv) {
      dv_store.load();
      dv_store.cc.window_days = dv_window;
      auto graph = semgraph::load_graph(dv_graph + "/edges.tsv", dv_graph + "/nodes.tsv",
                                        dv_store.data.tags);
      auto partition = load_partition(graph, dv_communities, dv_store.data.tags);
      auto roster = affiliation::load_roster(dv_roster);
      auto aff = affiliation::load_affiliations(dv_aff, dv_store.data.users, roster);
      auto windows = compute_windows(dv_store, partition, aff, parse_weighting(dv_weighting),
                                     dv_reference == "capture");
      fs::create_directories(dv_out);
      std::ofstream vf(dv_out + "/vectors.tsv");
      if (!vf) throw std::runtime_error("cannot write: " + dv_out + "/vectors.tsv");
      char buf[64];
      for (const auto& w : windows) {
        std::string date = format_date(w.window_end_day);
        for (size_t i = 0; i < w.users.size(); ++i) {
          auto v = w.vec(i);
          for (uint32_t t = 0; t < w.num_topics; ++t) {
            std::snprintf(buf, sizeof(buf), "%.17g", v[t]);
            vf << date << '\t' << w.users[i] << '\t' << t << '\t' << buf << '\n';
          }
        }
      }
      std::cout << "windows=" << windows.size() << "\n";
    } else if (*sm) {
      sm_store.load();
      sm_store.cc.window_days = sm_window;
      auto graph = semgraph::load_graph(sm_graph + "/edges.tsv", sm_graph + "/nodes.tsv",
                                        sm_store.data.tags);
      auto partition = load_partition(graph, sm_communities, sm_store.data.tags);
      auto roster = affiliation::load_roster(sm_roster);
      auto aff = affiliation::load_affiliations(sm_aff, sm_store.data.users, roster);
      auto windows = compute_windows(sm_store, partition, aff, parse_weighting(sm_weighting),
                                     sm_reference == "capture");

      auto split = [](const std::string& s) {
        std::vector<std::string> out;
        size_t pos = 0;
        while (pos <= s.size()) {
          size_t comma = s.find(',', pos);
          if (comma == std::string::npos) comma = s.size();
          if (comma > pos) out.push_back(s.substr(pos, comma - pos));
          pos = comma + 1;
        }
        return out;
      };
      std::vector<similarity::SeriesRequest> requests;
      if (sm_self == "all") {
        for (uint32_t a = 0; a < roster.parties.size(); ++a) requests.push_back({a, a});
      } else if (sm_self != "none") {
        for (const auto& acr : split(sm_self)) {
          uint32_t a = roster.find_party(acr);
          if (a == affiliation::kNoParty) throw std::runtime_error("unknown party: " + acr);
          requests.push_back({a, a});
        }
      }
      if (sm_cross == "all") {
        for (uint32_t a = 0; a < roster.parties.size(); ++a)
          for (uint32_t b = a + 1; b < roster.parties.size(); ++b) requests.push_back({a, b});
      } else {
        for (const auto& pair : split(sm_cross)) {
          auto colon = pair.find(':');
          if (colon == std::string::npos)
            throw std::runtime_error("cross pair must be 'A:B': " + pair);
          uint32_t a = roster.find_party(pair.substr(0, colon));
          uint32_t b = roster.find_party(pair.substr(colon + 1));
          if (a == affiliation::kNoParty || b == affiliation::kNoParty)
            throw std::runtime_error("unknown party in pair: " + pair);
          requests.push_back({a, b});
        }
      }
      auto series = similarity::similarity_series(windows, aff, requests);
      similarity::save_series(sm_out, series, roster);
      std::cout << "series=" << series.size() << "\n";
    } else if (*rt) {
      rt_store.load();
      auto graph = semgraph::load_graph(rt_graph + "/edges.tsv", rt_graph + "/nodes.tsv",
                                        rt_store.data.tags);
      auto partition = load_partition(graph, rt_communities, rt_store.data.tags);
      auto roster = affiliation::load_roster(rt_roster);
      auto aff = affiliation::load_affiliations(rt_aff, rt_store.data.users, roster);
      auto usage = report::topic_usage(rt_store.data.records, partition, aff, rt_store.cc, rt_id);
      report::UsageMode mode = rt_mode == "daily"        ? report::UsageMode::Daily
                               : rt_mode == "cumulative" ? report::UsageMode::Cumulative
                                                         : report::UsageMode::Rolling;
      fs::create_directories(rt_out);
      std::string base = rt_out + "/topic_" + std::to_string(rt_id) + "_" + rt_mode;
      report::save_usage_csv(base + ".csv", usage, roster, mode);
      report::save_usage_svg(base + ".svg", usage, roster, mode);
      std::cout << "wrote " << base << ".csv\n";
    } else if (*rs) {
      auto roster = affiliation::load_roster(rs_roster);
      // reload the long-format table written by `similarity`
      std::ifstream f(rs_series);
      if (!f) throw std::runtime_error("cannot open: " + rs_series);
      std::vector<similarity::SimilaritySeries> series;
      std::string line;
      std::getline(f, line);
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
          throw std::runtime_error("series file names an unknown party: " + line);
        auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) {
          return s.kind == kind && s.group_a == a && s.group_b == b;
        });
        if (it == series.end()) {
          series.push_back({kind, a, b, {}});
          it = series.end() - 1;
        }
        it->points.push_back({parse_date(date), std::stod(val),
                              static_cast<size_t>(std::stoull(na)),
                              static_cast<size_t>(std::stoull(nb))});
      }
      fs::create_directories(rs_out);
      report::save_similarity_wide_csv(rs_out + "/similarity_wide.csv", series, roster);
      report::save_similarity_svg(rs_out + "/similarity.svg", series, roster);
      std::cout << "wrote " << rs_out << "/similarity_wide.csv\n";
    } else if (*rk) {
      rk_store.load();
      auto graph = semgraph::load_graph(rk_graph + "/edges.tsv", rk_graph + "/nodes.tsv",
                                        rk_store.data.tags);
      auto partition = load_partition(graph, rk_communities, rk_store.data.tags);
      auto core = topics::coreness(graph, partition, rk_topic);
      report::save_coreness_csv(rk_out, core, rk_topic, rk_store.data.tags);
      std::cout << "tags=" << core.size() << "\n";
    } else if (*run) {
      auto config = pipeline::load_run_config(run_config);
      auto status = pipeline::run_pipeline(config);
      for (const auto& s : status)
        std::cout << s.name << ": " << (s.skipped ? "up to date" : "done") << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
