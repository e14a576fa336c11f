#include "opland/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace opland::report {

namespace {

// fixed-precision formatting so renders are byte-identical across runs
std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string series_label(const similarity::SimilaritySeries& s,
                         const affiliation::PartyRoster& roster) {
  const std::string& a = roster.parties[s.group_a].acronym;
  if (s.kind == "self") return "self:" + a;
  return "cross:" + a + "-" + roster.parties[s.group_b].acronym;
}

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x=day, y=value)
};

void write_svg(const std::string& path, const std::vector<SvgSeries>& series,
               const std::string& title) {
  if (series.empty()) throw std::runtime_error("nothing to render: " + path);
  const double w = 800, h = 400, ml = 60, mr = 20, mt = 30, mb = 40;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin > xmax) throw std::runtime_error("nothing to render: " + path);
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) {
    ymax += 1;
    ymin -= 1;
  }
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"8\" y=\"" << py(ymax) + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << fmt(ymax) << "</text>\n";
  out << "<text x=\"8\" y=\"" << py(ymin) + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << fmt(ymin) << "</text>\n";
  out << "<text x=\"" << ml << "\" y=\"" << h - mb + 16
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_date((int64_t)xmin)
      << "</text>\n";
  out << "<text x=\"" << w - mr - 70 << "\" y=\"" << h - mb + 16
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_date((int64_t)xmax)
      << "</text>\n";

  for (size_t i = 0; i < series.size(); ++i) {
    const char* color = palette[i % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t k = 0; k < series[i].points.size(); ++k) {
      if (k) out << ' ';
      out << fmt(px(series[i].points[k].first)) << ',' << fmt(py(series[i].points[k].second));
    }
    out << "\"/>\n";
    out << "<text x=\"" << ml + 6 << "\" y=\"" << mt + 14 + 14.0 * (double)i
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
        << series[i].label << "</text>\n";
  }
  out << "</svg>\n";

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write: " + path);
  f << out.str();
}

double mode_value(const TopicUsageSeries& s, size_t k, UsageMode mode) {
  switch (mode) {
    case UsageMode::Daily: return static_cast<double>(s.daily[k]);
    case UsageMode::Rolling: return s.rolling[k];
    case UsageMode::Cumulative: return static_cast<double>(s.cumulative[k]);
  }
  return 0.0;
}

const char* mode_name(UsageMode mode) {
  switch (mode) {
    case UsageMode::Daily: return "daily";
    case UsageMode::Rolling: return "rolling";
    case UsageMode::Cumulative: return "cumulative";
  }
  return "?";
}

}  // namespace

std::vector<TopicUsageSeries> topic_usage(std::span<const ingest::TweetRecord> records,
                                          const topics::TopicPartition& partition,
                                          const affiliation::AffiliationResult& affiliations,
                                          const ingest::CaptureConfig& config, TopicId topic,
                                          int rolling_days) {
  if (topic >= partition.num_topics) throw std::runtime_error("unknown topic id");
  if (rolling_days < 1) throw std::runtime_error("rolling window must be positive");

  const size_t n_days = static_cast<size_t>(config.end_day - config.start_day + 1);
  std::vector<TopicUsageSeries> out(affiliations.num_parties);
  for (uint32_t p = 0; p < affiliations.num_parties; ++p) {
    out[p].topic = topic;
    out[p].party = p;
    out[p].start_day = config.start_day;
    out[p].daily.assign(n_days, 0);
  }

  for (const auto& r : records) {
    uint32_t party = affiliations.party(r.user);
    if (party == affiliation::kNoParty) continue;
    int64_t day = config.day_of(r.timestamp);
    if (day < config.start_day || day > config.end_day) continue;
    for (TagId tag : r.hashtags)
      if (partition.topic(tag) == topic)
        ++out[party].daily[static_cast<size_t>(day - config.start_day)];
  }

  for (auto& s : out) {
    s.rolling.resize(n_days);
    s.cumulative.resize(n_days);
    int64_t cum = 0, window = 0;
    for (size_t k = 0; k < n_days; ++k) {
      cum += s.daily[k];
      window += s.daily[k];
      if (k >= static_cast<size_t>(rolling_days)) window -= s.daily[k - rolling_days];
      size_t span = std::min(k + 1, static_cast<size_t>(rolling_days));
      s.cumulative[k] = cum;
      s.rolling[k] = static_cast<double>(window) / static_cast<double>(span);
    }
  }
  return out;
}

void save_usage_csv(const std::string& path, const std::vector<TopicUsageSeries>& series,
                    const affiliation::PartyRoster& roster, UsageMode mode) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write: " + path);
  f << "date,party,daily," << mode_name(mode) << '\n';
  for (const auto& s : series) {
    for (size_t k = 0; k < s.daily.size(); ++k) {
      f << format_date(s.start_day + static_cast<int64_t>(k)) << ','
        << roster.parties[s.party].acronym << ',' << s.daily[k] << ','
        << fmt(mode_value(s, k, mode)) << '\n';
    }
  }
}

void save_usage_svg(const std::string& path, const std::vector<TopicUsageSeries>& series,
                    const affiliation::PartyRoster& roster, UsageMode mode) {
  std::vector<SvgSeries> svg;
  for (const auto& s : series) {
    SvgSeries ss;
    ss.label = roster.parties[s.party].acronym;
    for (size_t k = 0; k < s.daily.size(); ++k)
      ss.points.emplace_back(static_cast<double>(s.start_day + static_cast<int64_t>(k)),
                             mode_value(s, k, mode));
    svg.push_back(std::move(ss));
  }
  std::string title = "topic " + std::to_string(series.empty() ? 0 : series.front().topic) +
                      " usage (" + mode_name(mode) + ")";
  write_svg(path, svg, title);
}

void save_similarity_wide_csv(const std::string& path,
                              const std::vector<similarity::SimilaritySeries>& series,
                              const affiliation::PartyRoster& roster) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write: " + path);
  f << "date";
  for (const auto& s : series) f << ',' << series_label(s, roster);
  f << '\n';

  std::map<int64_t, std::vector<const similarity::SeriesPoint*>> by_day;
  for (size_t i = 0; i < series.size(); ++i)
    for (const auto& p : series[i].points) {
      auto& row = by_day[p.day];
      row.resize(series.size(), nullptr);
      row[i] = &p;
    }
  for (const auto& [day, row] : by_day) {
    f << format_date(day);
    for (size_t i = 0; i < series.size(); ++i) {
      f << ',';
      if (i < row.size() && row[i]) f << fmt(row[i]->value);
    }
    f << '\n';
  }
}

void save_similarity_svg(const std::string& path,
                         const std::vector<similarity::SimilaritySeries>& series,
                         const affiliation::PartyRoster& roster) {
  std::vector<SvgSeries> svg;
  for (const auto& s : series) {
    SvgSeries ss;
    ss.label = series_label(s, roster);
    for (const auto& p : s.points)
      ss.points.emplace_back(static_cast<double>(p.day), p.value);
    if (!ss.points.empty()) svg.push_back(std::move(ss));
  }
  write_svg(path, svg, "group similarity");
}

void save_coreness_csv(const std::string& path, const std::vector<topics::CorenessEntry>& entries,
                       TopicId topic, const Interner& tags) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write: " + path);
  f << "tag,topic,coreness,degree\n";
  for (const auto& e : entries)
    f << tags.name(e.tag) << ',' << topic << ',' << e.coreness << ',' << e.degree << '\n';
}

}  // namespace opland::report
