#include "lookahead/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "lookahead/errors.hpp"

namespace lookahead {

namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;
constexpr std::size_t kMaxPoints = 500;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Series {
  std::string id;
  std::vector<double> k, mean, se;
};

std::vector<std::size_t> sample_indices(std::size_t len) {
  std::vector<std::size_t> idx;
  if (len <= kMaxPoints) {
    for (std::size_t i = 0; i < len; ++i) idx.push_back(i);
    return idx;
  }
  for (std::size_t j = 0; j < kMaxPoints; ++j) idx.push_back(j * (len - 1) / (kMaxPoints - 1));
  return idx;
}

}  // namespace

std::vector<RegretCurve> read_run_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && entry.path().extension() == ".csv" && name.find("__seed") != std::string::npos) {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw InputError(dir.string() + ": no run CSVs (<id>__seed<n>.csv) found");
  std::sort(files.begin(), files.end());
  std::vector<RegretCurve> curves;
  for (const auto& f : files) curves.push_back(read_run_csv(f));
  return curves;
}

std::string regret_svg(const std::vector<RegretCurve>& curves) {
  std::map<std::string, std::vector<const RegretCurve*>> groups;
  for (const auto& c : curves) groups[c.config_id].push_back(&c);

  std::vector<Series> series;
  double kmax = 1.0;
  double ymax = 0.0;
  double ymin = 0.0;
  for (auto& [id, runs] : groups) {
    std::sort(runs.begin(), runs.end(), [](const RegretCurve* a, const RegretCurve* b) { return a->seed < b->seed; });
    const std::vector<double> mean = mean_curve(runs);
    Series s;
    s.id = id;
    const double n = static_cast<double>(runs.size());
    for (std::size_t i : sample_indices(mean.size())) {
      double ss = 0.0;
      for (const auto* r : runs) {
        const double d = r->points[i].cum_regret - mean[i];
        ss += d * d;
      }
      const double se = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
      s.k.push_back(static_cast<double>(runs.front()->points[i].k));
      s.mean.push_back(mean[i]);
      s.se.push_back(se);
      kmax = std::max(kmax, s.k.back());
      ymax = std::max(ymax, mean[i] + se);
      ymin = std::min(ymin, mean[i] - se);
    }
    series.push_back(std::move(s));
  }
  if (ymax <= ymin) ymax = ymin + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto X = [&](double k) { return kLeft + pw * k / kmax; };
  auto Y = [&](double y) { return kTop + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
                    fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop + ph) + "\" x2=\"" + fmt(kLeft + pw) + "\" y2=\"" +
         fmt(kTop + ph) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" +
         fmt(kTop + ph) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double kv = kmax * t / 4.0;
    const double yv = ymin + (ymax - ymin) * t / 4.0;
    svg += "<text x=\"" + fmt(X(kv)) + "\" y=\"" + fmt(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           tick_label(kv) + "</text>\n";
    svg += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(Y(yv) + 4) + "\" text-anchor=\"end\">" +
           tick_label(yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 10) +
         "\" text-anchor=\"middle\">episode</text>\n";
  svg += "<text transform=\"translate(16," + fmt(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">cumulative regret</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::string color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
    std::string band, line;
    for (std::size_t j = 0; j < s.k.size(); ++j) band += fmt(X(s.k[j])) + "," + fmt(Y(s.mean[j] + s.se[j])) + " ";
    for (std::size_t j = s.k.size(); j-- > 0;) band += fmt(X(s.k[j])) + "," + fmt(Y(s.mean[j] - s.se[j])) + " ";
    for (std::size_t j = 0; j < s.k.size(); ++j) line += fmt(X(s.k[j])) + "," + fmt(Y(s.mean[j])) + " ";
    if (!band.empty()) band.pop_back();
    if (!line.empty()) line.pop_back();
    svg += "<polygon points=\"" + band + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    svg += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    svg += "<line x1=\"" + fmt(kWidth - kRight + 15) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(kWidth - kRight + 35) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(kWidth - kRight + 40) + "\" y=\"" + fmt(ly + 4) + "\">" + escape_xml(s.id) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

ReportFiles write_report(const fs::path& dir) {
  const auto curves = read_run_directory(dir);
  ReportFiles files{dir / "summary.csv", dir / "regret.svg"};
  write_summary_csv(summarize(curves), files.summary);
  std::ofstream out(files.chart, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + files.chart.string());
  out << regret_svg(curves);
  return files;
}

}  // namespace lookahead
