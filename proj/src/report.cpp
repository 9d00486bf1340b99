#include "qaoa/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "qaoa/error.hpp"

namespace qaoa::report {

namespace fs = std::filesystem;
using harness::GroupSummary;
using harness::Summary;

std::string kind_name(ReportKind k) {
  switch (k) {
    case ReportKind::BoxplotTable: return "boxplot_table";
    case ReportKind::DepthCurve: return "depth_curve";
    case ReportKind::SuccessCurve: return "success_curve";
  }
  return "?";
}

ReportKind parse_kind(const std::string& name) {
  std::string key;
  for (char c : name) key += c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto k : {ReportKind::BoxplotTable, ReportKind::DepthCurve, ReportKind::SuccessCurve})
    if (kind_name(k) == key) return k;
  throw ContractViolation("unknown report kind '" + name + "' (valid: boxplot_table, depth_curve, success_curve)");
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "svg") return Format::Svg;
  throw ContractViolation("unknown report format '" + name + "' (valid: csv, svg)");
}

std::vector<std::string> default_group_by(ReportKind k) {
  if (k == ReportKind::BoxplotTable) return {"optimizer", "depth", "backend"};
  return {"backend"};
}

std::vector<std::string> required_columns(ReportKind k, const std::vector<std::string>& group_by) {
  std::vector<std::string> cols = group_by;
  if (k != ReportKind::BoxplotTable) cols.push_back("depth");
  cols.push_back(k == ReportKind::SuccessCurve ? "success_prob" : "final_expectation");
  std::vector<std::string> unique;
  for (auto& c : cols)
    if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(c);
  return unique;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

constexpr double kWidth = 720, kHeight = 440, kLeft = 70, kRight = 20, kTop = 40, kBottom = 90;

struct Scale {
  double lo, hi, px_lo, px_hi;
  double operator()(double v) const { return hi == lo ? 0.5 * (px_lo + px_hi) : px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

Scale padded(double lo, double hi, double px_lo, double px_hi) {
  const double pad = hi > lo ? 0.05 * (hi - lo) : 0.5;
  return {lo - pad, hi + pad, px_lo, px_hi};
}

std::string svg_open(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n" + "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" fill=\"white\"/>\n" + "<text x=\"" + fmt(kWidth / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0) {
  return "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" + fmt(y2) +
         "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) + "\"/>\n";
}

std::string text(double x, double y, const std::string& s, const std::string& anchor, const std::string& extra = "") {
  return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" + escape(s) +
         "</text>\n";
}

std::string rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke) {
  return "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
         "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

std::string y_axis(const Scale& y, const std::string& label) {
  std::string out = line(kLeft, kTop, kLeft, kHeight - kBottom, "black");
  for (int i = 0; i <= 4; ++i) {
    const double v = y.lo + (y.hi - y.lo) * i / 4.0;
    out += line(kLeft - 4, y(v), kLeft, y(v), "black");
    out += text(kLeft - 6, y(v) + 4, fmt(v), "end");
  }
  const double mid = 0.5 * (kTop + kHeight - kBottom);
  out += text(16, mid, label, "middle", " transform=\"rotate(-90 16 " + fmt(mid) + ")\"");
  return out;
}

Report boxplot(const std::vector<GroupSummary>& groups, const std::vector<std::string>& keys) {
  Report r;
  r.csv = join(keys, ",") + (keys.empty() ? "" : ",") + "count,mean,std,min,q1,median,q3,max\n";
  for (const auto& g : groups) {
    const Summary& s = g.expectation;
    r.csv += join(g.key, ",") + (keys.empty() ? "" : ",") + std::to_string(s.count) + "," +
             harness::format_double(s.mean) + "," + harness::format_double(s.std) + "," +
             harness::format_double(s.min) + "," + harness::format_double(s.q1) + "," +
             harness::format_double(s.median) + "," + harness::format_double(s.q3) + "," +
             harness::format_double(s.max) + "\n";
  }

  double lo = groups.front().expectation.min, hi = groups.front().expectation.max;
  for (const auto& g : groups) {
    lo = std::min(lo, g.expectation.min);
    hi = std::max(hi, g.expectation.max);
  }
  const Scale y = padded(lo, hi, kHeight - kBottom, kTop);
  const double slot = (kWidth - kLeft - kRight) / static_cast<double>(groups.size());
  std::string svg = svg_open("final expectation by " + (keys.empty() ? std::string("all records") : join(keys, ", ")));
  svg += y_axis(y, "final expectation");
  svg += line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "black");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const Summary& s = groups[i].expectation;
    const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    const double half = std::min(18.0, 0.3 * slot);
    svg += line(cx, y(s.min), cx, y(s.q1), "black");
    svg += line(cx, y(s.q3), cx, y(s.max), "black");
    svg += line(cx - half / 2, y(s.min), cx + half / 2, y(s.min), "black");
    svg += line(cx - half / 2, y(s.max), cx + half / 2, y(s.max), "black");
    svg += rect(cx - half, y(s.q3), 2 * half, std::max(0.0, y(s.q1) - y(s.q3)), "#9ecae1", "black");
    svg += line(cx - half, y(s.median), cx + half, y(s.median), "#d62728", 2.0);
    const double ty = kHeight - kBottom + 12;
    svg += text(cx, ty, join(groups[i].key, "/"), "end",
                " transform=\"rotate(-45 " + fmt(cx) + " " + fmt(ty) + ")\"");
  }
  svg += "</svg>\n";
  r.svg = std::move(svg);
  return r;
}

struct Point {
  int depth;
  Summary s;
};

Report curves(const std::vector<GroupSummary>& groups, bool success) {
  // Groups are keyed (series..., depth) in ascending order.
  std::vector<std::pair<std::string, std::vector<Point>>> series;
  for (const auto& g : groups) {
    std::vector<std::string> skey(g.key.begin(), g.key.end() - 1);
    const std::string name = skey.empty() ? "all" : join(skey, "/");
    if (series.empty() || series.back().first != name) series.push_back({name, {}});
    series.back().second.push_back({std::stoi(g.key.back()), success ? *g.success : g.expectation});
  }

  const std::string metric = success ? "success_prob" : "final_expectation";
  Report r;
  r.csv = "series,depth,count,mean_" + metric + ",stderr\n";
  double lo = 0, hi = 0;
  int pmin = series.front().second.front().depth, pmax = pmin;
  bool first = true;
  for (const auto& [name, pts] : series) {
    for (const auto& p : pts) {
      const double se = p.s.std / std::sqrt(static_cast<double>(p.s.count));
      r.csv += name + "," + std::to_string(p.depth) + "," + std::to_string(p.s.count) + "," +
               harness::format_double(p.s.mean) + "," + harness::format_double(se) + "\n";
      if (first) lo = p.s.mean - se, hi = p.s.mean + se, first = false;
      lo = std::min(lo, p.s.mean - se);
      hi = std::max(hi, p.s.mean + se);
      pmin = std::min(pmin, p.depth);
      pmax = std::max(pmax, p.depth);
    }
  }

  const Scale y = padded(lo, hi, kHeight - kBottom, kTop);
  const Scale x{static_cast<double>(pmin) - 0.5, static_cast<double>(pmax) + 0.5, kLeft, kWidth - kRight};
  std::string svg = svg_open((success ? "success probability" : "mean final expectation") + std::string(" vs depth"));
  svg += y_axis(y, success ? "success probability" : "mean final expectation");
  svg += line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "black");
  for (int p = pmin; p <= pmax; ++p) {
    svg += line(x(p), kHeight - kBottom, x(p), kHeight - kBottom + 4, "black");
    svg += text(x(p), kHeight - kBottom + 16, std::to_string(p), "middle");
  }
  svg += text(0.5 * (kLeft + kWidth - kRight), kHeight - kBottom + 34, "depth p", "middle");
  for (std::size_t k = 0; k < series.size(); ++k) {
    const std::string color = kPalette[k % std::size(kPalette)];
    const auto& pts = series[k].second;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double px = x(pts[i].depth), py = y(pts[i].s.mean);
      const double se = pts[i].s.std / std::sqrt(static_cast<double>(pts[i].s.count));
      if (i > 0) svg += line(x(pts[i - 1].depth), y(pts[i - 1].s.mean), px, py, color, 1.5);
      svg += line(px, y(pts[i].s.mean - se), px, y(pts[i].s.mean + se), color);
      svg += rect(px - 3, py - 3, 6, 6, color, color);
    }
    const double ly = kHeight - 30;
    const double lx = kLeft + 140.0 * static_cast<double>(k);
    svg += rect(lx, ly - 8, 10, 10, color, color);
    svg += text(lx + 14, ly, series[k].first, "start");
  }
  svg += "</svg>\n";
  r.svg = std::move(svg);
  return r;
}

}  // namespace

Report build_report(const harness::Table& table, ReportKind kind, std::vector<std::string> group_by) {
  if (group_by.empty()) group_by = default_group_by(kind);
  for (const auto& c : required_columns(kind, group_by))
    if (table.column(c) < 0) throw MissingColumn(c);
  auto records = harness::records_from_table(table);
  require(!records.empty(), "records file has no rows");

  if (kind == ReportKind::BoxplotTable) return boxplot(harness::aggregate(records, group_by), group_by);

  std::vector<std::string> keys;
  for (const auto& k : group_by)
    if (k != "depth") keys.push_back(k);
  const bool success = kind == ReportKind::SuccessCurve;
  if (success) {
    std::erase_if(records, [](const harness::RunRecord& r) { return std::isnan(r.success_prob); });
    require(!records.empty(), "no record carries a success probability");
  }
  keys.push_back("depth");
  return curves(harness::aggregate(records, keys), success);
}

fs::path write_report(const ReportSpec& spec, const fs::path& out_dir) {
  const auto table = harness::read_csv(spec.input);
  const Report r = build_report(table, spec.kind, spec.group_by);
  const fs::path path = out_dir / (kind_name(spec.kind) + (spec.format == Format::Csv ? ".csv" : ".svg"));
  if (!out_dir.empty()) fs::create_directories(out_dir);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << (spec.format == Format::Csv ? r.csv : r.svg);
  return path;
}

}  // namespace qaoa::report
