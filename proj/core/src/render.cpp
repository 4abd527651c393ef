#include "rankcal/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "rankcal/error.hpp"

namespace rankcal::render {
namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kTop = 48.0;
constexpr double kPlot = 340.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

double Px(double x) { return kLeft + x * kPlot; }
double Py(double y) { return kTop + (1.0 - y) * kPlot; }

std::string Escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Svg {
 public:
  explicit Svg(double height = kHeight) {
    out_ += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
        "viewBox=\"0 0 {0:.0f} {1:.0f}\">\n",
        kWidth, height);
    out_ +=
        "<style>\n"
        "text{font-family:Helvetica,Arial,sans-serif;font-size:11px;fill:#222}\n"
        ".title{font-size:13px;font-weight:bold}\n"
        ".frame{fill:none;stroke:#444;stroke-width:1}\n"
        ".grid{stroke:#ddd;stroke-width:0.5}\n"
        ".bar{fill:#d9534f;fill-opacity:0.85}\n"
        ".over{fill:#2b6cd8;fill-opacity:0.55}\n"
        ".pess{fill:#f4a6a6;fill-opacity:0.75}\n"
        ".ref{stroke:#111;stroke-width:1.2;stroke-dasharray:5,3;fill:none}\n"
        ".curve{fill:none;stroke-width:1.6}\n"
        ".note{font-size:9px;fill:#666}\n"
        "</style>\n"
        "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  }

  void Rect(double x, double y, double w, double h, std::string_view cls) {
    out_ += fmt::format("<rect class=\"{}\" x=\"{:.4f}\" y=\"{:.4f}\" width=\"{:.4f}\" height=\"{:.4f}\"/>\n",
                        cls, x, y, w, h);
  }
  void Line(double x1, double y1, double x2, double y2, std::string_view cls) {
    out_ += fmt::format("<line class=\"{}\" x1=\"{:.4f}\" y1=\"{:.4f}\" x2=\"{:.4f}\" y2=\"{:.4f}\"/>\n",
                        cls, x1, y1, x2, y2);
  }
  void Text(double x, double y, std::string_view text, std::string_view anchor = "start",
            std::string_view cls = "") {
    out_ += fmt::format("<text{} x=\"{:.4f}\" y=\"{:.4f}\" text-anchor=\"{}\">{}</text>\n",
                        cls.empty() ? "" : fmt::format(" class=\"{}\"", cls), x, y, anchor,
                        Escape(text));
  }
  void Polyline(const std::vector<std::pair<double, double>>& pts, std::string_view color) {
    std::string p;
    for (const auto& [x, y] : pts) p += fmt::format("{:.4f},{:.4f} ", x, y);
    if (!p.empty()) p.pop_back();
    out_ += fmt::format("<polyline class=\"curve\" stroke=\"{}\" points=\"{}\"/>\n", color, p);
  }
  void Raw(std::string_view s) { out_ += s; }

  std::string Finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  std::string out_;
};

// Frame with ticks at 0, 25, ..., 100 on both axes.
void UnitAxes(Svg& svg, std::string_view xlabel, std::string_view ylabel, bool percent) {
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    svg.Line(Px(v), Py(0), Px(v), Py(1), "grid");
    svg.Line(Px(0), Py(v), Px(1), Py(v), "grid");
    const std::string label = percent ? fmt::format("{}%", t * 25) : fmt::format("{:.2f}", v);
    svg.Text(Px(v), Py(0) + 14, label, "middle");
    svg.Text(Px(0) - 6, Py(v) + 4, label, "end");
  }
  svg.Rect(Px(0), Py(1), kPlot, kPlot, "frame");
  svg.Text(Px(0.5), Py(0) + 30, xlabel, "middle");
  svg.Raw(fmt::format("<text x=\"16\" y=\"{:.4f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.4f})\">{}</text>\n",
                      Py(0.5), Py(0.5), Escape(ylabel)));
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

double IndicationDiagramData::ShadedArea() const {
  double a = 0.0;
  for (const auto& b : bars) a += b.width() * std::abs(b.deviation());
  return a;
}

double IndicationDiagramData::OverOptimisticArea() const {
  double a = 0.0;
  for (const auto& b : bars) if (b.over_optimistic()) a += b.width() * -b.deviation();
  return a;
}

double IndicationDiagramData::PessimisticArea() const {
  double a = 0.0;
  for (const auto& b : bars) if (!b.over_optimistic()) a += b.width() * b.deviation();
  return a;
}

IndicationDiagramData IndicationDiagram(const MeasureSeries& series, std::size_t bins) {
  const auto terms = assessment::ComputeRankTerms(series, bins);
  IndicationDiagramData d;
  d.measure = series.name;
  d.orientation = series.orientation;
  d.rce = assessment::RceFromTerms(terms);
  const double n = static_cast<double>(terms.n);
  std::size_t seen = 0;
  for (std::size_t b = 0; b < terms.bins.size(); ++b) {
    IndicationBar bar;
    bar.count = terms.bins[b].count();
    bar.x_lo = static_cast<double>(seen) / n;
    seen += bar.count;
    bar.x_hi = static_cast<double>(seen) / n;
    bar.height = 1.0 - terms.reg_rank[b];
    bar.reference = 1.0 - terms.value_rank[b];
    d.bars.push_back(bar);
  }
  return d;
}

std::string RenderIndicationSvg(const IndicationDiagramData& d) {
  Svg svg;
  svg.Text(kWidth / 2, 22, fmt::format("Indication diagram: {}", d.measure), "middle", "title");
  svg.Text(kWidth / 2, 38, fmt::format("RCE = {:.4f}", d.rce), "middle");
  UnitAxes(svg, fmt::format("{} percentile", OrientationName(d.orientation)),
           "correctness-rank percentile", true);
  for (const auto& bar : d.bars) {
    const double x = Px(bar.x_lo);
    const double w = bar.width() * kPlot;
    svg.Rect(x, Py(bar.height), w, bar.height * kPlot, "bar");
    const double lo = std::min(bar.height, bar.reference);
    const double hi = std::max(bar.height, bar.reference);
    if (hi > lo) svg.Rect(x, Py(hi), w, (hi - lo) * kPlot, bar.over_optimistic() ? "over" : "pess");
  }
  if (d.orientation == Orientation::kUncertainty) {
    svg.Line(Px(0), Py(1), Px(1), Py(0), "ref");
  } else {
    svg.Line(Px(0), Py(0), Px(1), Py(1), "ref");
  }
  svg.Text(Px(0), kHeight - 8,
           fmt::format("over-optimistic {:.4f}, pessimistic {:.4f}; bar height = crc-rank percentile",
                       d.OverOptimisticArea(), d.PessimisticArea()),
           "start", "note");
  return svg.Finish();
}

std::string IndicationCsv(const IndicationDiagramData& d) {
  std::string out;
  out += fmt::format("# measure={}\n# orientation={}\n# rce={:.17g}\n", d.measure,
                     OrientationName(d.orientation), d.rce);
  out += "bin,x_lo,x_hi,height,reference,deviation,count\n";
  for (std::size_t b = 0; b < d.bars.size(); ++b) {
    const auto& bar = d.bars[b];
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", b + 1, bar.x_lo, bar.x_hi,
                       bar.height, bar.reference, bar.deviation(), bar.count);
  }
  return out;
}

IndicationDiagramData ParseIndicationCsv(std::string_view csv) {
  IndicationDiagramData d;
  std::istringstream in{std::string(csv)};
  std::string line;
  bool header_seen = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line.rfind("# ", 0) == 0) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(2, eq - 2);
        const std::string value = line.substr(eq + 1);
        if (key == "measure") d.measure = value;
        else if (key == "orientation") d.orientation = ParseOrientation(value);
        else if (key == "rce") d.rce = std::stod(value);
        continue;
      }
      if (!header_seen) {
        header_seen = true;
        continue;
      }
      const auto f = SplitCsvLine(line);
      if (f.size() != 7) throw Error(ErrorCode::kInvalidArgument, "bad indication CSV row");
      IndicationBar bar;
      bar.x_lo = std::stod(f[1]);
      bar.x_hi = std::stod(f[2]);
      bar.height = std::stod(f[3]);
      bar.reference = std::stod(f[4]);
      bar.count = static_cast<std::size_t>(std::stoull(f[6]));
      d.bars.push_back(bar);
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidArgument, "bad number in indication CSV");
  }
  return d;
}

ReliabilityDiagramData ReliabilityDiagram(const MeasureSeries& series, std::size_t bins) {
  ReliabilityDiagramData d;
  d.measure = series.name;
  d.ece = assessment::Ece(series, bins).value;
  for (const auto& b : assessment::EqualMassBins(series, bins)) {
    d.bins.push_back({b.uct, b.crc, b.count()});
  }
  return d;
}

std::string RenderReliabilitySvg(const ReliabilityDiagramData& d) {
  Svg svg;
  svg.Text(kWidth / 2, 22, fmt::format("Reliability diagram: {}", d.measure), "middle", "title");
  svg.Text(kWidth / 2, 38, fmt::format("ECE = {:.4f}", d.ece), "middle");
  UnitAxes(svg, "mean confidence", "mean correctness", false);
  std::vector<std::pair<double, double>> pts;
  for (const auto& b : d.bins) {
    const double lo = std::min(b.confidence, b.accuracy);
    const double hi = std::max(b.confidence, b.accuracy);
    svg.Rect(Px(b.confidence) - 3, Py(hi), 6, (hi - lo) * kPlot, "pess");
    pts.emplace_back(Px(b.confidence), Py(b.accuracy));
  }
  svg.Line(Px(0), Py(0), Px(1), Py(1), "ref");
  svg.Polyline(pts, kPalette[1]);
  return svg.Finish();
}

std::string ReliabilityCsv(const ReliabilityDiagramData& d) {
  std::string out = fmt::format("# measure={}\n# ece={:.17g}\nbin,confidence,accuracy,gap,count\n",
                                d.measure, d.ece);
  for (std::size_t b = 0; b < d.bins.size(); ++b) {
    const auto& r = d.bins[b];
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", b + 1, r.confidence, r.accuracy,
                       std::abs(r.confidence - r.accuracy), r.count);
  }
  return out;
}

SweepPlotData SweepPlot(std::string metric, std::vector<SweepCurve> curves) {
  if (curves.empty()) throw Error(ErrorCode::kInvalidArgument, "sweep plot needs a curve");
  for (const auto& c : curves) {
    if (c.points.empty()) throw Error(ErrorCode::kInvalidArgument, "empty tau grid");
  }
  return {std::move(metric), std::move(curves)};
}

std::string RenderSweepSvg(const SweepPlotData& d) {
  double tau_lo = d.curves.front().points.front().tau;
  double tau_hi = tau_lo;
  for (const auto& c : d.curves) {
    for (const auto& p : c.points) {
      tau_lo = std::min(tau_lo, p.tau);
      tau_hi = std::max(tau_hi, p.tau);
    }
  }
  const double span = tau_hi > tau_lo ? tau_hi - tau_lo : 1.0;
  Svg svg(kHeight + 16.0 * static_cast<double>(d.curves.size()));
  svg.Text(kWidth / 2, 22, fmt::format("{} across thresholds", d.metric), "middle", "title");
  UnitAxes(svg, fmt::format("threshold tau ({:.2f} to {:.2f})", tau_lo, tau_hi), d.metric, false);
  for (std::size_t k = 0; k < d.curves.size(); ++k) {
    const auto& c = d.curves[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::vector<std::pair<double, double>> run;
    auto flush = [&] {
      if (!run.empty()) svg.Polyline(run, color);
      run.clear();
    };
    for (const auto& p : c.points) {
      if (!p.value) {
        flush();
        continue;
      }
      run.emplace_back(Px((p.tau - tau_lo) / span), Py(std::clamp(*p.value, 0.0, 1.0)));
    }
    flush();
    const double y = kHeight - 8 + 16.0 * static_cast<double>(k);
    svg.Raw(fmt::format("<rect x=\"{:.4f}\" y=\"{:.4f}\" width=\"12\" height=\"3\" fill=\"{}\"/>\n",
                        Px(0), y - 4, color));
    svg.Text(Px(0) + 18, y, c.measure);
  }
  return svg.Finish();
}

std::string SweepCsv(const SweepPlotData& d) {
  std::string out = fmt::format("# metric={}\nmeasure,tau,value,skipped\n", d.metric);
  for (const auto& c : d.curves) {
    auto points = c.points;
    std::stable_sort(points.begin(), points.end(),
                     [](const auto& a, const auto& b) { return a.tau < b.tau; });
    for (const auto& p : points) {
      out += fmt::format("{},{:.17g},{},{}\n", c.measure, p.tau,
                         p.value ? fmt::format("{:.17g}", *p.value) : std::string(),
                         p.value ? 0 : 1);
    }
  }
  return out;
}

std::string RenderCdDiagramSvg(const stats::CdDiagramData& d) {
  const std::size_t m = d.measures.size();
  const double height = 140.0 + 18.0 * static_cast<double>(m) + 10.0 * static_cast<double>(d.cliques.size());
  Svg svg(height);
  const double x0 = 60.0;
  const double x1 = kWidth - 60.0;
  const double axis_y = 60.0;
  auto rx = [&](double rank) {
    return m <= 1 ? x0 : x0 + (rank - 1.0) / static_cast<double>(m - 1) * (x1 - x0);
  };
  svg.Text(kWidth / 2, 22,
           fmt::format("Critical difference ({}, alpha={:.2f})", stats::PostHocName(d.posthoc), d.alpha),
           "middle", "title");
  svg.Text(kWidth / 2, 38, fmt::format("Friedman chi2={:.3f}, p={:.4g}", d.friedman_statistic, d.friedman_p),
           "middle");
  svg.Line(x0, axis_y, x1, axis_y, "frame");
  for (std::size_t r = 1; r <= m; ++r) {
    svg.Line(rx(static_cast<double>(r)), axis_y - 4, rx(static_cast<double>(r)), axis_y, "frame");
    svg.Text(rx(static_cast<double>(r)), axis_y - 8, fmt::format("{}", r), "middle");
  }
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d.average_ranks[a] < d.average_ranks[b]; });
  double y = axis_y + 24.0 + 10.0 * static_cast<double>(d.cliques.size());
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = order[k];
    const double x = rx(d.average_ranks[i]);
    const bool left = k < (m + 1) / 2;
    const double end = left ? x0 - 10 : x1 + 10;
    svg.Line(x, axis_y, x, y, "ref");
    svg.Line(x, y, end, y, "ref");
    svg.Text(left ? end - 4 : end + 4, y + 4,
             fmt::format("{} ({:.2f})", d.measures[i], d.average_ranks[i]), left ? "end" : "start");
    y += 18.0;
  }
  double bar_y = axis_y + 14.0;
  for (const auto& clique : d.cliques) {
    if (clique.size() < 2) continue;
    const double lo = rx(d.average_ranks[clique.front()]);
    const double hi = rx(d.average_ranks[clique.back()]);
    svg.Raw(fmt::format("<line x1=\"{:.4f}\" y1=\"{:.4f}\" x2=\"{:.4f}\" y2=\"{:.4f}\" stroke=\"#000\" stroke-width=\"4\"/>\n",
                        lo - 3, bar_y, hi + 3, bar_y));
    bar_y += 10.0;
  }
  return svg.Finish();
}

void WriteTextFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << contents;
}

}  // namespace rankcal::render
