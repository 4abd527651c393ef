#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankcal/assessment.hpp"
#include "rankcal/comparestats.hpp"
#include "rankcal/series.hpp"

namespace rankcal::render {

// One bar of an indication diagram. The bar spans [x_lo, x_hi] on the
// value-percentile axis (its width is the bin's share of the points), its
// height is the correctness-rank percentile 1 - P(reg >= reg_b), and
// `reference` is the rank-calibrated level 1 - P(U <= u_b) (for confidence,
// 1 - P(C >= c_b)). The shaded gap |height - reference| times the width sums
// to the empirical RCE.
struct IndicationBar {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double height = 0.0;
  double reference = 0.0;
  std::size_t count = 0;

  double width() const { return x_hi - x_lo; }
  double deviation() const { return height - reference; }
  // Bar below the reference: outcomes worse than the measure's rank promises.
  bool over_optimistic() const { return height < reference; }
};

struct IndicationDiagramData {
  std::string measure;
  Orientation orientation = Orientation::kUncertainty;
  std::vector<IndicationBar> bars;
  double rce = 0.0;

  double ShadedArea() const;
  double OverOptimisticArea() const;
  double PessimisticArea() const;
};

IndicationDiagramData IndicationDiagram(const MeasureSeries& series,
                                        std::size_t bins = assessment::kDefaultBins);
std::string RenderIndicationSvg(const IndicationDiagramData& data);
std::string IndicationCsv(const IndicationDiagramData& data);
IndicationDiagramData ParseIndicationCsv(std::string_view csv);

struct ReliabilityBin {
  double confidence = 0.0;
  double accuracy = 0.0;
  std::size_t count = 0;
};

struct ReliabilityDiagramData {
  std::string measure;
  std::vector<ReliabilityBin> bins;
  double ece = 0.0;
};

ReliabilityDiagramData ReliabilityDiagram(const MeasureSeries& confidence_series,
                                          std::size_t bins = assessment::kDefaultBins);
std::string RenderReliabilitySvg(const ReliabilityDiagramData& data);
std::string ReliabilityCsv(const ReliabilityDiagramData& data);

struct SweepCurve {
  std::string measure;
  std::vector<assessment::SweepPoint> points;
};

struct SweepPlotData {
  std::string metric;
  std::vector<SweepCurve> curves;
};

// Throws InvalidArgument when there are no curves or the tau grid is empty.
SweepPlotData SweepPlot(std::string metric, std::vector<SweepCurve> curves);
std::string RenderSweepSvg(const SweepPlotData& data);
// Rows grouped by measure in input order, tau ascending within a measure.
std::string SweepCsv(const SweepPlotData& data);

std::string RenderCdDiagramSvg(const stats::CdDiagramData& data);

void WriteTextFile(const std::string& path, std::string_view contents);

}  // namespace rankcal::render
