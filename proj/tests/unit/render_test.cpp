#include "rankcal/render.hpp"

#include <cmath>

#include "rankcal/random.hpp"
#include "rankcal/synth.hpp"
#include "test_util.hpp"

namespace rankcal::render {
namespace {

using rankcal::testing::MakeSeries;
using rankcal::testing::ThrowsCode;

MeasureSeries Random(Rng& rng, std::size_t n) {
  MeasureSeries s;
  s.name = "rand";
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    s.push_back(u, std::clamp(std::sin(6 * u) * 0.5 + 0.5 + rng.Uniform(-0.3, 0.3), 0.0, 1.0));
  }
  return s;
}

TEST(Indication, CalibratedSeriesHasNoShading) {
  MeasureSeries s;
  for (int i = 0; i < 400; ++i) s.push_back(i, 1.0 - i / 400.0);
  const auto d = IndicationDiagram(s, 20);
  ASSERT_EQ(d.bars.size(), 20u);
  for (const auto& bar : d.bars) EXPECT_DOUBLE_EQ(bar.height, bar.reference);
  EXPECT_DOUBLE_EQ(d.ShadedArea(), 0.0);
}

TEST(Indication, ConstantCorrectnessShadesHalf) {
  Rng rng(1);
  MeasureSeries s;
  for (int i = 0; i < 2000; ++i) s.push_back(rng.Uniform(), 0.5);
  const auto d = IndicationDiagram(s, 20);
  EXPECT_NEAR(d.ShadedArea(), 0.5, 1e-12);
  EXPECT_NEAR(d.OverOptimisticArea() + d.PessimisticArea(), d.ShadedArea(), 1e-12);
}

TEST(Indication, AreaEqualsRce) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto s = Random(rng, 20 + rng.Index(2000));
    const std::size_t b = 2 + rng.Index(30);
    if (s.size() < b) continue;
    const auto d = IndicationDiagram(s, b);
    EXPECT_NEAR(d.ShadedArea(), assessment::EmpiricalRce(s, b).value, 1e-9);
    for (const auto& bar : d.bars) {
      EXPECT_GE(bar.height, 0.0);
      EXPECT_LE(bar.height, 1.0);
    }
  }
}

TEST(Indication, CsvRoundTripAndDeterministicSvg) {
  Rng rng(3);
  const auto d = IndicationDiagram(Random(rng, 500), 20);
  const auto back = ParseIndicationCsv(IndicationCsv(d));
  ASSERT_EQ(back.bars.size(), d.bars.size());
  for (std::size_t b = 0; b < d.bars.size(); ++b) {
    EXPECT_EQ(back.bars[b].height, d.bars[b].height);
    EXPECT_EQ(back.bars[b].x_lo, d.bars[b].x_lo);
    EXPECT_EQ(back.bars[b].count, d.bars[b].count);
  }
  EXPECT_EQ(back.rce, d.rce);
  EXPECT_EQ(RenderIndicationSvg(back), RenderIndicationSvg(d));
  const auto svg = RenderIndicationSvg(d);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("<style>"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Reliability, Examples) {
  Rng rng(4);
  MeasureSeries cal;
  cal.orientation = Orientation::kConfidence;
  for (int i = 0; i < 200; ++i) {
    const double c = rng.Uniform();
    cal.push_back(c, c);
  }
  for (const auto& b : ReliabilityDiagram(cal, 10).bins) EXPECT_NEAR(b.confidence, b.accuracy, 1e-12);

  const auto flat = MakeSeries(std::vector<double>(40, 0.7), std::vector<double>(40, 1.0), Orientation::kConfidence);
  const auto d = ReliabilityDiagram(flat, 4);
  for (const auto& b : d.bins) {
    EXPECT_DOUBLE_EQ(b.confidence, 0.7);
    EXPECT_NEAR(b.accuracy - b.confidence, 0.3, 1e-12);
  }

  const auto case1 = synth::GenerateCase1(0.2, 20000, 5);
  for (const auto& b : ReliabilityDiagram(case1.series, 20).bins) EXPECT_NEAR(b.accuracy, 0.7, 1e-12);
  EXPECT_NE(ReliabilityCsv(d).find("gap"), std::string::npos);
  EXPECT_EQ(RenderReliabilitySvg(d), RenderReliabilitySvg(ReliabilityDiagram(flat, 4)));
}

TEST(Sweep, ConstantCurveAndCrossings) {
  // Dyadic grid values print exactly.
  SweepCurve flat{"flat", {{0.5, 0.625}, {0.25, 0.625}, {0.75, 0.625}}};
  auto data = SweepPlot("auroc", {flat});
  const auto csv = SweepCsv(data);
  EXPECT_LT(csv.find("flat,0.25,0.625,0"), csv.find("flat,0.5,0.625,0")) << csv;
  EXPECT_LT(csv.find("flat,0.5,0.625,0"), csv.find("flat,0.75,0.625,0")) << csv;

  SweepCurve up{"up", {{0.25, 0.375}, {0.5, 0.5}, {0.75, 0.75}}};
  SweepCurve down{"down", {{0.25, 0.75}, {0.5, 0.5}, {0.75, std::nullopt}}};
  data = SweepPlot("auroc", {up, down});
  const auto crossed = SweepCsv(data);
  EXPECT_LT(crossed.find("up,0.25,0.375,0"), crossed.find("up,0.75,0.75,0")) << crossed;
  EXPECT_LT(crossed.find("down,0.25,0.75,0"), crossed.find("down,0.5,0.5,0")) << crossed;
  EXPECT_NE(crossed.find("down,0.75,,1"), std::string::npos) << crossed;
  EXPECT_FALSE(RenderSweepSvg(data).empty());

  EXPECT_TRUE(ThrowsCode([] { SweepPlot("auroc", {}); }, ErrorCode::kInvalidArgument));
  EXPECT_TRUE(ThrowsCode([] { SweepPlot("auroc", {SweepCurve{"e", {}}}); }, ErrorCode::kInvalidArgument));
}

TEST(CdDiagramSvg, ListsMeasures) {
  std::vector<std::vector<double>> table(10, std::vector<double>{0.1, 0.2});
  for (std::size_t t = 0; t < 10; ++t) table[t][1] += 0.01 * t;
  const auto cd = stats::CdDiagram(table, {"alpha", "beta"});
  const auto svg = RenderCdDiagramSvg(cd);
  EXPECT_NE(svg.find("alpha"), std::string::npos);
  EXPECT_NE(svg.find("beta"), std::string::npos);
}

}  // namespace
}  // namespace rankcal::render
