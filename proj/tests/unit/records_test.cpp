#include "rankcal/records.hpp"

#include <sstream>

#include "rankcal/random.hpp"
#include "test_util.hpp"

namespace rankcal::records {
namespace {

using rankcal::testing::ThrowsCode;

Dataset Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseJsonl(in);
}

const char* kMinimal =
    R"({"id":"q1","question":"who?","references":["roberta flack"],"primary_response_index":0,)"
    R"("responses":[{"text":"roberta flack","token_logprobs":[-0.1,-0.2],"cluster_id":0,)"
    R"("verbalized_confidence":0.9,"correctness":{}},{"text":"aretha","token_logprobs":[-1.5],)"
    R"("cluster_id":1,"verbalized_confidence":null,"correctness":{}}],"affinity":[[1,0.2],[0.2,1]]})";

TEST(ParseJsonl, MinimalRecord) {
  const auto ds = Parse(std::string(kMinimal) + "\n");
  ASSERT_EQ(ds.records.size(), 1u);
  const auto& r = ds.records[0];
  EXPECT_EQ(r.id, "q1");
  EXPECT_EQ(r.responses.size(), 2u);
  ASSERT_TRUE(r.affinity.has_value());
  EXPECT_DOUBLE_EQ((*r.affinity)[0][1], 0.2);
  EXPECT_EQ(r.primary().text, "roberta flack");
  EXPECT_FALSE(r.responses[1].verbalized_confidence.has_value());
}

TEST(ParseJsonl, AsymmetricAffinityRejected) {
  const std::string line =
      R"({"id":"a","responses":[{"text":"x"},{"text":"y"}],"affinity":[[1.0,0.3],[0.4,1.0]]})";
  EXPECT_TRUE(ThrowsCode([&] { Parse(line); }, ErrorCode::kAsymmetricAffinity));
}

TEST(ParseJsonl, EmptyInput) {
  EXPECT_TRUE(Parse("").records.empty());
  EXPECT_TRUE(Parse("\n\n").records.empty());
}

TEST(ParseJsonl, ErrorsCarryLineNumbers) {
  const std::string text = std::string(kMinimal) + "\n{not json\n";
  try {
    Parse(text);
    FAIL() << "expected MalformedLine";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedLine);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_TRUE(ThrowsCode([] { Parse(R"({"responses":[]})"); }, ErrorCode::kSchemaViolation));
  EXPECT_TRUE(ThrowsCode([] { Parse(R"({"id":"a"})"); }, ErrorCode::kSchemaViolation));
  EXPECT_TRUE(ThrowsCode([] { Parse(R"({"id":"a","responses":[{"text":1}]})"); },
                         ErrorCode::kSchemaViolation));
}

TEST(ParseJsonl, DuplicateId) {
  const std::string text = std::string(kMinimal) + "\n" + kMinimal + "\n";
  EXPECT_TRUE(ThrowsCode([&] { Parse(text); }, ErrorCode::kDuplicateId));
}

TEST(ParseJsonl, DirectedAffinityIsSymmetrized) {
  const auto ds = Parse(
      R"({"id":"a","responses":[{"text":"x"},{"text":"y"}],"affinity_directed":[[1,0.2],[0.8,1]]})");
  ASSERT_TRUE(ds.records[0].affinity);
  EXPECT_DOUBLE_EQ((*ds.records[0].affinity)[0][1], 0.5);
  EXPECT_DOUBLE_EQ((*ds.records[0].affinity)[1][0], 0.5);
}

TEST(ParseJsonl, PositiveLogprobWarns) {
  const auto ds = Parse(R"({"id":"a","responses":[{"text":"x","token_logprobs":[0.001]}]})");
  EXPECT_EQ(ds.warnings.size(), 1u);
}

TEST(ParseJsonl, MetaHeader) {
  const auto ds = Parse("{\"meta\":{\"source\":\"unit\",\"k\":3}}\n" + std::string(kMinimal));
  EXPECT_EQ(ds.meta.at("source"), "unit");
  EXPECT_EQ(ds.meta.at("k"), "3");
  EXPECT_EQ(ds.records.size(), 1u);
}

TEST(SymmetrizeAffinity, Examples) {
  EXPECT_EQ(SymmetrizeAffinity({{1, 0.2}, {0.8, 1}}), (Matrix{{1, 0.5}, {0.5, 1}}));
  const Matrix eye{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(SymmetrizeAffinity(eye), eye);
  const Matrix fixed{{1, 0.3, 0.9}, {0.3, 1, 0.1}, {0.9, 0.1, 1}};
  EXPECT_EQ(SymmetrizeAffinity(fixed), fixed);
  EXPECT_TRUE(ThrowsCode([] { SymmetrizeAffinity({{1, 0}, {0}}); }, ErrorCode::kNotSquare));
}

TEST(SymmetrizeAffinity, Idempotent) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + rng.Index(8);
    Matrix raw(k, std::vector<double>(k));
    for (auto& row : raw) {
      for (double& v : row) v = rng.Uniform();
    }
    const auto once = SymmetrizeAffinity(raw);
    EXPECT_EQ(SymmetrizeAffinity(once), once);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) EXPECT_EQ(once[i][j], once[j][i]);
    }
  }
}

Dataset RandomDataset(Rng& rng) {
  Dataset ds;
  ds.meta["origin"] = "random";
  const std::size_t n = 1 + rng.Index(6);
  for (std::size_t i = 0; i < n; ++i) {
    GenerationRecord r;
    r.id = "r" + std::to_string(i);
    r.question = "q \"" + std::to_string(rng.Uniform()) + "\" ü";
    for (std::size_t m = rng.Index(3); m > 0; --m) r.references.push_back("ref " + std::to_string(m));
    const std::size_t k = 1 + rng.Index(4);
    for (std::size_t j = 0; j < k; ++j) {
      ResponseSample s;
      s.text = "resp\t" + std::to_string(j);
      for (std::size_t t = rng.Index(5); t > 0; --t) s.token_logprobs.push_back(-rng.Uniform(0, 5));
      if (rng.Bernoulli(0.5)) s.cluster_id = static_cast<int>(rng.Index(3));
      if (rng.Bernoulli(0.5)) s.verbalized_confidence = rng.Uniform();
      if (rng.Bernoulli(0.5)) s.correctness["bert"] = rng.Uniform();
      if (rng.Bernoulli(0.3)) s.measure_value = rng.Uniform(-3, 3);
      r.responses.push_back(std::move(s));
    }
    r.primary_response_index = rng.Index(k);
    if (rng.Bernoulli(0.5)) {
      Matrix w(k, std::vector<double>(k, 0.0));
      for (std::size_t a = 0; a < k; ++a) {
        w[a][a] = 1.0;
        for (std::size_t b = a + 1; b < k; ++b) w[a][b] = w[b][a] = rng.Uniform();
      }
      r.affinity = w;
    }
    ds.records.push_back(std::move(r));
  }
  return ds;
}

TEST(Serialize, RoundTrip) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ds = RandomDataset(rng);
    const auto back = Parse(SerializeJsonl(ds));
    EXPECT_EQ(back.records, ds.records);
    EXPECT_EQ(back.meta, ds.meta);
    EXPECT_EQ(SerializeJsonl(back), SerializeJsonl(ds));
  }
}

}  // namespace
}  // namespace rankcal::records
