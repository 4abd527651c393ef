#include "rankcal/correctness.hpp"

#include "rankcal/random.hpp"
#include "test_util.hpp"

namespace rankcal::correctness {
namespace {

using rankcal::testing::ThrowsCode;

double Rouge1(std::string_view c, std::string_view r) { return RougeN(Normalize(c), Normalize(r), 1); }
double RougeLText(std::string_view c, std::string_view r) { return RougeL(Normalize(c), Normalize(r)); }

TEST(Normalize, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(Normalize("  Roberta,  FLACK! "), (std::vector<std::string>{"roberta", "flack"}));
  EXPECT_TRUE(Normalize("...").empty());
}

TEST(RougeN, Examples) {
  EXPECT_DOUBLE_EQ(Rouge1("roberta flack", "roberta flack"), 1.0);
  EXPECT_DOUBLE_EQ(Rouge1("brad pitt", "christian slater"), 0.0);
  // 2 shared unigrams; precision 2/3, recall 2/3.
  EXPECT_NEAR(Rouge1("the penny red", "penny red stamp"), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(Rouge1("roberta", ""), 0.0);
  EXPECT_DOUBLE_EQ(RougeN(Normalize("the penny red"), Normalize("penny red stamp"), 1,
                          RougeVariant::kRecall),
                   2.0 / 3.0);
}

TEST(RougeN, ClipsRepeatedTokens) {
  // candidate "a a a" vs "a b": clipped overlap 1, precision 1/3, recall 1/2.
  EXPECT_NEAR(Rouge1("a a a", "a b"), 2 * (1.0 / 3) * 0.5 / (1.0 / 3 + 0.5), 1e-15);
}

TEST(RougeL, Examples) {
  EXPECT_DOUBLE_EQ(RougeLText("the penny black", "The Penny Black."), 1.0);
  EXPECT_DOUBLE_EQ(RougeLText("brad pitt", "christian slater"), 0.0);
  EXPECT_EQ(LcsLength(Normalize("a b c d"), Normalize("a c d")), 3u);
  // precision 3/4, recall 1.
  EXPECT_NEAR(RougeLText("a b c d", "a c d"), 6.0 / 7.0, 1e-15);
  EXPECT_NEAR(RougeL(Normalize("a b c d"), Normalize("a c d"), RougeVariant::kRecall), 1.0, 1e-15);
}

std::size_t BruteLcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    std::size_t j = 0;
    std::size_t len = 0;
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      else { ++j; ++len; }
    }
    if (ok) best = std::max(best, len);
  }
  return best;
}

TEST(RougeL, LcsMatchesSubsetEnumeration) {
  Rng rng(3);
  const std::vector<std::string> vocab{"a", "b", "c"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> a(rng.Index(9)), b(rng.Index(9));
    for (auto& t : a) t = vocab[rng.Index(3)];
    for (auto& t : b) t = vocab[rng.Index(3)];
    EXPECT_EQ(LcsLength(a, b), BruteLcs(a, b));
    const double s = RougeL(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

records::GenerationRecord Record(std::vector<std::string> refs, std::string text) {
  records::GenerationRecord r;
  r.id = "x";
  r.references = std::move(refs);
  records::ResponseSample s;
  s.text = std::move(text);
  r.responses.push_back(s);
  return r;
}

TEST(Score, MaxOverReferences) {
  CorrectnessSpec spec;
  spec.kind = Kind::kRouge1;
  // per-reference scores 0.4 (precision 1, recall 1/4) and 1.0.
  const auto r = Record({"alpha beta gamma delta", "alpha"}, "alpha");
  const double low = ScorePair("alpha", "alpha beta gamma delta", spec);
  EXPECT_NEAR(low, 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(Score(r, spec), 1.0);
}

TEST(Score, Precomputed) {
  auto r = Record({}, "x");
  r.responses[0].correctness["bert"] = 0.73;
  const auto spec = CorrectnessSpec::Parse("pre:bert");
  EXPECT_DOUBLE_EQ(Score(r, spec), 0.73);
  EXPECT_TRUE(ThrowsCode([&] { Score(r, CorrectnessSpec::Parse("pre:meteor")); },
                         ErrorCode::kMissingPrecomputed));
}

TEST(Score, ZeroReferencesWarns) {
  const auto r = Record({}, "anything");
  std::vector<std::string> warnings;
  EXPECT_DOUBLE_EQ(Score(r, CorrectnessSpec::Parse("rougeL"), &warnings), 0.0);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Score, MonotoneUnderAddedReferences) {
  Rng rng(5);
  const std::vector<std::string> vocab{"red", "penny", "black", "stamp", "the"};
  auto sentence = [&] {
    std::string s;
    for (std::size_t i = 1 + rng.Index(4); i > 0; --i) s += vocab[rng.Index(vocab.size())] + " ";
    return s;
  };
  for (const char* kind : {"rougeL", "rouge1", "exact"}) {
    const auto spec = CorrectnessSpec::Parse(kind);
    for (int trial = 0; trial < 50; ++trial) {
      auto r = Record({sentence()}, sentence());
      double prev = Score(r, spec);
      for (int add = 0; add < 3; ++add) {
        r.references.push_back(sentence());
        const double next = Score(r, spec);
        EXPECT_GE(next, prev);
        prev = next;
      }
    }
  }
}

TEST(Binarize, Examples) {
  EXPECT_EQ(Binarize(0.5, 0.5), 1);
  EXPECT_EQ(Binarize(0.49, 0.5), 0);
  EXPECT_EQ(Binarize(1.0, 0.0), 1);
}

TEST(Binarize, Monotone) {
  for (double a = 0.0; a <= 1.0; a += 0.05) {
    for (double t = 0.0; t <= 1.0; t += 0.05) {
      EXPECT_LE(Binarize(a, t), Binarize(a + 0.05, t));
      EXPECT_GE(Binarize(a, t), Binarize(a, t + 0.05));
    }
  }
}

TEST(CorrectnessSpec, ParseAndPrint) {
  for (const char* s : {"rougeL", "rouge1", "exact", "pre:bert"}) {
    EXPECT_EQ(CorrectnessSpec::Parse(s).ToString(), s);
  }
  EXPECT_TRUE(ThrowsCode([] { CorrectnessSpec::Parse("bleu"); }, ErrorCode::kInvalidArgument));
}

}  // namespace
}  // namespace rankcal::correctness
