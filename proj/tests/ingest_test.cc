#include "fwi/ingest.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

namespace fwi::ingest {
namespace {

const std::string kDataDir = FWI_DATA_DIR;

FeatureConfig TwoColumns() { return {{"x"}, {"c"}, false}; }

TEST(BidLabelTest, WeightsAndNames) {
  EXPECT_EQ(LabelWeight(BidLabel::kYes), 1.0);
  EXPECT_EQ(LabelWeight(BidLabel::kMaybe), 0.5);
  EXPECT_EQ(LabelWeight(BidLabel::kNoResponse), 0.0);
  EXPECT_EQ(LabelWeight(BidLabel::kNo), 0.0);
  EXPECT_EQ(ParseLabel("YES"), BidLabel::kYes);
  EXPECT_EQ(ParseLabel(" Maybe "), BidLabel::kMaybe);
  EXPECT_EQ(ParseLabel("no response"), BidLabel::kNoResponse);
  EXPECT_EQ(ParseLabel("no-response"), BidLabel::kNoResponse);
  EXPECT_EQ(ParseLabel("no_response"), BidLabel::kNoResponse);
  EXPECT_EQ(ParseLabel("perhaps"), std::nullopt);
}

TEST(ParseBidsTest, SingleLine) {
  const BidCorpus c = ParseBidsText("r1,p1,yes\n");
  EXPECT_EQ(c.reviewers, std::vector<std::string>{"r1"});
  EXPECT_EQ(c.papers, std::vector<std::string>{"p1"});
  ASSERT_EQ(c.bids.size(), 1u);
  EXPECT_EQ(c.bids[0].label, BidLabel::kYes);
}

TEST(ParseBidsTest, RejectsUnknownLabelWithLineNumber) {
  try {
    ParseBidsText("r1,p1,perhaps\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
  try {
    ParseBidsText("reviewer_id,paper_id,label\nr1,p1,yes\n\nr1,p2,nah\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(ParseBidsTest, RejectsEmptyMalformedAndRepeated) {
  EXPECT_THROW(ParseBidsText(""), ParseError);
  EXPECT_THROW(ParseBidsText("reviewer_id,paper_id,label\n"), ParseError);
  EXPECT_THROW(ParseBidsText("r1,p1\n"), ParseError);
  EXPECT_THROW(ParseBidsText("r1,p1,yes\nr1,p1,no\n"), ParseError);
  EXPECT_THROW(ParseBids("/nonexistent/bids.csv"), IoError);
}

TEST(BidsToInstanceTest, LabelWeights) {
  const BidCorpus c = ParseBidsText(
      "r1,p1,yes\nr1,p2,maybe\nr2,p1,no\nr2,p3,no_response\n");
  const auto inst = BidsToInstance(c, 1, 2);
  EXPECT_EQ(inst.n_left(), 2);
  EXPECT_EQ(inst.n_right(), 3);
  EXPECT_EQ(inst.weight(0, 0), 1.0);
  EXPECT_EQ(inst.weight(0, 1), 0.5);
  EXPECT_EQ(inst.weight(0, 2), 0.0);  // missing
  EXPECT_EQ(inst.weight(1, 0), 0.0);
  EXPECT_EQ(inst.weight(1, 2), 0.0);
  EXPECT_THROW(BidsToInstance(c, 3, 5), InfeasibleError);

  const auto all_yes =
      BidsToInstance(ParseBidsText("a,x,yes\na,y,yes\nb,x,yes\nb,y,yes\n"), 1, 1);
  for (double w : all_yes.weights()) EXPECT_EQ(w, 1.0);
}

TEST(BidsToInstanceTest, ConferenceShape) {
  std::string text;
  for (int r = 0; r < 201; ++r) text += "r" + std::to_string(r) + ",p0,no\n";
  for (int p = 1; p < 613; ++p) text += "r0,p" + std::to_string(p) + ",maybe\n";
  const BidCorpus c = ParseBidsText(text);
  const int cap = DefaultLoadCap(201, 613);
  EXPECT_EQ(cap, 10);  // ceil(3 * 613 / 201)
  const auto inst = BidsToInstance(c, 3, cap);
  EXPECT_EQ(inst.n_left(), 201);
  EXPECT_EQ(inst.n_right(), 613);
}

TEST(BidsRoundTripTest, SerializeThenParse) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    BidCorpus c;
    const int n_r = 1 + rng() % 6;
    const int n_p = 1 + rng() % 6;
    for (int r = 0; r < n_r; ++r) c.reviewers.push_back("rev " + std::to_string(r) + (r % 2 ? ",x" : ""));
    for (int p = 0; p < n_p; ++p) c.papers.push_back("p\"" + std::to_string(p));
    std::vector<std::pair<int, int>> pairs;
    for (int r = 0; r < n_r; ++r) {
      for (int p = 0; p < n_p; ++p) pairs.push_back({r, p});
    }
    std::shuffle(pairs.begin(), pairs.end(), rng);
    // Keep first-appearance order consistent with the id lists.
    std::stable_sort(pairs.begin(), pairs.end());
    for (auto [r, p] : pairs) {
      if (p > 0 && rng() % 3 == 0) continue;
      c.bids.push_back({r, p, static_cast<BidLabel>(rng() % 4)});
    }
    // Papers must first appear in list order; rebuild the list accordingly.
    std::vector<std::string> order;
    std::vector<int> remap(n_p, -1);
    for (auto& b : c.bids) {
      if (remap[b.paper] < 0) {
        remap[b.paper] = static_cast<int>(order.size());
        order.push_back(c.papers[b.paper]);
      }
      b.paper = remap[b.paper];
    }
    c.papers = order;
    EXPECT_EQ(ParseBidsText(SerializeBids(c)), c);
  }
}

TEST(BundledBidsTest, ParsesAndIsFeasible) {
  const BidCorpus c = ParseBids(kDataDir + "/bids_small.csv");
  EXPECT_EQ(c.reviewers.size(), 12u);
  EXPECT_EQ(c.papers.size(), 30u);
  const auto inst = BidsToInstance(c, 3, DefaultLoadCap(12, 30));
  EXPECT_EQ(inst.load_cap(), 8);
}

TEST(SplitCsvTest, QuotingAndLines) {
  const auto records = SplitCsv("a, b ,\"c,d\"\n\"x\"\"y\",\"multi\nline\",z\n");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].fields, (std::vector<std::string>{"a", "b", "c,d"}));
  EXPECT_EQ(records[1].fields,
            (std::vector<std::string>{"x\"y", "multi\nline", "z"}));
  EXPECT_EQ(records[1].line, 2u);
  EXPECT_THROW(SplitCsv("\"open\n"), ParseError);
  EXPECT_EQ(SplitCsv("a\r\nb\r\n")[1].fields[0], "b");
}

TEST(DemographicsTest, DedupAndDimension) {
  const auto table = ReadDemographicsText("x,c,unused\n1,a,q\n1,a,r\n2,b,q\n3,c,q\n",
                                          TwoColumns());
  EXPECT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.dropped_duplicates, 1u);
  const auto points = ToPointSet(table);
  EXPECT_EQ(points.size(), 3u);
  EXPECT_EQ(points.dim(), 4u);  // 1 numeric + 3 categories

  const auto twins = ReadDemographicsText("x,c\n5,a\n5,a\n", TwoColumns());
  EXPECT_EQ(ToPointSet(twins).size(), 1u);
}

TEST(DemographicsTest, OneHotBlocksSumToOne) {
  const FeatureConfig config{{"n"}, {"c1", "c2"}, false};
  const auto points = ToPointSet(ReadDemographicsText(
      "n,c1,c2\n0,a,x\n1,b,x\n2,a,y\n3,c,z\n", config));
  ASSERT_EQ(points.dim(), 1u + 3u + 3u);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto row = points.Row(i);
    double first = 0.0;
    double second = 0.0;
    for (std::size_t t = 1; t < 4; ++t) first += row[t];
    for (std::size_t t = 4; t < 7; ++t) second += row[t];
    EXPECT_EQ(first, 1.0);
    EXPECT_EQ(second, 1.0);
    EXPECT_EQ(row[0], static_cast<double>(i));
  }
}

TEST(DemographicsTest, DedupIsOrderIndependent) {
  std::vector<std::string> rows = {"1,a", "2,b", "1,a", "3,a", "2,c", "3,a"};
  Rng rng(4);
  std::optional<std::vector<double>> reference;
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(rows.begin(), rows.end(), rng);
    std::string text = "x,c\n";
    for (const auto& r : rows) text += r + "\n";
    const auto points = ToPointSet(ReadDemographicsText(text, TwoColumns()));
    std::vector<double> coords(points.coords().begin(), points.coords().end());
    if (!reference) reference = coords;
    EXPECT_EQ(coords, *reference);
  }
}

TEST(DemographicsTest, Errors) {
  EXPECT_THROW(ReadDemographicsText("x\n1\n", TwoColumns()), ParseError);
  try {
    ReadDemographicsText("x,c\n1,a\nabc,b\n", TwoColumns());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(ReadDemographicsText("x,c\n1,a,extra\n", TwoColumns()),
               ParseError);
  EXPECT_THROW(ReadDemographicsText("", TwoColumns()), ParseError);
  EXPECT_THROW(ReadDemographicsText("x,c\ninf,a\n", TwoColumns()), ParseError);
}

TEST(DemographicsTest, MissingMarkersDropRows) {
  const auto table =
      ReadDemographicsText("x,c,other\n1,?,a\n?,b,a\n2,b,?\n", TwoColumns());
  EXPECT_EQ(table.dropped_missing, 2u);
  EXPECT_EQ(table.rows.size(), 1u);
}

TEST(DemographicsTest, ScalingStandardizesNumericColumns) {
  FeatureConfig config = TwoColumns();
  config.scale = true;
  const auto points =
      ToPointSet(ReadDemographicsText("x,c\n1,a\n2,a\n3,a\n", config));
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    sum += points.Row(i)[0];
    sq += points.Row(i)[0] * points.Row(i)[0];
  }
  EXPECT_NEAR(sum, 0.0, 1e-12);
  EXPECT_NEAR(sq / 3, 1.0, 1e-12);
}

TEST(DemographicsTest, RoundTrip) {
  Rng rng(5);
  std::uniform_real_distribution<double> unit(-100, 100);
  const FeatureConfig config{{"a", "b"}, {"c", "d"}, false};
  for (int trial = 0; trial < 30; ++trial) {
    std::string text = "a,b,c,d\n";
    for (int r = 0; r < 15; ++r) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%.17g,%d,\"v,%d\",w%d\n", unit(rng),
                    static_cast<int>(rng() % 3), static_cast<int>(rng() % 3),
                    static_cast<int>(rng() % 2));
      text += buf;
    }
    const auto table = ReadDemographicsText(text, config);
    const auto again =
        ReadDemographicsText(SerializeDemographics(table), config);
    EXPECT_EQ(again.rows, table.rows);
    EXPECT_EQ(again.dropped_duplicates, 0u);
    EXPECT_EQ(again.dropped_missing, 0u);
  }
}

TEST(BundledDemographicsTest, SampleHas200DistinctPoints) {
  const auto table =
      ReadDemographics(kDataDir + "/adult_sample.csv", FeatureConfig::Adult());
  EXPECT_EQ(table.rows.size(), 200u);
  EXPECT_GT(table.dropped_missing, 0u);
  EXPECT_GT(table.dropped_duplicates, 0u);
  const auto points = ToPointSet(table);
  EXPECT_EQ(points.size(), 200u);
  EXPECT_GE(points.dim(), 3u + 4u);
}

}  // namespace
}  // namespace fwi::ingest
