#ifndef FWI_INGEST_H_
#define FWI_INGEST_H_

// Readers for reviewer bid files and demographic CSV tables.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fwi/assignment.h"
#include "fwi/sortition.h"

namespace fwi::ingest {

enum class BidLabel { kYes, kMaybe, kNoResponse, kNo };

// yes 1, maybe 0.5, no_response 0, no 0.
double LabelWeight(BidLabel label);
std::string_view LabelName(BidLabel label);
// Case-insensitive; "no response" and "no-response" are accepted too.
std::optional<BidLabel> ParseLabel(std::string_view text);

struct Bid {
  int reviewer = 0;  // index into BidCorpus::reviewers
  int paper = 0;     // index into BidCorpus::papers
  BidLabel label = BidLabel::kNoResponse;

  friend bool operator==(const Bid&, const Bid&) = default;
};

// Ids are listed in order of first appearance; bids in file order. Pairs
// without a bid count as no_response.
struct BidCorpus {
  std::vector<std::string> reviewers;
  std::vector<std::string> papers;
  std::vector<Bid> bids;

  friend bool operator==(const BidCorpus&, const BidCorpus&) = default;
};

// Lines are `reviewer_id,paper_id,label`; an optional first line
// `reviewer_id,paper_id,label` is a header. Blank lines are ignored.
// Unknown labels, malformed lines and repeated pairs raise ParseError with
// the line number; a file with no bids raises ParseError.
BidCorpus ParseBidsText(std::string_view text);
BidCorpus ParseBids(const std::string& path);

// Header plus one line per bid, in corpus order.
std::string SerializeBids(const BidCorpus& corpus);

// Weight matrix from the label weights (missing pairs 0).
assignment::BipartiteInstance BidsToInstance(const BidCorpus& corpus,
                                             int demand, int load_cap);

// ceil(3 n_papers / n_reviewers): every reviewer may take three times the
// average share.
int DefaultLoadCap(int n_reviewers, int n_papers);

struct FeatureConfig {
  std::vector<std::string> numeric;
  std::vector<std::string> categorical;
  // Standardize numeric columns to zero mean, unit variance.
  bool scale = false;

  // age, education-num, hours-per-week; marital-status, relationship, race,
  // sex.
  static FeatureConfig Adult();
};

struct DemographicRecord {
  std::vector<double> numeric;
  std::vector<std::string> categorical;

  friend auto operator<=>(const DemographicRecord&,
                          const DemographicRecord&) = default;
};

// Distinct records, sorted, restricted to the configured features.
struct DemographicTable {
  FeatureConfig config;
  std::vector<DemographicRecord> rows;
  std::size_t dropped_missing = 0;     // rows with "?" in a used feature
  std::size_t dropped_duplicates = 0;  // rows equal to an earlier one
};

// CSV with a header row (RFC 4180 quoting; unquoted fields are trimmed).
// Missing columns, ragged rows and non-numeric values in numeric columns
// raise ParseError.
DemographicTable ReadDemographicsText(std::string_view text,
                                      const FeatureConfig& config);
DemographicTable ReadDemographics(const std::string& path,
                                  const FeatureConfig& config);

// Numeric columns first (scaled if configured), then one one-hot block per
// categorical feature with categories in sorted order.
sortition::PointSet ToPointSet(const DemographicTable& table);

sortition::PointSet ParseDemographics(const std::string& path,
                                      const FeatureConfig& config);

// Header from the config, then one line per row.
std::string SerializeDemographics(const DemographicTable& table);

// Splits one CSV document into records of fields. Records carry the 1-based
// line number on which they start.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRecord> SplitCsv(std::string_view text);

std::string ReadFile(const std::string& path);

}  // namespace fwi::ingest

#endif  // FWI_INGEST_H_
