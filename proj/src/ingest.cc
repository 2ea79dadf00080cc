#include "fwi/ingest.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fwi::ingest {
namespace {

constexpr std::string_view kBidHeader = "reviewer_id,paper_id,label";

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string QuoteField(const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string::npos ||
      (!field.empty() && (std::isspace(static_cast<unsigned char>(field.front())) ||
                          std::isspace(static_cast<unsigned char>(field.back()))));
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

bool IsBlank(const CsvRecord& record) {
  return record.fields.size() == 1 && record.fields[0].empty();
}

}  // namespace

double LabelWeight(BidLabel label) {
  switch (label) {
    case BidLabel::kYes:
      return 1.0;
    case BidLabel::kMaybe:
      return 0.5;
    case BidLabel::kNoResponse:
    case BidLabel::kNo:
      return 0.0;
  }
  return 0.0;
}

std::string_view LabelName(BidLabel label) {
  switch (label) {
    case BidLabel::kYes:
      return "yes";
    case BidLabel::kMaybe:
      return "maybe";
    case BidLabel::kNoResponse:
      return "no_response";
    case BidLabel::kNo:
      return "no";
  }
  return "no_response";
}

std::optional<BidLabel> ParseLabel(std::string_view text) {
  const std::string s = Lower(Trim(text));
  if (s == "yes") return BidLabel::kYes;
  if (s == "maybe") return BidLabel::kMaybe;
  if (s == "no_response" || s == "no response" || s == "no-response") {
    return BidLabel::kNoResponse;
  }
  if (s == "no") return BidLabel::kNo;
  return std::nullopt;
}

std::vector<CsvRecord> SplitCsv(std::string_view text) {
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    CsvRecord record;
    record.line = line;
    bool end_of_record = false;
    while (!end_of_record) {
      std::string field;
      // Leading whitespace before a quote is tolerated.
      std::size_t j = i;
      while (j < n && (text[j] == ' ' || text[j] == '\t')) ++j;
      if (j < n && text[j] == '"') {
        const std::size_t quote_line = line;
        i = j + 1;
        bool closed = false;
        while (i < n) {
          const char c = text[i];
          if (c == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field += '"';
              i += 2;
            } else {
              ++i;
              closed = true;
              break;
            }
          } else {
            if (c == '\n') ++line;
            field += c;
            ++i;
          }
        }
        if (!closed) throw ParseError("unterminated quoted field", quote_line);
        while (i < n && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) {
          ++i;
        }
        if (i < n && text[i] != ',' && text[i] != '\n') {
          throw ParseError("unexpected text after a quoted field", line);
        }
      } else {
        const std::size_t start = i;
        while (i < n && text[i] != ',' && text[i] != '\n') ++i;
        field = std::string(Trim(text.substr(start, i - start)));
      }
      record.fields.push_back(std::move(field));
      if (i >= n) {
        end_of_record = true;
      } else if (text[i] == ',') {
        ++i;
      } else {
        ++i;  // newline
        ++line;
        end_of_record = true;
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return buffer.str();
}

BidCorpus ParseBidsText(std::string_view text) {
  BidCorpus corpus;
  std::unordered_map<std::string, int> reviewer_index;
  std::unordered_map<std::string, int> paper_index;
  std::set<std::pair<int, int>> seen;
  bool first = true;
  for (const CsvRecord& record : SplitCsv(text)) {
    if (IsBlank(record)) continue;
    if (first) {
      first = false;
      if (record.fields.size() == 3 &&
          Lower(record.fields[0]) == "reviewer_id" &&
          Lower(record.fields[1]) == "paper_id" &&
          Lower(record.fields[2]) == "label") {
        continue;
      }
    }
    if (record.fields.size() != 3) {
      throw ParseError("expected reviewer_id,paper_id,label but found " +
                           std::to_string(record.fields.size()) + " fields",
                       record.line);
    }
    const std::string& reviewer = record.fields[0];
    const std::string& paper = record.fields[1];
    if (reviewer.empty() || paper.empty()) {
      throw ParseError("empty reviewer or paper id", record.line);
    }
    const auto label = ParseLabel(record.fields[2]);
    if (!label) {
      throw ParseError("unknown label '" + record.fields[2] + "'", record.line);
    }
    auto [r, r_new] = reviewer_index.try_emplace(
        reviewer, static_cast<int>(corpus.reviewers.size()));
    if (r_new) corpus.reviewers.push_back(reviewer);
    auto [p, p_new] =
        paper_index.try_emplace(paper, static_cast<int>(corpus.papers.size()));
    if (p_new) corpus.papers.push_back(paper);
    if (!seen.insert({r->second, p->second}).second) {
      throw ParseError("repeated bid for (" + reviewer + ", " + paper + ")",
                       record.line);
    }
    corpus.bids.push_back({r->second, p->second, *label});
  }
  if (corpus.bids.empty()) throw ParseError("bid file contains no bids", 0);
  return corpus;
}

BidCorpus ParseBids(const std::string& path) {
  return ParseBidsText(ReadFile(path));
}

std::string SerializeBids(const BidCorpus& corpus) {
  std::string out(kBidHeader);
  out += '\n';
  for (const Bid& bid : corpus.bids) {
    out += QuoteField(corpus.reviewers.at(bid.reviewer));
    out += ',';
    out += QuoteField(corpus.papers.at(bid.paper));
    out += ',';
    out += LabelName(bid.label);
    out += '\n';
  }
  return out;
}

assignment::BipartiteInstance BidsToInstance(const BidCorpus& corpus,
                                             int demand, int load_cap) {
  const int n_left = static_cast<int>(corpus.reviewers.size());
  const int n_right = static_cast<int>(corpus.papers.size());
  std::vector<double> weights(static_cast<std::size_t>(n_left) * n_right, 0.0);
  for (const Bid& bid : corpus.bids) {
    weights[static_cast<std::size_t>(bid.reviewer) * n_right + bid.paper] =
        LabelWeight(bid.label);
  }
  return assignment::BipartiteInstance(n_left, n_right, std::move(weights),
                                       demand, load_cap);
}

int DefaultLoadCap(int n_reviewers, int n_papers) {
  if (n_reviewers < 1 || n_papers < 0) {
    throw ParameterError("need at least one reviewer");
  }
  return (3 * n_papers + n_reviewers - 1) / n_reviewers;
}

FeatureConfig FeatureConfig::Adult() {
  return {{"age", "education-num", "hours-per-week"},
          {"marital-status", "relationship", "race", "sex"},
          false};
}

DemographicTable ReadDemographicsText(std::string_view text,
                                      const FeatureConfig& config) {
  if (config.numeric.empty() && config.categorical.empty()) {
    throw ParameterError("feature config selects no columns");
  }
  std::vector<CsvRecord> records = SplitCsv(text);
  auto next = records.begin();
  while (next != records.end() && IsBlank(*next)) ++next;
  if (next == records.end()) throw ParseError("demographic file is empty", 0);
  const CsvRecord& header = *next++;

  auto locate = [&](const std::string& name) {
    auto it = std::find(header.fields.begin(), header.fields.end(), name);
    if (it == header.fields.end()) {
      throw ParseError("missing column '" + name + "'", header.line);
    }
    return static_cast<std::size_t>(it - header.fields.begin());
  };
  std::vector<std::size_t> numeric_cols;
  std::vector<std::size_t> categorical_cols;
  for (const auto& name : config.numeric) numeric_cols.push_back(locate(name));
  for (const auto& name : config.categorical) {
    categorical_cols.push_back(locate(name));
  }

  DemographicTable table;
  table.config = config;
  std::set<DemographicRecord> distinct;
  for (; next != records.end(); ++next) {
    const CsvRecord& record = *next;
    if (IsBlank(record)) continue;
    if (record.fields.size() != header.fields.size()) {
      throw ParseError("expected " + std::to_string(header.fields.size()) +
                           " fields, found " +
                           std::to_string(record.fields.size()),
                       record.line);
    }
    auto missing = [&](std::size_t col) { return record.fields[col] == "?"; };
    if (std::any_of(numeric_cols.begin(), numeric_cols.end(), missing) ||
        std::any_of(categorical_cols.begin(), categorical_cols.end(), missing)) {
      ++table.dropped_missing;
      continue;
    }
    DemographicRecord row;
    for (std::size_t k = 0; k < numeric_cols.size(); ++k) {
      const std::string& field = record.fields[numeric_cols[k]];
      double value = 0.0;
      const char* begin = field.data();
      const char* end = begin + field.size();
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (field.empty() || ec != std::errc() || ptr != end ||
          !std::isfinite(value)) {
        throw ParseError("column '" + config.numeric[k] +
                             "' is not a finite number: '" + field + "'",
                         record.line);
      }
      row.numeric.push_back(value);
    }
    for (std::size_t col : categorical_cols) {
      row.categorical.push_back(record.fields[col]);
    }
    if (!distinct.insert(std::move(row)).second) ++table.dropped_duplicates;
  }
  table.rows.assign(distinct.begin(), distinct.end());
  return table;
}

DemographicTable ReadDemographics(const std::string& path,
                                  const FeatureConfig& config) {
  return ReadDemographicsText(ReadFile(path), config);
}

sortition::PointSet ToPointSet(const DemographicTable& table) {
  const std::size_t n = table.rows.size();
  if (n == 0) throw ParseError("no usable demographic rows", 0);
  const std::size_t n_numeric = table.config.numeric.size();
  const std::size_t n_categorical = table.config.categorical.size();

  std::vector<std::map<std::string, std::size_t>> categories(n_categorical);
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < n_categorical; ++c) {
      categories[c].emplace(row.categorical[c], 0);
    }
  }
  std::size_t dim = n_numeric;
  std::vector<std::size_t> block_start(n_categorical);
  for (std::size_t c = 0; c < n_categorical; ++c) {
    block_start[c] = dim;
    std::size_t index = 0;
    for (auto& [name, slot] : categories[c]) slot = index++;
    dim += categories[c].size();
  }

  std::vector<double> mean(n_numeric, 0.0);
  std::vector<double> scale(n_numeric, 1.0);
  if (table.config.scale) {
    for (std::size_t k = 0; k < n_numeric; ++k) {
      double sum = 0.0;
      for (const auto& row : table.rows) sum += row.numeric[k];
      mean[k] = sum / static_cast<double>(n);
      double var = 0.0;
      for (const auto& row : table.rows) {
        var += (row.numeric[k] - mean[k]) * (row.numeric[k] - mean[k]);
      }
      const double sd = std::sqrt(var / static_cast<double>(n));
      if (sd > 0.0) scale[k] = 1.0 / sd;
    }
  }

  std::vector<double> coords(n * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = table.rows[i];
    double* out = coords.data() + i * dim;
    for (std::size_t k = 0; k < n_numeric; ++k) {
      out[k] = (row.numeric[k] - mean[k]) * scale[k];
    }
    for (std::size_t c = 0; c < n_categorical; ++c) {
      out[block_start[c] + categories[c].at(row.categorical[c])] = 1.0;
    }
  }
  return sortition::PointSet(n, dim, std::move(coords));
}

sortition::PointSet ParseDemographics(const std::string& path,
                                      const FeatureConfig& config) {
  return ToPointSet(ReadDemographics(path, config));
}

std::string SerializeDemographics(const DemographicTable& table) {
  std::string out;
  bool first = true;
  auto cell = [&](const std::string& s) {
    if (!first) out += ',';
    first = false;
    out += QuoteField(s);
  };
  for (const auto& name : table.config.numeric) cell(name);
  for (const auto& name : table.config.categorical) cell(name);
  out += '\n';
  for (const auto& row : table.rows) {
    first = true;
    for (double x : row.numeric) cell(FormatDouble(x));
    for (const auto& s : row.categorical) cell(s);
    out += '\n';
  }
  return out;
}

}  // namespace fwi::ingest
