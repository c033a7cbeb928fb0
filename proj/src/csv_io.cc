#include "surveq/csv_io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "surveq/errors.h"

namespace surveq {
namespace {

// One CSV record. Handles double-quoted fields; quotes do not span lines.
std::vector<std::string> SplitLine(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError(line_no, line.size(), "unterminated quote");
  return fields;
}

// Next nonblank line; false at end of input.
bool NextRecord(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

std::ifstream Open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return in;
}

std::string Quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string FormatDouble(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

RatingMatrix ReadRatingsCsv(std::istream& in, const std::optional<LabelSpace>& labels) {
  std::string line;
  std::size_t line_no = 0;
  if (!NextRecord(in, line, line_no)) throw ParseError(1, 1, "empty ratings file");
  const auto header = SplitLine(line, line_no);
  if (header.size() < 2) throw ParseError(line_no, 1, "header needs item and rater columns");

  std::vector<RawRow> rows;
  while (NextRecord(in, line, line_no)) {
    auto fields = SplitLine(line, line_no);
    if (fields.size() > header.size()) {
      throw ParseError(line_no, header.size() + 1, "more cells than header columns");
    }
    RawRow row{fields[0], {}};
    if (row.item.empty()) throw ParseError(line_no, 1, "empty item id");
    std::size_t last = fields.size();
    while (last > 1 && fields[last - 1].empty()) --last;
    for (std::size_t c = 1; c < last; ++c) {
      if (fields[c].empty()) throw ParseError(line_no, c + 1, "empty cell before a label");
      row.labels.push_back(std::move(fields[c]));
    }
    rows.push_back(std::move(row));
  }
  if (labels) return ValidateMatrix(rows, *labels);
  std::set<std::string> seen;
  for (const auto& row : rows) seen.insert(row.labels.begin(), row.labels.end());
  return ValidateMatrix(rows, LabelSpace(std::vector<std::string>(seen.begin(), seen.end())));
}

RatingMatrix LoadRatingsCsv(const std::string& path, const std::optional<LabelSpace>& labels) {
  auto in = Open(path);
  return ReadRatingsCsv(in, labels);
}

PredictionSet ReadPredictionsCsv(std::istream& in, const LabelSpace& labels,
                                 const RatingMatrix* matrix) {
  std::string line;
  std::size_t line_no = 0;
  if (!NextRecord(in, line, line_no)) throw ParseError(1, 1, "empty predictions file");
  const auto header = SplitLine(line, line_no);
  const bool soft = header.size() > 1 && header[1].rfind("p_", 0) == 0;
  if (soft) {
    if (header.size() != labels.size() + 1) {
      throw ParseError(line_no, 1, "soft header needs one p_<label> column per label");
    }
    for (std::size_t l = 0; l < labels.size(); ++l) {
      if (header[l + 1] != "p_" + labels.labels()[l]) {
        throw ParseError(line_no, l + 2,
                         "expected column p_" + labels.labels()[l] + ", got " + header[l + 1]);
      }
    }
  } else if (header.size() != 2) {
    throw ParseError(line_no, 1, "hard header must be item,label");
  }

  PredictionSet set(labels, soft ? PredictionKind::kSoft : PredictionKind::kHard);
  while (NextRecord(in, line, line_no)) {
    const auto fields = SplitLine(line, line_no);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, std::min(fields.size(), header.size()) + 1,
                       "expected " + std::to_string(header.size()) + " cells");
    }
    try {
      if (!soft) {
        const auto label = labels.Find(fields[1]);
        if (!label) throw ParseError(line_no, 2, "unknown label " + fields[1]);
        set.Add(fields[0], Prediction::Hard(*label));
        continue;
      }
      std::vector<double> probs;
      for (std::size_t c = 1; c < fields.size(); ++c) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(fields[c], &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != fields[c].size()) {
          throw ParseError(line_no, c + 1, "not a number: " + fields[c]);
        }
        probs.push_back(v);
      }
      double sum = 0.0;
      for (double p : probs) sum += p;
      if (std::abs(sum - 1.0) > kCsvSumTolerance) {
        throw PredictionError("NormalizationError(" + fields[0] + "): probabilities sum to " +
                              FormatDouble(sum));
      }
      for (double& p : probs) p /= sum;
      set.Add(fields[0], Prediction::Soft(std::move(probs)));
    } catch (const PredictionError& e) {
      throw PredictionError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    }
  }
  if (matrix != nullptr) {
    for (std::size_t i : matrix->canonical_order()) {
      if (set.Find(matrix->item(i)) == nullptr) {
        throw PredictionError("MissingItem(" + matrix->item(i) + ")");
      }
    }
  }
  return set;
}

PredictionSet LoadPredictionsCsv(const std::string& path, const LabelSpace& labels,
                                 const RatingMatrix* matrix) {
  auto in = Open(path);
  return ReadPredictionsCsv(in, labels, matrix);
}

void WriteRatingsCsv(std::ostream& out, const RatingMatrix& matrix) {
  out << "item";
  for (std::size_t j = 0; j < matrix.max_row_length(); ++j) out << ",r" << j + 1;
  out << '\n';
  const auto& space = matrix.label_space();
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    out << Quote(matrix.item(i));
    const auto row = matrix.row(i);
    for (std::size_t j = 0; j < matrix.max_row_length(); ++j) {
      out << ',';
      if (j < row.size()) out << Quote(space.label(row[j]));
    }
    out << '\n';
  }
}

void WritePredictionsCsv(std::ostream& out, const PredictionSet& predictions) {
  const auto& space = predictions.label_space();
  const bool soft = predictions.kind() == PredictionKind::kSoft;
  out << "item";
  if (soft) {
    for (const auto& l : space.labels()) out << ",p_" << Quote(l);
  } else {
    out << ",label";
  }
  out << '\n';
  for (const auto& item : predictions.items()) {
    const Prediction& p = predictions.at(item);
    out << Quote(item);
    if (soft) {
      for (double v : p.probs()) out << ',' << FormatDouble(v);
    } else {
      out << ',' << Quote(space.label(p.label()));
    }
    out << '\n';
  }
}

void WriteTraceCsv(std::ostream& out, const GroundTruthTrace& trace) {
  out << "item,state\n";
  for (std::size_t i = 0; i < trace.items.size(); ++i) {
    out << Quote(trace.items[i]) << ',' << trace.states[i] << '\n';
  }
}

}  // namespace surveq
