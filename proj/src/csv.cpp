#include "gig/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "gig/model_json.hpp"

namespace gig {

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s.empty()) throw SchemaError("empty numeric field");
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw SchemaError("bad numeric field: " + s);
  return v;
}

static bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

static void append_field(std::string& out, const std::string& field) {
  if (!needs_quoting(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

std::string csv_to_string(const CsvTable& table) {
  std::string out;
  auto append_row = [&](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      append_field(out, row[i]);
    }
    out += "\r\n";
  };
  append_row(table.header);
  for (const auto& row : table.rows) append_row(row);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(record);
    record.clear();
  };

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field += c;
        field_started = true;
        break;
    }
  }
  if (in_quotes) throw SchemaError("unterminated quoted CSV field");
  if (field_started || !record.empty()) end_record();

  if (records.empty()) throw SchemaError("CSV has no header row");
  CsvTable table;
  table.header = records[0];
  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size())
      throw SchemaError("CSV row " + std::to_string(r) + " has " +
                        std::to_string(records[r].size()) + " fields, header has " +
                        std::to_string(table.header.size()));
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) { return parse_csv(read_text_file(path)); }

void write_csv_file(const CsvTable& table, const std::string& path) {
  write_text_file(path, csv_to_string(table));
}

CsvTable dataset_to_csv(const Dataset& d) {
  CsvTable table;
  table.header = d.feature_names;
  table.header.push_back("label");
  for (size_t r = 0; r < d.rows.size(); ++r) {
    std::vector<std::string> row;
    row.reserve(d.rows[r].size() + 1);
    for (double v : d.rows[r]) row.push_back(format_double(v));
    row.push_back(std::to_string(d.labels[r]));
    table.rows.push_back(std::move(row));
  }
  return table;
}

Dataset dataset_from_csv(const CsvTable& table) {
  if (table.header.size() < 2) throw SchemaError("dataset CSV needs features plus a label column");
  Dataset d;
  d.feature_names.assign(table.header.begin(), table.header.end() - 1);
  for (const auto& row : table.rows) {
    FeatureVector x(row.size() - 1);
    for (size_t i = 0; i + 1 < row.size(); ++i) x[i] = parse_double(row[i]);
    double label = parse_double(row.back());
    if (label != 0.0 && label != 1.0) throw SchemaError("labels must be 0 or 1");
    d.rows.push_back(std::move(x));
    d.labels.push_back(static_cast<int>(label));
  }
  return d;
}

}  // namespace gig
