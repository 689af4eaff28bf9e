#include "iiclab/emit.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "iiclab/errors.hpp"

namespace iiclab {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + '"';
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

// One record as (column, rendered value, is_string) triples, in column order.
struct Field {
  std::string value;
  bool is_string;
  bool empty;
};

std::vector<Field> record_fields(const ExperimentRecord& r) {
  std::vector<Field> f;
  const auto num = [&](const std::optional<double>& v) { f.push_back({opt(v), false, !v}); };
  f.push_back({std::to_string(r.d), false, false});
  f.push_back({format_double(r.p), false, false});
  const IICBreakdown* b = r.iic ? &*r.iic : nullptr;
  num(b ? std::optional<double>(b->total) : std::nullopt);
  num(b ? std::optional<double>(b->reg_term) : std::nullopt);
  num(b ? std::optional<double>(b->sharpness_term) : std::nullopt);
  num(b ? std::optional<double>(b->ambient_constant) : std::nullopt);
  num(b ? std::optional<double>(b->tau_star) : std::nullopt);
  num(b ? std::optional<double>(b->log_det_gram) : std::nullopt);
  num(b ? b->sum_log_abs_theta : std::nullopt);
  num(b ? b->log_v0 : std::nullopt);
  if (b && b->v0_method) {
    f.push_back({std::string(to_string(*b->v0_method)), true, false});
  } else {
    f.push_back({"", true, true});
  }
  if (r.support_size) {
    f.push_back({std::to_string(*r.support_size), false, false});
  } else {
    f.push_back({"", false, true});
  }
  num(r.certificate_margin);
  num(r.train_mse);
  num(r.test_mse);
  f.push_back({r.ok ? "ok" : "error", true, false});
  f.push_back({r.failure_reason, true, r.failure_reason.empty()});
  return f;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path);
  out << content;
  out.flush();
  if (!out) fail(ErrorKind::IoError, "write failed for " + path);
}

std::optional<double> read_opt(const std::string& tok, const std::string& path, std::size_t row,
                               const char* col) {
  if (tok.empty()) return std::nullopt;
  double v = 0.0;
  if (!parse_double(tok, v)) {
    fail(ErrorKind::ParseError, path + ": row " + std::to_string(row + 1) + ", column '" + col +
                                    "': '" + tok + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < kRecordColumns.size(); ++i) {
    out += (i ? "," : "");
    out += kRecordColumns[i];
  }
  out += '\n';
  for (const auto& r : records) {
    const auto fields = record_fields(r);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out += (i ? "," : "");
      out += csv_field(fields[i].value);
    }
    out += '\n';
  }
  return out;
}

std::string records_to_json(const std::vector<ExperimentRecord>& records) {
  std::string out = "[";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto fields = record_fields(records[k]);
    out += k ? ",\n  {" : "\n  {";
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out += (i ? ", " : "");
      out += json_string(std::string(kRecordColumns[i])) + ": ";
      if (fields[i].empty) {
        out += "null";
      } else if (fields[i].is_string) {
        out += json_string(fields[i].value);
      } else {
        out += fields[i].value;
      }
    }
    out += "}";
  }
  out += records.empty() ? "]\n" : "\n]\n";
  return out;
}

std::string reports_to_csv(const std::vector<CorrelationReport>& reports) {
  std::string out = "pair,rho,ci_low,ci_high,n_points,n_resamples,skipped_resamples,seed,method\n";
  for (const auto& r : reports) {
    out += csv_field(r.pair) + "," + format_double(r.rho) + "," + format_double(r.ci_low) + "," +
           format_double(r.ci_high) + "," + std::to_string(r.n_points) + "," +
           std::to_string(r.n_resamples) + "," + std::to_string(r.skipped_resamples) + "," +
           std::to_string(r.seed) + "," + csv_field(r.method) + "\n";
  }
  return out;
}

std::string report_to_json(const CorrelationReport& r) {
  return "{\"pair\": " + json_string(r.pair) + ", \"rho\": " + format_double(r.rho) +
         ", \"ci_low\": " + format_double(r.ci_low) + ", \"ci_high\": " + format_double(r.ci_high) +
         ", \"n_points\": " + std::to_string(r.n_points) +
         ", \"n_resamples\": " + std::to_string(r.n_resamples) +
         ", \"skipped_resamples\": " + std::to_string(r.skipped_resamples) +
         ", \"seed\": " + std::to_string(r.seed) + ", \"method\": " + json_string(r.method) + "}";
}

std::string reports_to_json(const std::vector<CorrelationReport>& reports) {
  std::string out = "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out += (i ? ",\n  " : "\n  ") + report_to_json(reports[i]);
  }
  out += reports.empty() ? "]\n" : "\n]\n";
  return out;
}

void emit(const std::vector<ExperimentRecord>& records, EmitFormat format, const std::string& path) {
  write_file(path, format == EmitFormat::Csv ? records_to_csv(records) : records_to_json(records));
}

void emit(const std::vector<CorrelationReport>& reports, EmitFormat format, const std::string& path) {
  write_file(path, format == EmitFormat::Csv ? reports_to_csv(reports) : reports_to_json(reports));
}

std::vector<ExperimentRecord> read_records_csv(const std::string& path) {
  const CsvTable t = read_csv_table(path);
  std::vector<int> idx;
  for (auto name : kRecordColumns) {
    const int c = t.column(std::string(name));
    if (c < 0) fail(ErrorKind::ParseError, path + ": missing column '" + std::string(name) + "'");
    idx.push_back(c);
  }
  std::vector<ExperimentRecord> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != t.header.size()) {
      fail(ErrorKind::ParseError, path + ": row " + std::to_string(r + 1) + " has the wrong width");
    }
    const auto cell = [&](std::size_t k) -> const std::string& {
      return row[static_cast<std::size_t>(idx[k])];
    };
    const auto num = [&](std::size_t k) { return read_opt(cell(k), path, r, kRecordColumns[k].data()); };
    ExperimentRecord rec;
    rec.d = static_cast<Index>(num(0).value_or(0.0));
    rec.p = num(1).value_or(0.0);
    rec.ok = cell(15) == "ok";
    rec.failure_reason = cell(16);
    if (const auto total = num(2)) {
      IICBreakdown b;
      b.p = rec.p;
      b.total = *total;
      b.reg_term = num(3).value_or(0.0);
      b.sharpness_term = num(4).value_or(0.0);
      b.ambient_constant = num(5).value_or(0.0);
      b.tau_star = num(6).value_or(0.0);
      b.log_det_gram = num(7).value_or(0.0);
      b.sum_log_abs_theta = num(8);
      b.log_v0 = num(9);
      const std::string& m = cell(10);
      if (m == "closed_form") b.v0_method = V0Method::ClosedForm;
      if (m == "monte_carlo") b.v0_method = V0Method::MonteCarlo;
      if (m == "n1_residue") b.v0_method = V0Method::N1Residue;
      rec.iic = b;
    }
    if (const auto s = num(11)) rec.support_size = static_cast<Index>(*s);
    rec.certificate_margin = num(12);
    rec.train_mse = num(13);
    rec.test_mse = num(14);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace iiclab
