#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "iiclab/stats.hpp"
#include "iiclab/sweep.hpp"

namespace iiclab {

enum class EmitFormat { Csv, Json };

inline constexpr std::array<std::string_view, 17> kRecordColumns = {
    "d",           "p",           "iic_total",      "reg_term",          "sharpness_term",
    "ambient_constant", "tau_star", "log_det_gram", "sum_log_abs_theta", "log_v0",
    "v0_method",   "support_size", "certificate_margin", "train_mse",     "test_mse",
    "status",      "failure_reason"};

/// %.17g, which round-trips every finite double.
std::string format_double(double v);

std::string records_to_csv(const std::vector<ExperimentRecord>& records);
std::string records_to_json(const std::vector<ExperimentRecord>& records);
std::string reports_to_csv(const std::vector<CorrelationReport>& reports);
std::string reports_to_json(const std::vector<CorrelationReport>& reports);
std::string report_to_json(const CorrelationReport& report);

/// Writes the rendered table; IoError when the path is not writable.
void emit(const std::vector<ExperimentRecord>& records, EmitFormat format, const std::string& path);
void emit(const std::vector<CorrelationReport>& reports, EmitFormat format, const std::string& path);

/// Parses a records CSV produced by emit(); wall_time is not stored.
std::vector<ExperimentRecord> read_records_csv(const std::string& path);

}  // namespace iiclab
