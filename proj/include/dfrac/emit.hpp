#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dfrac/checks.hpp"
#include "dfrac/resolvent.hpp"
#include "dfrac/sequence.hpp"

namespace dfrac {

/// "%.17g": round-trips every double and is byte-stable.
std::string format_double(double v);

/// Header "n,component_0,...,component_{d-1}" then one row per state.
std::string vecseq_to_csv(const VecSeq& u);
/// Inverse of vecseq_to_csv; throws ConfigError with the offending line.
VecSeq vecseq_from_csv(const std::string& text);

/// Columns of equal length under a header row.
std::string columns_to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns);

nlohmann::json vecseq_to_json(const VecSeq& u);
/// {alpha, method, N, d, matrices (row-major), sup_norm}.
nlohmann::json family_to_json(const ResolventFamily& f);
nlohmann::json checks_to_json(const std::vector<CheckResult>& checks);

/// {meta, data, checks} with meta.command set.
nlohmann::json make_document(const std::string& command, nlohmann::json meta, nlohmann::json data,
                             const std::vector<CheckResult>& checks);

/// Two-space indented dump terminated by a newline.
std::string dump_json(const nlohmann::json& doc);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace dfrac
