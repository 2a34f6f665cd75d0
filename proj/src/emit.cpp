#include "dfrac/emit.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dfrac/errors.hpp"

namespace dfrac {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vecseq_to_csv(const VecSeq& u) {
  std::string out = "n";
  for (Eigen::Index i = 0; i < u.dim(); ++i) out += ",component_" + std::to_string(i);
  out += '\n';
  for (int n = 0; n <= u.horizon(); ++n) {
    out += std::to_string(n);
    for (Eigen::Index i = 0; i < u.dim(); ++i) out += ',' + format_double(u.state(n)(i));
    out += '\n';
  }
  return out;
}

VecSeq vecseq_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,", 0) != 0) throw ConfigError("csv:1: expected header 'n,component_0,...'");
  const auto dim = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ','));
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');  // index column
    if (cell != std::to_string(rows.size())) {
      throw ConfigError("csv:" + std::to_string(lineno) + ": expected index " + std::to_string(rows.size()));
    }
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw ConfigError("csv:" + std::to_string(lineno) + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (static_cast<Eigen::Index>(row.size()) != dim) {
      throw ConfigError("csv:" + std::to_string(lineno) + ": expected " + std::to_string(dim) + " values");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("csv: no data rows");
  VecSeq u(dim, static_cast<int>(rows.size()) - 1);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    for (Eigen::Index i = 0; i < dim; ++i) u.state(static_cast<int>(n))(i) = rows[n][static_cast<std::size_t>(i)];
  }
  return u;
}

std::string columns_to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw UsageError("columns_to_csv: header and column count differ");
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
  out += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) out += (j ? "," : "") + format_double(columns[j].at(r));
    out += '\n';
  }
  return out;
}

nlohmann::json vecseq_to_json(const VecSeq& u) {
  nlohmann::json states = nlohmann::json::array();
  for (int n = 0; n <= u.horizon(); ++n) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index i = 0; i < u.dim(); ++i) row.push_back(u.state(n)(i));
    states.push_back(std::move(row));
  }
  return {{"N", u.horizon()}, {"d", u.dim()}, {"states", std::move(states)}};
}

nlohmann::json family_to_json(const ResolventFamily& f) {
  nlohmann::json matrices = nlohmann::json::array();
  for (const auto& s : f.table()) {
    nlohmann::json flat = nlohmann::json::array();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.cols(); ++j) flat.push_back(s(i, j));
    }
    matrices.push_back(std::move(flat));
  }
  return {{"alpha", f.alpha().alpha()},
          {"method", to_string(f.method())},
          {"N", f.horizon()},
          {"d", f.dim()},
          {"matrices", std::move(matrices)},
          {"sup_norm", f.sup_norm()}};
}

nlohmann::json checks_to_json(const std::vector<CheckResult>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : c.measurements) {
      ms.push_back({{"label", m.label}, {"measured", m.measured}, {"tolerance", m.tolerance}, {"passed", m.passed()}});
    }
    out.push_back({{"id", c.id},
                   {"name", c.name},
                   {"passed", c.passed()},
                   {"measurements", std::move(ms)},
                   {"failures", c.failures},
                   {"notes", c.notes}});
  }
  return out;
}

nlohmann::json make_document(const std::string& command, nlohmann::json meta, nlohmann::json data,
                             const std::vector<CheckResult>& checks) {
  meta["command"] = command;
  return {{"meta", std::move(meta)}, {"data", std::move(data)}, {"checks", checks_to_json(checks)}};
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace dfrac
