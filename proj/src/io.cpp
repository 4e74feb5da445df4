#include "randboot/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace randboot::io {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_file(path, j.dump(2) + "\n");
}

void write_pvalues_csv(const std::string& path,
                       const std::vector<double>& pvalues) {
  std::string out = "rep,pvalue\n";
  for (std::size_t i = 0; i < pvalues.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += format_double(pvalues[i]);
    out += '\n';
  }
  write_file(path, out);
}

void write_panel_csv(const std::string& path,
                     const mc::ConditionalEcdfPanel& panel) {
  std::string out = "grid_point,row,value\n";
  for (Eigen::Index m = 0; m < panel.rows.rows(); ++m) {
    for (Eigen::Index j = 0; j < panel.grid.size(); ++j) {
      out += format_double(panel.grid[j]);
      out += ',';
      out += std::to_string(m + 1);
      out += ',';
      out += format_double(panel.rows(m, j));
      out += '\n';
    }
  }
  write_file(path, out);
}

void write_fanchart_csv(const std::string& path,
                        const diag::FanChartSummary& summary) {
  std::string out = "grid_point,band,value\n";
  const auto emit = [&](const char* band, const Eigen::VectorXd& values) {
    for (Eigen::Index j = 0; j < summary.grid.size(); ++j) {
      out += format_double(summary.grid[j]);
      out += ',';
      out += band;
      out += ',';
      out += format_double(values[j]);
      out += '\n';
    }
  };
  emit("average", summary.average);
  emit("lower", summary.lower);
  emit("upper", summary.upper);
  write_file(path, out);
}

void write_power_csv(const std::string& path,
                     const std::vector<PowerRow>& rows) {
  std::string out = "b,mc_rejection,oracle_power\n";
  for (const PowerRow& row : rows) {
    out += format_double(row.b);
    out += ',';
    out += format_double(row.mc_rejection);
    out += ',';
    out += format_double(row.oracle_power);
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace randboot::io
