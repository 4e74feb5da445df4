#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "randboot/diagnostics.hpp"
#include "randboot/mc.hpp"

namespace randboot::io {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

void write_file(const std::string& path, const std::string& content);

void write_json_file(const std::string& path, const nlohmann::json& j);

// Header "rep,pvalue"; rep is 1-based.
void write_pvalues_csv(const std::string& path,
                       const std::vector<double>& pvalues);

// Long format, header "grid_point,row,value"; row is the 1-based outer path.
void write_panel_csv(const std::string& path,
                     const mc::ConditionalEcdfPanel& panel);

// Long format, header "grid_point,band,value"; band in {average,lower,upper}.
void write_fanchart_csv(const std::string& path,
                        const diag::FanChartSummary& summary);

struct PowerRow {
  double b = 0.0;
  double mc_rejection = 0.0;
  double oracle_power = 0.0;
};

// Header "b,mc_rejection,oracle_power".
void write_power_csv(const std::string& path,
                     const std::vector<PowerRow>& rows);

}  // namespace randboot::io
