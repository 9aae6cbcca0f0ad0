#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ptkho/analysis.hpp"
#include "ptkho/observables.hpp"

namespace ptkho {

inline constexpr const char* kTimeSeriesHeader = "t,log_norm,p_mean,e_kin,e_pot,e_tot,width";

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

void write_time_series_header(std::ostream& out);
void write_record(std::ostream& out, const ObservableRecord& record);
std::vector<ObservableRecord> read_time_series(const std::filesystem::path& path);

// Column of a time series by its header name ("p_mean", "e_kin", ...).
Series column(const std::vector<ObservableRecord>& records, std::string_view name);

// Two-column density file: header "p,prob" or "theta,prob".
struct DensityTable {
  std::string axis;  // "p" or "theta"
  std::vector<double> x;
  std::vector<double> prob;
};

void write_density(const std::filesystem::path& path, const std::string& axis,
                   const std::vector<std::pair<double, double>>& density);
DensityTable read_density(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ptkho
