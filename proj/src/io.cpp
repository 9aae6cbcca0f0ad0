#include "ptkho/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ptkho/error.hpp"

namespace ptkho {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), res.ptr};
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    // from_chars does not accept the "inf"/"nan" spellings to_chars emits with a sign.
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan" || text == "-nan") return std::numeric_limits<double>::quiet_NaN();
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

void write_time_series_header(std::ostream& out) { out << kTimeSeriesHeader << '\n'; }

void write_record(std::ostream& out, const ObservableRecord& r) {
  out << r.t << ',' << format_double(r.log_norm_growth) << ',' << format_double(r.p_mean) << ','
      << format_double(r.e_kin) << ',' << format_double(r.e_pot) << ',' << format_double(r.e_tot) << ','
      << format_double(r.width) << '\n';
}

std::vector<ObservableRecord> read_time_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open time series '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != kTimeSeriesHeader) {
    throw ValidationError("'" + path.string() + "' is not a time series: expected header " + kTimeSeriesHeader);
  }
  std::vector<ObservableRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim_cr(line);
    if (text.empty()) continue;
    const auto f = split(text, ',');
    if (f.size() != 7) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected 7 columns");
    }
    ObservableRecord r;
    int t = 0;
    const auto res = std::from_chars(f[0].data(), f[0].data() + f[0].size(), t);
    if (res.ec != std::errc() || res.ptr != f[0].data() + f[0].size()) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": bad kick index");
    }
    r.t = t;
    r.log_norm_growth = parse_double(f[1]);
    r.p_mean = parse_double(f[2]);
    r.e_kin = parse_double(f[3]);
    r.e_pot = parse_double(f[4]);
    r.e_tot = parse_double(f[5]);
    r.width = parse_double(f[6]);
    records.push_back(r);
  }
  return records;
}

Series column(const std::vector<ObservableRecord>& records, std::string_view name) {
  double ObservableRecord::*field = nullptr;
  if (name == "log_norm") field = &ObservableRecord::log_norm_growth;
  else if (name == "p_mean") field = &ObservableRecord::p_mean;
  else if (name == "e_kin") field = &ObservableRecord::e_kin;
  else if (name == "e_pot") field = &ObservableRecord::e_pot;
  else if (name == "e_tot") field = &ObservableRecord::e_tot;
  else if (name == "width") field = &ObservableRecord::width;
  else throw ValidationError("unknown time-series column '" + std::string(name) + "'");
  Series s;
  s.t.reserve(records.size());
  s.y.reserve(records.size());
  for (const auto& r : records) {
    s.t.push_back(r.t);
    s.y.push_back(r.*field);
  }
  return s;
}

void write_density(const std::filesystem::path& path, const std::string& axis,
                   const std::vector<std::pair<double, double>>& density) {
  std::ostringstream out;
  out << axis << ",prob\n";
  for (const auto& [x, p] : density) out << format_double(x) << ',' << format_double(p) << '\n';
  write_text(path, out.str());
}

DensityTable read_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open density file '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  const auto header = trim_cr(line);
  DensityTable table;
  if (header == "p,prob") table.axis = "p";
  else if (header == "theta,prob") table.axis = "theta";
  else throw ValidationError("'" + path.string() + "' is not a density file");
  while (std::getline(in, line)) {
    const auto text = trim_cr(line);
    if (text.empty()) continue;
    const auto f = split(text, ',');
    if (f.size() != 2) throw ValidationError(path.string() + ": expected 2 columns");
    table.x.push_back(parse_double(f[0]));
    table.prob.push_back(parse_double(f[1]));
  }
  return table;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace ptkho
