#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace leafcurrent {

/// CSV with a header row, CRLF line ends, numbers in shortest round-trip form. Text cells are
/// quoted when they contain a comma, quote or line break.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  /// Mixed row; cells already formatted.
  void add_cells(const std::vector<std::string>& cells);

  size_t rows() const { return rows_.size(); }
  std::string str() const;

  static std::string quote(const std::string& cell);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Line and scatter plots written as standalone SVG.
class SvgPlot {
 public:
  enum class Style { Line, Points, DashedLine };

  SvgPlot(std::string title, std::string x_label, std::string y_label);

  SvgPlot& log_x(bool on = true);
  SvgPlot& log_y(bool on = true);
  /// Equal units on both axes.
  SvgPlot& equal_aspect(bool on = true);
  SvgPlot& add(std::string name, std::vector<double> x, std::vector<double> y,
               Style style = Style::Line);
  /// Closed outline drawn without a legend entry.
  SvgPlot& add_polygon(std::vector<double> x, std::vector<double> y);

  std::string str() const;

 private:
  struct Series {
    std::string name;
    std::vector<double> x, y;
    Style style;
    bool polygon = false;
  };
  std::string title_, x_label_, y_label_;
  bool log_x_ = false, log_y_ = false, equal_ = false;
  std::vector<Series> series_;
};

/// Heat map of values[j * nx + i] at (x[i], y[j]); NaN cells are left blank.
/// Colour scale is linear or log10 of the value.
std::string heat_map_svg(const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<double>& x,
                         const std::vector<double>& y, const std::vector<double>& values,
                         bool log_scale);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

/// ISO-8601 UTC, seconds resolution.
std::string iso8601_utc(std::chrono::system_clock::time_point t);

inline constexpr const char* kToolName = "leafcurrent";
inline constexpr const char* kToolVersion = "0.1.0";

/// Everything one subcommand produces: files in the output directory,
/// pass/fail flags, headline numbers and warnings. finish() writes the
/// manifest.
class RunRecord {
 public:
  RunRecord(std::string command, std::filesystem::path out_dir);

  const std::filesystem::path& dir() const { return dir_; }

  /// Writes `content` to dir/name and lists it in the manifest. Throws
  /// std::runtime_error naming the path on I/O failure.
  void write(const std::string& name, const std::string& content);

  void flag(const std::string& name, bool pass);
  void metric(const std::string& name, double value);
  void warn(const std::string& message);

  bool all_pass() const;
  const std::vector<std::pair<std::string, bool>>& flags() const { return flags_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::vector<std::string>& files() const { return file_names_; }

  /// Writes manifest.json (config text, version, timings, flags, metrics,
  /// warnings, file hashes). Returns the manifest text.
  std::string finish(const std::string& config_text);

 private:
  struct FileEntry {
    std::string name, sha256;
    size_t bytes;
  };
  std::string command_;
  std::filesystem::path dir_;
  std::chrono::system_clock::time_point started_;
  std::chrono::steady_clock::time_point started_mono_;
  std::vector<FileEntry> entries_;
  std::vector<std::string> file_names_;
  std::vector<std::pair<std::string, bool>> flags_;
  std::vector<std::pair<std::string, double>> metrics_;
  std::vector<std::string> warnings_;
};

}  // namespace leafcurrent
