#include "leafcurrent/reports.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "leafcurrent/config.hpp"

namespace leafcurrent {

// ---------------------------------------------------------------- CSV

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != header_.size()) throw std::logic_error("CsvTable: row width mismatch");
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_cells(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw std::logic_error("CsvTable: row width mismatch");
  rows_.push_back(cells);
}

std::string CsvTable::quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quote(cells[i]);
    }
    out += "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

// ---------------------------------------------------------------- SVG

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double map(double x, double p0, double p1) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(x) : x) - a) / (b - a);
    return p0 + t * (p1 - p0);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int k0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
      const int k1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
      const int stride = std::max(1, (k1 - k0) / 8 + 1);
      for (int k = k0; k <= k1; k += stride) out.push_back(std::pow(10.0, k));
      return out;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    for (double x = std::ceil(lo / step) * step; x <= hi + 1e-9 * step; x += step)
      out.push_back(std::abs(x) < 1e-12 * step ? 0.0 : x);
    return out;
  }
};

Axis make_axis(const std::vector<const std::vector<double>*>& data, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* v : data)
    for (double x : *v) {
      if (!std::isfinite(x) || (log && x <= 0)) continue;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  if (!std::isfinite(lo)) lo = log ? 0.1 : 0.0, hi = 1.0;
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10;
  } else {
    if (hi <= lo) lo -= 0.5, hi += 0.5;
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

void frame(std::ostringstream& os, const std::string& title, const std::string& xl,
           const std::string& yl, const Axis& ax, const Axis& ay, double x0, double x1, double y0,
           double y1) {
  os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
     << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (double t : ax.ticks()) {
    const double px = ax.map(t, x0, x1);
    os << "<line x1=\"" << num(px) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(px) << "\" y2=\""
       << num(y0 + 5) << "\" stroke=\"#444\"/>"
       << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 18)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double py = ay.map(t, y0, y1);
    os << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(py) << "\" x2=\"" << num(x0)
       << "\" y2=\"" << num(py) << "\" stroke=\"#444\"/>"
       << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(t) << "</text>\n";
  }
  os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << esc(title) << "</text>\n"
     << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 15)
     << "\" text-anchor=\"middle\" font-size=\"12\">" << esc(xl) << "</text>\n"
     << "<text transform=\"translate(18," << num((y0 + y1) / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << esc(yl) << "</text>\n";
}

std::string header(double w, double h) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << " " << h << "\" font-family=\"sans-serif\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

SvgPlot& SvgPlot::log_x(bool on) {
  log_x_ = on;
  return *this;
}
SvgPlot& SvgPlot::log_y(bool on) {
  log_y_ = on;
  return *this;
}
SvgPlot& SvgPlot::equal_aspect(bool on) {
  equal_ = on;
  return *this;
}

SvgPlot& SvgPlot::add(std::string name, std::vector<double> x, std::vector<double> y, Style style) {
  if (x.size() != y.size()) throw std::logic_error("SvgPlot: x and y differ in length");
  series_.push_back({std::move(name), std::move(x), std::move(y), style, false});
  return *this;
}

SvgPlot& SvgPlot::add_polygon(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) throw std::logic_error("SvgPlot: x and y differ in length");
  series_.push_back({"", std::move(x), std::move(y), Style::Line, true});
  return *this;
}

std::string SvgPlot::str() const {
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : series_) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  Axis ax = make_axis(xs, log_x_);
  Axis ay = make_axis(ys, log_y_);
  double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  if (equal_ && !log_x_ && !log_y_) {
    // Widen whichever range is short so one unit has the same length on both axes.
    const double sx = (ax.hi - ax.lo) / (x1 - x0), sy = (ay.hi - ay.lo) / (y0 - y1);
    if (sx > sy) {
      const double c = 0.5 * (ay.lo + ay.hi), half = 0.5 * sx * (y0 - y1);
      ay.lo = c - half, ay.hi = c + half;
    } else {
      const double c = 0.5 * (ax.lo + ax.hi), half = 0.5 * sy * (x1 - x0);
      ax.lo = c - half, ax.hi = c + half;
    }
  }

  std::ostringstream os;
  os << header(kWidth, kHeight);
  frame(os, title_, x_label_, y_label_, ax, ay, x0, x1, y0, y1);
  os << "<clipPath id=\"plot\"><rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\""
     << num(x1 - x0) << "\" height=\"" << num(y0 - y1) << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";

  auto ok = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!log_x_ || x > 0) && (!log_y_ || y > 0);
  };
  int colour = 0;
  for (const auto& s : series_) {
    const char* c = s.polygon ? "#888" : kPalette[colour++ % 8];
    if (s.style == Style::Points && !s.polygon) {
      for (size_t i = 0; i < s.x.size(); ++i)
        if (ok(s.x[i], s.y[i]))
          os << "<circle cx=\"" << num(ax.map(s.x[i], x0, x1)) << "\" cy=\"" << num(ay.map(s.y[i], y0, y1))
             << "\" r=\"1.6\" fill=\"" << c << "\"/>\n";
      continue;
    }
    // Broken into separate polylines at invalid points.
    std::string pts;
    auto flush = [&] {
      if (pts.empty()) return;
      os << "<" << (s.polygon ? "polygon" : "polyline") << " points=\"" << pts << "\" fill=\"none\" stroke=\""
         << c << "\" stroke-width=\"" << (s.polygon ? 1 : 1.6) << "\""
         << (s.style == Style::DashedLine ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
      pts.clear();
    };
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!ok(s.x[i], s.y[i])) {
        flush();
        continue;
      }
      pts += num(ax.map(s.x[i], x0, x1)) + "," + num(ay.map(s.y[i], y0, y1)) + " ";
    }
    flush();
  }
  os << "</g>\n";

  double ly = kTop + 10;
  colour = 0;
  for (const auto& s : series_) {
    if (s.polygon) continue;
    const char* c = kPalette[colour++ % 8];
    os << "<line x1=\"" << num(x1 + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(x1 + 32)
       << "\" y2=\"" << num(ly) << "\" stroke=\"" << c << "\" stroke-width=\"2\""
       << (s.style == Style::DashedLine ? " stroke-dasharray=\"6,4\"" : "") << "/>"
       << "<text x=\"" << num(x1 + 36) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">" << esc(s.name)
       << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

std::string heat_map_svg(const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<double>& x,
                         const std::vector<double>& y, const std::vector<double>& values,
                         bool log_scale) {
  const size_t nx = x.size(), ny = y.size();
  if (values.size() != nx * ny) throw std::logic_error("heat_map_svg: value count mismatch");
  auto scaled = [&](double v) { return log_scale ? (v > 0 ? std::log10(v) : NAN) : v; };
  double lo = INFINITY, hi = -INFINITY;
  for (double v : values) {
    const double s = scaled(v);
    if (std::isfinite(s)) lo = std::min(lo, s), hi = std::max(hi, s);
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi <= lo) hi = lo + 1;

  const Axis ax = make_axis({&x}, false), ay = make_axis({&y}, false);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::ostringstream os;
  os << header(kWidth, kHeight);

  auto edges = [](const std::vector<double>& g, size_t i) {
    const double left = i == 0 ? g[0] - 0.5 * (g.size() > 1 ? g[1] - g[0] : 1) : 0.5 * (g[i - 1] + g[i]);
    const double right =
        i + 1 == g.size() ? g[i] + 0.5 * (g.size() > 1 ? g[i] - g[i - 1] : 1) : 0.5 * (g[i] + g[i + 1]);
    return std::pair{left, right};
  };
  // Blue to yellow through green: a perceptually ordered ramp.
  auto colour = [](double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255 * std::clamp(1.6 * t - 0.6, 0.0, 1.0)));
    const int g = static_cast<int>(std::lround(255 * std::clamp(0.15 + 0.85 * t, 0.0, 1.0)));
    const int b = static_cast<int>(std::lround(255 * std::clamp(0.55 - 0.55 * t, 0.0, 1.0) + 60 * (1 - t)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, std::min(b, 255));
    return std::string(buf);
  };
  for (size_t j = 0; j < ny; ++j) {
    const auto [ya, yb] = edges(y, j);
    for (size_t i = 0; i < nx; ++i) {
      const double s = scaled(values[j * nx + i]);
      if (!std::isfinite(s)) continue;
      const auto [xa, xb] = edges(x, i);
      const double px = ax.map(xa, x0, x1), qx = ax.map(xb, x0, x1);
      const double py = ay.map(yb, y0, y1), qy = ay.map(ya, y0, y1);
      os << "<rect x=\"" << num(px) << "\" y=\"" << num(py) << "\" width=\"" << num(qx - px + 0.3)
         << "\" height=\"" << num(qy - py + 0.3) << "\" fill=\"" << colour((s - lo) / (hi - lo)) << "\"/>\n";
    }
  }
  frame(os, title, x_label, y_label, ax, ay, x0, x1, y0, y1);

  // Colour bar.
  const double bx = x1 + 30, bw = 18;
  for (int k = 0; k < 50; ++k) {
    const double t = k / 49.0;
    const double py = y0 - (k + 1) * (y0 - y1) / 50.0;
    os << "<rect x=\"" << num(bx) << "\" y=\"" << num(py) << "\" width=\"" << num(bw) << "\" height=\""
       << num((y0 - y1) / 50.0 + 0.3) << "\" fill=\"" << colour(t) << "\"/>\n";
  }
  const std::string unit = log_scale ? "log10 " : "";
  os << "<text x=\"" << num(bx + bw + 4) << "\" y=\"" << num(y0) << "\" font-size=\"11\">" << unit
     << tick_label(lo) << "</text>\n"
     << "<text x=\"" << num(bx + bw + 4) << "\" y=\"" << num(y1 + 10) << "\" font-size=\"11\">" << unit
     << tick_label(hi) << "</text>\n"
     << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------- manifest

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: EVP_Digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunRecord::RunRecord(std::string command, std::filesystem::path out_dir)
    : command_(std::move(command)),
      dir_(std::move(out_dir)),
      started_(std::chrono::system_clock::now()),
      started_mono_(std::chrono::steady_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void RunRecord::write(const std::string& name, const std::string& content) {
  const auto path = dir_ / name;
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const FileEntry& e) { return e.name == name; });
  FileEntry e{name, sha256_hex(content), content.size()};
  if (it != entries_.end()) {
    *it = e;
  } else {
    entries_.push_back(e);
    file_names_.push_back(name);
  }
}

void RunRecord::flag(const std::string& name, bool pass) { flags_.emplace_back(name, pass); }
void RunRecord::metric(const std::string& name, double value) { metrics_.emplace_back(name, value); }
void RunRecord::warn(const std::string& message) { warnings_.push_back(message); }

bool RunRecord::all_pass() const {
  return std::all_of(flags_.begin(), flags_.end(), [](const auto& f) { return f.second; });
}

std::string RunRecord::finish(const std::string& config_text) {
  using json = nlohmann::ordered_json;
  const auto ended = std::chrono::system_clock::now();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_mono_).count();

  json m;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  m["command"] = command_;
  m["started"] = iso8601_utc(started_);
  m["finished"] = iso8601_utc(ended);
  m["wall_time_s"] = wall;
  m["config"] = config_text;
  json flags = json::object();
  for (const auto& [k, v] : flags_) flags[k] = v;
  m["pass"] = flags;
  m["all_pass"] = all_pass();
  json metrics = json::object();
  for (const auto& [k, v] : metrics_) metrics[k] = std::isfinite(v) ? json(v) : json(nullptr);
  m["metrics"] = metrics;
  m["warnings"] = warnings_;
  json files = json::array();
  for (const auto& e : entries_) files.push_back({{"path", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  m["files"] = files;

  const std::string text = m.dump(2) + "\n";
  const auto path = dir_ / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
  return text;
}

}  // namespace leafcurrent
