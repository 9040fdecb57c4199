#include "crn/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace crn {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fixed(double v, int digits = 2) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

std::string tick_label(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;
  double px(double x) const { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
  }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = std::abs(lo) > 0 ? 0.5 * std::abs(lo) : 1.0;
    lo -= pad;
    hi += pad;
  }
}

void axes(std::ostringstream& os, const Frame& f, const std::string& title, const std::string& xl,
          const std::string& yl, bool log_y) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  os << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  os << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << escape(title) << "</text>\n";
  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom;
  const double y1 = kTop;
  os << "<path d=\"M" << fixed(x0) << ' ' << fixed(y1) << " L" << fixed(x0) << ' ' << fixed(y0)
     << " L" << fixed(x1) << ' ' << fixed(y0) << "\" stroke=\"black\" fill=\"none\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = f.x_lo + (f.x_hi - f.x_lo) * i / 5.0;
    const double yv = f.y_lo + (f.y_hi - f.y_lo) * i / 5.0;
    os << "<text x=\"" << fixed(f.px(xv)) << "\" y=\"" << fixed(y0 + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(xv) << "</text>\n";
    os << "<text x=\"" << fixed(x0 - 6) << "\" y=\"" << fixed(f.py(yv) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
  }
  os << "<text x=\"400\" y=\"" << fixed(kHeight - 15)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(xl)
     << "</text>\n";
  os << "<text x=\"18\" y=\"250\" transform=\"rotate(-90 18 250)\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"13\">"
     << escape(yl) << "</text>\n";
}

}  // namespace

std::string render_line_svg(const LinePlot& plot) {
  auto ty = [&](double y) {
    if (!plot.log_y) return y;
    return y > 0 ? std::log10(y) : std::numeric_limits<double>::quiet_NaN();
  };
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double y = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  widen(x_lo, x_hi);
  widen(y_lo, y_hi);
  const Frame f{x_lo, x_hi, y_lo, y_hi};

  std::ostringstream os;
  axes(os, f, plot.title, plot.x_label, plot.y_label + (plot.log_y ? " (log scale)" : ""),
       plot.log_y);
  std::size_t idx = 0;
  for (const auto& s : plot.series) {
    const char* colour = kPalette[idx % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double y = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      if (!first) os << ' ';
      os << fixed(f.px(s.x[i])) << ',' << fixed(f.py(y));
      first = false;
    }
    os << "\"/>\n";
    if (!s.name.empty()) {
      const double ly = kTop + 16.0 * static_cast<double>(idx);
      os << "<text x=\"" << fixed(kWidth - kRight - 8) << "\" y=\"" << fixed(ly + 12)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << colour
         << "\">" << escape(s.name) << "</text>\n";
    }
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_histogram_svg(std::span<const double> values, std::size_t bins,
                                 const std::string& title, const std::string& x_label,
                                 std::optional<double> marker) {
  bins = std::max<std::size_t>(bins, 1);
  double lo = values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
  double hi = values.empty() ? 1.0 : *std::max_element(values.begin(), values.end());
  widen(lo, hi);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    counts[std::min(b, bins - 1)]++;
  }
  const double top = static_cast<double>(
      std::max<std::size_t>(1, *std::max_element(counts.begin(), counts.end())));
  const Frame f{lo, hi, 0.0, top};
  std::ostringstream os;
  axes(os, f, title, x_label, "count", false);
  const double w = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double x = lo + w * static_cast<double>(b);
    const double c = static_cast<double>(counts[b]);
    os << "<rect x=\"" << fixed(f.px(x)) << "\" y=\"" << fixed(f.py(c)) << "\" width=\""
       << fixed(f.px(x + w) - f.px(x)) << "\" height=\"" << fixed(f.py(0) - f.py(c))
       << "\" fill=\"#1f77b4\" stroke=\"white\"/>\n";
  }
  if (marker && *marker >= lo && *marker <= hi) {
    os << "<line x1=\"" << fixed(f.px(*marker)) << "\" x2=\"" << fixed(f.px(*marker)) << "\" y1=\""
       << fixed(f.py(0)) << "\" y2=\"" << fixed(f.py(top)) << "\" stroke=\"#d62728\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace crn
