#pragma once

// Locale-independent number formatting, static SVG plots and run manifests.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

/// 17 significant digits, '.' decimal point, independent of the global locale.
std::string format_double(double v);

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view bytes);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool log_y = false;
};

/// 800×500 self-contained SVG. No timestamps or random ids, so output is reproducible.
std::string render_line_svg(const LinePlot& plot);

std::string render_histogram_svg(std::span<const double> values, std::size_t bins,
                                 const std::string& title, const std::string& x_label,
                                 std::optional<double> marker = std::nullopt);

}  // namespace crn
