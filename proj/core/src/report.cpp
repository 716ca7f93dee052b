#include "nsk/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "nsk/errors.hpp"

namespace nsk {

std::string version() { return NSK_VERSION; }

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string series_csv(const NormSeries& series) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out += g17(series.times()[i]) + "," + g17(series.values()[i]) + "\n";
  return out;
}

std::string loglog_svg(const std::string& title, const std::vector<PlotCurve>& curves,
                       const std::vector<GuideLine>& guides) {
  constexpr double W = 640, H = 440, left = 70, right = 20, top = 40, bottom = 50;
  double tmin = INFINITY, tmax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.series->size(); ++i) {
      const double t = c.series->times()[i], v = c.series->values()[i];
      if (t <= 0 || v <= 0 || !std::isfinite(v)) continue;
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (!std::isfinite(tmin)) tmin = 1, tmax = 10, vmin = 1, vmax = 10;
  if (tmin == tmax) tmin /= 2, tmax *= 2;
  if (vmin == vmax) vmin /= 2, vmax *= 2;
  const double lx0 = std::log10(tmin), lx1 = std::log10(tmax);
  const double ly0 = std::log10(vmin) - 0.05 * (std::log10(vmax) - std::log10(vmin));
  const double ly1 = std::log10(vmax) + 0.05 * (std::log10(vmax) - std::log10(vmin));
  auto X = [&](double t) { return left + (std::log10(t) - lx0) / (lx1 - lx0) * (W - left - right); };
  auto Y = [&](double v) { return H - bottom - (std::log10(v) - ly0) / (ly1 - ly0) * (H - top - bottom); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape_xml(title) << "</text>\n";
  s << "<clipPath id=\"frame\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\""
    << W - left - right << "\" height=\"" << H - top - bottom << "\"/></clipPath>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right
    << "\" height=\"" << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  // Decade ticks.
  for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
    const double x = X(std::pow(10.0, d));
    s << "<line x1=\"" << x << "\" y1=\"" << H - bottom << "\" x2=\"" << x << "\" y2=\""
      << H - bottom + 5 << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << x << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">1e" << d
      << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
    const double y = Y(std::pow(10.0, d));
    s << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << d
      << "</text>\n";
  }
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">t</text>\n";

  double legend_y = top + 16;
  auto legend = [&](const std::string& color, const std::string& dash, const std::string& label) {
    s << "<line x1=\"" << left + 10 << "\" y1=\"" << legend_y - 4 << "\" x2=\"" << left + 34
      << "\" y2=\"" << legend_y - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << dash
      << "/>\n";
    s << "<text x=\"" << left + 40 << "\" y=\"" << legend_y << "\">" << escape_xml(label)
      << "</text>\n";
    legend_y += 16;
  };

  std::size_t k = 0;
  for (const auto& c : curves) {
    const std::string color = kPalette[k++ % std::size(kPalette)];
    std::string points;
    for (std::size_t i = 0; i < c.series->size(); ++i) {
      const double t = c.series->times()[i], v = c.series->values()[i];
      if (t <= 0 || v <= 0 || !std::isfinite(v)) continue;
      points += g4(X(t)) + "," + g4(Y(v)) + " ";
    }
    s << "<polyline clip-path=\"url(#frame)\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
    legend(color, "", c.label);
  }
  for (const auto& g : guides) {
    if (!std::isfinite(g.slope) || g.anchor_t <= 0 || g.anchor_value <= 0) continue;
    const double v0 = g.anchor_value * std::pow(tmin / g.anchor_t, g.slope);
    const double v1 = g.anchor_value * std::pow(tmax / g.anchor_t, g.slope);
    s << "<line clip-path=\"url(#frame)\" x1=\"" << g4(X(tmin)) << "\" y1=\"" << g4(Y(v0))
      << "\" x2=\"" << g4(X(tmax)) << "\" y2=\"" << g4(Y(v1))
      << "\" stroke=\"gray\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
    legend("gray", " stroke-dasharray=\"6,4\"", g.label);
  }
  s << "</svg>\n";
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string file_stem(const std::string& descriptor) {
  std::string out;
  for (char c : descriptor) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "series" : out;
}

}  // namespace nsk
