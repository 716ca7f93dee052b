#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nsk/norms.hpp"

namespace nsk {

/// Toolkit version string embedded in every manifest.
std::string version();

/// "t,value" header then one row per sample, both columns in %.17g.
std::string series_csv(const NormSeries& series);

/// Straight guide line y = anchor_value (t / anchor_t)^slope drawn over the plot.
struct GuideLine {
  double slope;
  double anchor_t;
  double anchor_value;
  std::string label;
};

struct PlotCurve {
  const NormSeries* series;
  std::string label;
};

/// Log-log SVG of the curves. Non-positive samples are left out; an empty
/// plot still renders its frame.
std::string loglog_svg(const std::string& title, const std::vector<PlotCurve>& curves,
                       const std::vector<GuideLine>& guides);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

/// Reads the whole file. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// File-system safe form of a series descriptor.
std::string file_stem(const std::string& descriptor);

}  // namespace nsk
