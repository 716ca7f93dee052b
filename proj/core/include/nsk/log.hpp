#pragma once

#include <functional>
#include <string>

namespace nsk {

/// Warnings go through a process-wide sink; default writes to stderr.
using LogSink = std::function<void(const std::string&)>;

void set_warning_sink(LogSink sink);
void log_warning(const std::string& message);

}  // namespace nsk
