#pragma once

#include <functional>
#include <string>

namespace conelab::log {

enum class Level { debug, info, warning, error };

using Sink = std::function<void(Level, const std::string&)>;

/// Replaces the process-wide sink.  The default writes warnings and errors
/// to stderr and drops everything else.  Returns the previous sink.
Sink set_sink(Sink sink);

void write(Level level, const std::string& message);
inline void warning(const std::string& message) { write(Level::warning, message); }
inline void info(const std::string& message) { write(Level::info, message); }

}  // namespace conelab::log
