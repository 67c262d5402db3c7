// log.hpp - minimal stderr logger. Verbosity comes from the QOSCOMPOSE_LOG
// environment variable (error|warn|info|debug|trace, default warn) or from
// set_threshold(). Output never goes to stdout; stdout is reserved for
// machine-readable reports.

#pragma once

#include <string>

namespace qosc::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3, Trace = 4 };

Level threshold();
void set_threshold(Level level);
bool enabled(Level level);
void write(Level level, const std::string& msg);

inline void error(const std::string& msg) { write(Level::Error, msg); }
inline void warn(const std::string& msg) { write(Level::Warn, msg); }
inline void info(const std::string& msg) { write(Level::Info, msg); }
inline void debug(const std::string& msg) { write(Level::Debug, msg); }
inline void trace(const std::string& msg) { write(Level::Trace, msg); }

}  // namespace qosc::log
