#include "qoscompose/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace qosc::log {

namespace {

Level g_threshold = Level::Warn;
std::once_flag g_env_once;
std::mutex g_write_mutex;

Level parse_level(const char* s) {
    const std::string v = s ? s : "";
    if (v == "error") return Level::Error;
    if (v == "warn" || v == "warning") return Level::Warn;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    if (v == "trace") return Level::Trace;
    return Level::Warn;
}

void init_from_env() {
    if (const char* env = std::getenv("QOSCOMPOSE_LOG")) g_threshold = parse_level(env);
}

const char* level_name(Level level) {
    switch (level) {
        case Level::Error: return "error";
        case Level::Warn: return "warn";
        case Level::Info: return "info";
        case Level::Debug: return "debug";
        case Level::Trace: return "trace";
    }
    return "?";
}

}  // namespace

Level threshold() {
    std::call_once(g_env_once, init_from_env);
    return g_threshold;
}

void set_threshold(Level level) {
    std::call_once(g_env_once, init_from_env);
    g_threshold = level;
}

bool enabled(Level level) {
    return static_cast<int>(level) <= static_cast<int>(threshold());
}

void write(Level level, const std::string& msg) {
    if (!enabled(level)) return;
    std::lock_guard<std::mutex> lock(g_write_mutex);
    std::fprintf(stderr, "qoscompose: %s: %s\n", level_name(level), msg.c_str());
}

}  // namespace qosc::log
