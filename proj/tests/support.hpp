#pragma once

#include "protochk/format.hpp"
#include "protochk/testkit.hpp"

#include <string>

#ifndef PROTOCHK_SOURCE_DIR
#define PROTOCHK_SOURCE_DIR "."
#endif

namespace support {

/// Parses a document holding exactly one transition system.
inline protochk::Sts sts(const std::string& text) { return protochk::parse_sts(text).systems.at(0); }

inline std::string source_path(const std::string& rel) { return std::string(PROTOCHK_SOURCE_DIR) + "/" + rel; }

inline const protochk::Sts& fig(int n, const std::string& name)
{
    return protochk::testkit::fixture("F" + std::to_string(n)).get(name);
}

} // namespace support
