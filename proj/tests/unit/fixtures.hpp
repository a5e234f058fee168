#pragma once

#include "corners/io.hpp"

#include <string>

#ifndef CORNERS_FIXTURE_DIR
#error "CORNERS_FIXTURE_DIR must be defined"
#endif

inline std::string fixture_path(const std::string& name) { return std::string(CORNERS_FIXTURE_DIR) + "/" + name; }

inline corners::Tessellation load_fixture(const std::string& name) {
    return corners::read_tessellation_file(fixture_path(name));
}
