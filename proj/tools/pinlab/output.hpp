#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>
#include <pinning/lattice.hpp>

namespace pinlab {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Point as space-separated coordinates, e.g. "-1 2".
std::string format_point(const pinning::Point& x);

/// Writes the file in one go; throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& doc);

}  // namespace pinlab
