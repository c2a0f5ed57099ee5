#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace skewlab {

inline constexpr const char* kToolVersion = "skewlab 0.1.0";

/// Decimal rendering with 17 significant digits, the format used for every
/// real in report files.
std::string fmt_real(double v);

/// Same, but non-finite values become JSON null.
std::string fmt_real_json(double v);

std::string json_escape(std::string_view s);

/// FNV-1a 64-bit, used for the provenance hash embedded in reports.
std::uint64_t fnv1a64(std::string_view s);

std::string hex64(std::uint64_t v);

/// Current UTC time, ISO 8601. The one report field allowed to differ
/// between otherwise identical runs.
std::string timestamp_utc();

void ensure_directory(const std::string& path);

void write_file(const std::string& path, const std::string& content);

} // namespace skewlab
