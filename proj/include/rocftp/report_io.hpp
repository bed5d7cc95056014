#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace rocftp::io {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Fixed 17-significant-digit form used in CSV output (bit-faithful).
std::string format_double17(double v);

/// Writes via a temp file in the same directory plus rename, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace rocftp::io
