#ifndef LOLREC_SRC_IO_UTIL_HPP
#define LOLREC_SRC_IO_UTIL_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace lolrec::detail {

// Writes content to path via a sibling temp file plus rename, so failed
// commands never leave partial output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Whole-file read; nullopt when the file cannot be opened.
std::optional<std::string> read_file(const std::filesystem::path& path);

// Shortest-roundtrip decimal rendering of a double (std::to_chars).
std::string format_double(double value);

}  // namespace lolrec::detail

#endif  // LOLREC_SRC_IO_UTIL_HPP
