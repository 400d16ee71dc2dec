#pragma once
// CSV output: RFC-4180-style quoting, shortest round-trip float formatting,
// and atomic file writes (temp file + rename) so an error never leaves a
// partially written result behind.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace rissm {

// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Quotes a field only when RFC 4180 requires it.
inline std::string csv_field(std::string_view s) {
  const bool needs_quote = s.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quote) return std::string(s);
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Writes `content` to `path` atomically: the data lands under a temporary
// name first and is renamed into place only once fully flushed.
inline void write_file_atomic(const std::filesystem::path& path,
                              std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ec2;
    std::filesystem::remove(tmp, ec2);
    throw std::runtime_error("cannot move results into '" + path.string() +
                             "': " + ec.message());
  }
}

// Joins pre-escaped fields into one CSV line.
inline std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line.push_back(',');
    line += csv_field(fields[i]);
  }
  return line;
}

// Renders a header plus data rows; refuses to produce an empty table.
inline std::string render_csv(const std::string& header,
                              const std::vector<std::string>& rows) {
  if (rows.empty()) throw std::invalid_argument("no records to write");
  std::string out = header;
  out.push_back('\n');
  for (const auto& r : rows) {
    out += r;
    out.push_back('\n');
  }
  return out;
}

inline void write_csv(const std::filesystem::path& path,
                      const std::string& header,
                      const std::vector<std::string>& rows) {
  write_file_atomic(path, render_csv(header, rows));
}

}  // namespace rissm
