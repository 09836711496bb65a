#include "stylecast/fs_util.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "stylecast/error.hpp"

namespace stylecast {

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot replace '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error("cannot format double");
  return std::string(buf.data(), end);
}

std::string format_hex_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::hex);
  if (ec != std::errc{}) throw Error("cannot format double");
  // to_chars omits the 0x prefix; add it so the text is a C hex literal.
  std::string out(buf.data(), end);
  out.insert(out.front() == '-' ? 1 : 0, "0x");
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  std::from_chars_result res{};
  if (text.size() > 2 && (text.starts_with("0x") || text.starts_with("-0x"))) {
    // from_chars does not accept the 0x prefix for hex floats.
    const bool neg = text.front() == '-';
    res = std::from_chars(first + (neg ? 3 : 2), last, value, std::chars_format::hex);
    if (neg) value = -value;
  } else {
    res = std::from_chars(first, last, value);
  }
  if (text.empty() || res.ec != std::errc{} || res.ptr != last) {
    throw ValidationError("invalid number for " + std::string(what) + ": '" +
                          std::string(text) + "'");
  }
  return value;
}

long long parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  long long value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ValidationError("invalid integer for " + std::string(what) + ": '" +
                          std::string(text) + "'");
  }
  return value;
}

unsigned long long parse_uint(std::string_view text, std::string_view what) {
  text = trim(text);
  unsigned long long value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ValidationError("invalid unsigned integer for " + std::string(what) + ": '" +
                          std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view text) {
  const auto ws = " \t\r\n";
  auto b = text.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = text.find_last_not_of(ws);
  return text.substr(b, e - b + 1);
}

}  // namespace stylecast
