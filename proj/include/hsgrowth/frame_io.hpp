#pragma once

// Frame CSV files:
//   # t=<t> nx=<N> h=<h> field=<name>
//   N lines of N comma-separated values (17 significant digits); line k holds
//   row j = k, columns i = 1..N.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hsgrowth/config.hpp"
#include "hsgrowth/errors.hpp"
#include "hsgrowth/grid.hpp"

namespace hsgrowth {

class FrameFormatError : public Error {
 public:
  using Error::Error;
};

inline std::string format_real(double x) { return detail::format_real(x); }

inline std::string frame_filename(const std::string& field, long step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%08ld.csv", field.c_str(), step);
  return buf;
}

inline void write_frame(std::ostream& out, const ScalarField& f, double t,
                        const std::string& field) {
  out << "# t=" << format_real(t) << " nx=" << f.n()
      << " h=" << format_real(f.h()) << " field=" << field << '\n';
  for (int j = 1; j <= f.n(); ++j) {
    for (int i = 1; i <= f.n(); ++i) {
      if (i > 1) out << ',';
      out << format_real(f(i, j));
    }
    out << '\n';
  }
}

inline void write_frame_file(const std::filesystem::path& path,
                             const ScalarField& f, double t,
                             const std::string& field) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write frame '" + path.string() + "'");
  write_frame(out, f, t, field);
}

namespace detail {

inline double parse_frame_number(const std::string& text) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end == text.c_str() || *end != '\0') {
    throw FrameFormatError("bad number '" + text + "' in frame");
  }
  return x;
}

}  // namespace detail

struct Frame {
  double t = 0.0;
  int nx = 0;
  double h = 0.0;
  std::string field;
  std::vector<double> values;  // row-major, j outer
};

inline Frame read_frame(std::istream& in) {
  Frame frame;
  std::string header;
  if (!std::getline(in, header) || !header.starts_with("# ")) {
    throw FrameFormatError("frame header missing");
  }
  std::istringstream tokens(header.substr(2));
  std::string token;
  bool have_t = false, have_nx = false, have_h = false;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw FrameFormatError("bad header token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "t") {
      frame.t = detail::parse_frame_number(value);
      have_t = true;
    } else if (key == "nx") {
      frame.nx = static_cast<int>(detail::parse_frame_number(value));
      have_nx = true;
    } else if (key == "h") {
      frame.h = detail::parse_frame_number(value);
      have_h = true;
    } else if (key == "field") {
      frame.field = value;
    }
  }
  if (!have_t || !have_nx || !have_h || frame.nx <= 0) {
    throw FrameFormatError("frame header incomplete: '" + header + "'");
  }
  std::string line;
  for (int j = 0; j < frame.nx; ++j) {
    if (!std::getline(in, line)) throw FrameFormatError("frame truncated");
    std::istringstream row(line);
    std::string cell;
    int count = 0;
    while (std::getline(row, cell, ',')) {
      frame.values.push_back(detail::parse_frame_number(cell));
      ++count;
    }
    if (count != frame.nx) {
      throw FrameFormatError("frame row " + std::to_string(j + 1) + " has " +
                             std::to_string(count) + " values");
    }
  }
  return frame;
}

inline Frame read_frame_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FrameFormatError("cannot read frame '" + path.string() + "'");
  return read_frame(in);
}

}  // namespace hsgrowth
