// Copyright 2026 The uavbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reader for exported per-sensor text files, plus the checksum hook used to
// verify a user-supplied copy of the dataset.
//
// One file per sensor, named <SENSOR>.csv (or .tsv / .txt).  The first line
// is a header; the delimiter (comma, semicolon or tab) is taken from it.
// A `TimeUS` column is required, a `label` column is optional, every other
// column is a numeric channel.  See data/README.md.

#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/text.hpp"
#include "uavbench/ingest/align.hpp"

namespace uavbench::ingest {

inline char detect_delimiter(std::string_view header) {
  for (char d : {'\t', ';', ','}) {
    if (header.find(d) != std::string_view::npos) return d;
  }
  return ',';
}

inline SensorStream read_stream(std::istream& is, const std::string& sensor) {
  std::string line;
  if (!std::getline(is, line)) throw DataError(sensor + ": empty file");
  const char delim = detect_delimiter(line);
  auto header = text::split(text::trim(line), delim);
  for (auto& h : header) h = std::string(text::trim(h));

  SensorStream s;
  s.sensor = sensor;
  std::ptrdiff_t time_col = -1, label_col = -1;
  std::vector<std::size_t> chan_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "TimeUS") {
      time_col = static_cast<std::ptrdiff_t>(i);
    } else if (header[i] == "label") {
      label_col = static_cast<std::ptrdiff_t>(i);
    } else {
      chan_cols.push_back(i);
      s.channels.push_back(header[i]);
    }
  }
  if (time_col < 0) throw DataError(sensor + ": no TimeUS column");
  if (label_col >= 0) s.labels.emplace();
  s.values = Matrix(0, chan_cols.size());

  std::vector<double> row(chan_cols.size());
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    const auto trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    const auto f = text::split(trimmed, delim);
    if (f.size() != header.size()) {
      throw DataError(sensor + " line " + std::to_string(lineno) + ": field count " + std::to_string(f.size()) +
                      " != header width " + std::to_string(header.size()));
    }
    try {
      s.time_us.push_back(text::parse_int(text::trim(f[static_cast<std::size_t>(time_col)])));
      for (std::size_t j = 0; j < chan_cols.size(); ++j) row[j] = text::parse_double(text::trim(f[chan_cols[j]]));
      if (label_col >= 0) {
        s.labels->push_back(static_cast<int>(text::parse_int(text::trim(f[static_cast<std::size_t>(label_col)]))));
      }
    } catch (const Error& e) {
      throw DataError(sensor + " line " + std::to_string(lineno) + ": " + e.what());
    }
    s.values.append_row(row);
  }
  s.validate();
  return s;
}

inline bool is_stream_file(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return ext == ".csv" || ext == ".tsv" || ext == ".txt";
}

/// Every stream file in `dir`, in filename order.
inline std::vector<SensorStream> read_raw_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("raw directory '" + dir.string() + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_stream_file(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no sensor files in '" + dir.string() + "'");
  std::vector<SensorStream> out;
  for (const auto& p : files) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot open '" + p.string() + "'");
    out.push_back(read_stream(in, p.stem().string()));
  }
  return out;
}

/// Lower-case hex SHA-256 of a file's bytes.
inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256: digest init failed");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

struct ChecksumMismatch {
  std::string file;
  std::string expected;
  std::string actual;  // empty when the file is missing
};

/// Checks files in `dir` against a manifest in `sha256sum` format
/// ("<hex>  <filename>" per line).  Returns the mismatches; empty means the
/// copy is intact.
inline std::vector<ChecksumMismatch> verify_checksums(const std::filesystem::path& dir,
                                                      const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw DataError("cannot open checksum manifest '" + manifest.string() + "'");
  std::vector<ChecksumMismatch> bad;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto sp = t.find_first_of(" \t");
    if (sp == std::string_view::npos) throw DataError("malformed manifest line: " + std::string(t));
    const std::string expected(t.substr(0, sp));
    std::string name(text::trim(t.substr(sp)));
    if (!name.empty() && name.front() == '*') name.erase(0, 1);
    const auto p = dir / name;
    if (!std::filesystem::exists(p)) {
      bad.push_back({name, expected, {}});
      continue;
    }
    const auto actual = sha256_file(p);
    if (actual != expected) bad.push_back({name, expected, actual});
  }
  return bad;
}

}  // namespace uavbench::ingest
