// Copyright 2026 The qst Authors
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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "qst/ensemble.hpp"

#ifndef QST_VERSION
#define QST_VERSION "unknown"
#endif

namespace qst {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedFileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw MalformedFileError("spectra.csv line " + std::to_string(line_no) + ": bad number '" +
                             std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::string_view code_version() { return QST_VERSION; }

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{
      {"state", c.state},
      {"scheme", to_string(c.scheme)},
      {"count_model", {{"mode", to_string(c.counts.mode)}, {"N", c.counts.events_per_setting}}},
      {"total_counts", c.total_counts},
      {"replicas", c.replicas},
      {"master_seed", c.master_seed},
  };
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  c = ExperimentConfig{};
  c.state = j.at("state").get<StateSpec>();
  c.scheme = scheme_from_string(j.at("scheme").get<std::string>());
  const auto& cm = j.at("count_model");
  c.counts.mode = count_mode_from_string(cm.at("mode").get<std::string>());
  c.counts.events_per_setting = cm.at("N").get<std::int64_t>();
  c.total_counts = j.value("total_counts", std::int64_t{0});
  c.replicas = j.at("replicas").get<std::size_t>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
}

std::string format_spectra_csv(const SpectrumRows& rows) {
  std::string out = "replica";
  for (Eigen::Index c = 0; c < rows.cols(); ++c) out += ",l_" + std::to_string(c + 1);
  out += '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    out += std::to_string(r);
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.17g", rows(r, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void save_ensemble(const SpectrumEnsemble& ensemble, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  nlohmann::json config = ensemble.config;
  config["schema_version"] = kEnsembleSchemaVersion;
  config["code_version"] = code_version();
  const std::string csv = format_spectra_csv(ensemble.rows);
  write_file(dir / "config.json", config.dump(2) + "\n");
  write_file(dir / "spectra.csv", csv);
  write_file(dir / "checksum.txt", sha256_hex(csv) + "\n");
}

SpectrumEnsemble load_ensemble(const fs::path& dir) {
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(read_file(dir / "config.json"));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFileError(std::string("config.json: ") + e.what());
  }
  if (!config.contains("schema_version") || !config["schema_version"].is_number_integer()) {
    throw MalformedFileError("config.json lacks an integer schema_version");
  }
  const int version = config["schema_version"].get<int>();
  if (version > kEnsembleSchemaVersion) {
    throw VersionMismatchError("ensemble schema version " + std::to_string(version) +
                               " is newer than supported version " +
                               std::to_string(kEnsembleSchemaVersion));
  }
  if (version < 1) throw MalformedFileError("invalid schema_version");

  SpectrumEnsemble out;
  try {
    out.config = config.get<ExperimentConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFileError(std::string("config.json: ") + e.what());
  }
  const int n = out.config.state.n;
  if (n < 1 || n > kMaxDenseQubits) throw MalformedFileError("config.json: invalid qubit count");
  const auto dim = static_cast<Eigen::Index>(dimension(n));

  const std::string csv = read_file(dir / "spectra.csv");
  if (csv.empty() || csv.back() != '\n') throw MalformedFileError("spectra.csv is truncated");
  std::vector<std::string_view> lines = split(std::string_view(csv).substr(0, csv.size() - 1), '\n');

  const auto header = split(lines.front(), ',');
  if (header.empty() || header.front() != "replica") throw MalformedFileError("spectra.csv header");
  const auto columns = static_cast<Eigen::Index>(header.size()) - 1;
  if (columns != dim) {
    throw DimensionError("spectra.csv has " + std::to_string(columns) + " eigenvalue columns, expected " +
                         std::to_string(dim));
  }
  const auto replicas = static_cast<Eigen::Index>(lines.size()) - 1;
  if (replicas != static_cast<Eigen::Index>(out.config.replicas)) {
    throw MalformedFileError("spectra.csv row count does not match config replicas");
  }
  out.rows.resize(replicas, dim);
  for (Eigen::Index r = 0; r < replicas; ++r) {
    const std::size_t line_no = static_cast<std::size_t>(r) + 2;
    const auto fields = split(lines[static_cast<std::size_t>(r) + 1], ',');
    if (static_cast<Eigen::Index>(fields.size()) != dim + 1) {
      throw MalformedFileError("spectra.csv line " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size()) + " fields");
    }
    if (parse_double(fields[0], line_no) != static_cast<double>(r)) {
      throw MalformedFileError("spectra.csv line " + std::to_string(line_no) + ": replica index out of order");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      out.rows(r, c) = parse_double(fields[static_cast<std::size_t>(c) + 1], line_no);
    }
    if (std::abs(out.rows.row(r).sum() - 1.0) > 1e-9) {
      throw MalformedFileError("spectra.csv line " + std::to_string(line_no) + " does not sum to 1");
    }
  }

  std::string expected = read_file(dir / "checksum.txt");
  while (!expected.empty() && (expected.back() == '\n' || expected.back() == '\r' || expected.back() == ' ')) {
    expected.pop_back();
  }
  if (expected != sha256_hex(csv)) throw ChecksumError("spectra.csv does not match checksum.txt");

  out.summary = summarize(out.rows);
  return out;
}

}  // namespace qst
