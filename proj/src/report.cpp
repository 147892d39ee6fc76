#include "dlcfar/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dlcfar/types.hpp"

#ifndef DLCFAR_GIT_DESCRIBE
#define DLCFAR_GIT_DESCRIBE "unknown"
#endif

namespace dlcfar {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string curve_to_csv(const Curve& curve) {
  std::string out = "x,y,ci_lo,ci_hi\r\n";
  for (const auto& p : curve.points) {
    out += format_number(p.x) + ',' + format_number(p.y) + ',' + format_number(p.ci_lo) + ',' +
           format_number(p.ci_hi) + "\r\n";
  }
  return out;
}

std::string table_to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += csv_escape(cells[i]);
    }
    return s + "\r\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw DomainError("table_to_csv: row width differs from header");
    out += line(r);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << contents;
  if (!out) throw ConfigError("write failed for " + path);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

const char* build_git_describe() { return DLCFAR_GIT_DESCRIBE; }

RunManifest::RunManifest(std::string command_line, nlohmann::json config, std::uint64_t seed)
    : command_line_(std::move(command_line)),
      config_(std::move(config)),
      seed_(seed),
      start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_tag(const std::string& tag) {
  if (std::find(tags_.begin(), tags_.end(), tag) == tags_.end()) tags_.push_back(tag);
}

void RunManifest::add_output(const std::string& path) {
  if (std::find(outputs_.begin(), outputs_.end(), path) == outputs_.end()) outputs_.push_back(path);
}

void RunManifest::set_extra(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

nlohmann::json RunManifest::to_json() const {
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json j;
  j["command_line"] = command_line_;
  j["config"] = config_;
  j["config_digest"] = hex64(fnv1a64(config_.dump()));
  j["seed"] = seed_;
  j["detectors"] = tags_;
  j["outputs"] = outputs_;
  j["git_describe"] = build_git_describe();
  j["wall_time_s"] = wall;
  if (!extra_.empty()) j["results"] = extra_;
  return j;
}

void RunManifest::write(const std::string& path) { write_text_file(path, to_json().dump(2) + "\n"); }

}  // namespace dlcfar
