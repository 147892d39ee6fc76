#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlcfar/curve.hpp"

namespace dlcfar {

std::string csv_escape(const std::string& field);
std::string format_number(double x);

// RFC 4180, CRLF line ends. Header x,y,ci_lo,ci_hi (or the curve's labels when named).
std::string curve_to_csv(const Curve& curve);
// Generic table; every row must match the header width.
std::string table_to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

void write_text_file(const std::string& path, const std::string& contents);

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t x);

const char* build_git_describe();

// Records one command invocation. Each output path is listed once.
class RunManifest {
 public:
  RunManifest(std::string command_line, nlohmann::json config, std::uint64_t seed);

  void add_tag(const std::string& tag);
  void add_output(const std::string& path);
  void set_extra(const std::string& key, nlohmann::json value);
  const std::vector<std::string>& outputs() const { return outputs_; }

  nlohmann::json to_json() const;
  void write(const std::string& path);

 private:
  std::string command_line_;
  nlohmann::json config_;
  std::uint64_t seed_;
  std::vector<std::string> tags_;
  std::vector<std::string> outputs_;
  nlohmann::json extra_ = nlohmann::json::object();
  std::chrono::steady_clock::time_point start_;
};

}  // namespace dlcfar
