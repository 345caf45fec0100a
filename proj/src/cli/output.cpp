#include "cli/output.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <stdexcept>

namespace cartan::cli {

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

OutputTarget::OutputTarget(const std::string& path, const std::string& default_name) : out_(&std::cout) {
  std::string target = path;
  if (target.empty()) {
    if (const char* dir = std::getenv("CARTAN_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      target = (std::filesystem::path(dir) / default_name).string();
    }
  }
  if (target.empty() || target == "-") {
    description_ = "stdout";
    return;
  }
  file_ = std::make_unique<std::ofstream>(target, std::ios::binary | std::ios::trunc);
  if (!*file_) throw std::runtime_error("cannot open output file '" + target + "'");
  out_ = file_.get();
  description_ = target;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
  for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) { row(values, {}); }

void CsvWriter::row(const std::vector<double>& values, const std::vector<std::string>& text) {
  bool first = true;
  for (double v : values) {
    out_ << (first ? "" : ",") << format_number(v);
    first = false;
  }
  for (const auto& t : text) {
    out_ << (first ? "" : ",") << t;
    first = false;
  }
  out_ << '\n';
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

}  // namespace cartan::cli
