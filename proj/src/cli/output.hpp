// Deterministic CSV / JSON emission for the command-line tool.

#ifndef CARTAN_CLI_OUTPUT_HPP
#define CARTAN_CLI_OUTPUT_HPP

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace cartan::cli {

using Json = nlohmann::ordered_json;

enum class Format { Csv, Json };

Format parse_format(const std::string& name);

/// Opens the output target: an explicit path, else <dir>/<default_name> when
/// the CARTAN_OUTPUT_DIR environment variable is set, else standard output.
/// Throws std::runtime_error when the file cannot be opened.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, const std::string& default_name);
  std::ostream& stream() { return *out_; }
  const std::string& description() const { return description_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
  std::string description_;
};

/// Numbers with 17 significant digits, LF line endings.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  /// Numeric fields followed by trailing text fields.
  void row(const std::vector<double>& values, const std::vector<std::string>& text);

 private:
  std::ostream& out_;
};

void write_json(std::ostream& out, const Json& j);

}  // namespace cartan::cli

#endif  // CARTAN_CLI_OUTPUT_HPP
