#pragma once

// Command-line front end: strict problem parsing, dispatch, reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pqlift/abchar.hpp"
#include "pqlift/heckeq.hpp"
#include "pqlift/heckequad.hpp"
#include "pqlift/serrepq.hpp"

namespace pqlift::cli {

using json = nlohmann::json;

enum ExitCode : int { kPass = 0, kFail = 1, kInvalidInput = 2, kInternalError = 3 };

inline constexpr int kProblemVersion = 1;

const std::vector<std::string>& commands();

struct Options {
  bool json = false;
  bool verbose = false;
  bool oracle = false;
  std::optional<std::size_t> precision;
};

struct Outcome {
  int exit_code = kPass;
  json report;
};

// ---------------------------------------------------------------------------
// Problem parsing

/// Object reader that rejects fields nobody asked for.
class Fields {
 public:
  Fields(const json& value, std::string path);

  std::int64_t integer(const std::string& key);
  std::optional<std::int64_t> optional_integer(const std::string& key);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  const json& object(const std::string& key);
  std::optional<json> optional_object(const std::string& key);
  const json& array(const std::string& key);
  std::string path(const std::string& key) const { return path_ + "." + key; }
  /// Throws on any field that was not read.
  void finish() const;

 private:
  const json& get(const std::string& key);
  const json& value_;
  std::string path_;
  std::set<std::string> seen_;
};

json parse_problem_text(std::string_view text);
std::vector<QmodZ> parse_images(const json& images, const std::string& path);
GroupCharacter parse_unit_character(const json& value, std::int64_t prime, const std::string& path);
DirichletCharacter parse_dirichlet(const json& value, const std::string& path);
FinAbGroup parse_group(const json& value, const std::string& path);
LocalGaloisDatum parse_datum(const json& value, std::int64_t ell, std::int64_t residue_char, int residue_degree,
                             const std::string& path);

// ---------------------------------------------------------------------------
// Report pieces

json to_json(const QmodZ& x);
json to_json(const Congruence& c);
json to_json(const GroupCharacter& c);
json to_json(const HeckeCertificate& c);
json to_json(const QuadCertificate& c);
json to_json(const WDParam& p);

std::uint64_t fnv1a64(std::string_view bytes);

/// Runs one command on a parsed problem. Never throws: errors become
/// reports with exit code 2 or 3.
Outcome execute(const std::string& command, const json& problem, const Options& options);

/// Plain-text rendering of a report.
std::string explain(const json& report, bool verbose = false);

/// Full command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pqlift::cli
