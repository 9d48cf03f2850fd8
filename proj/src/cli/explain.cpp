#include <sstream>

#include "pqlift/cli.hpp"

namespace pqlift::cli {

namespace {

std::string str(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render_character(std::ostringstream& os, const json& c, const std::string& indent) {
  os << indent;
  if (c.contains("place")) os << c["place"].get<std::string>() << " (prime " << c["prime"] << "): ";
  else if (c.contains("prime")) os << "at " << c["prime"] << ": ";
  if (c.contains("tame_exponent")) {
    os << "tame theta^" << c["tame_exponent"] << " on F_" << c["residue_field_size"] << ", wild order "
       << c["wild"]["order"] << ", conductor exponent " << c["conductor_exponent"] << "\n";
    return;
  }
  os << "order " << c["order"];
  if (c.contains("conductor")) os << ", conductor " << c["conductor"];
  os << ", images [";
  bool first = true;
  for (const auto& x : c["images"]) {
    os << (first ? "" : ", ") << str(x);
    first = false;
  }
  os << "]\n";
}

void render_certificate(std::ostringstream& os, const json& cert, bool verbose) {
  os << "certificate:\n";
  if (cert.contains("infinity_type")) {
    os << "  infinity type:";
    for (const auto& e : cert["infinity_type"]) os << " " << str(e["embedding"]) << "^" << e["exponent"];
    os << "\n";
    for (const auto& c : cert["local_chars"]) render_character(os, c, "  ");
    os << "  conductor: " << cert["conductor"] << "\n";
    return;
  }
  if (cert.contains("lift")) {
    render_character(os, cert["lift"], "  lift ");
    return;
  }
  if (cert.contains("witness")) {
    const auto& w = cert["witness"];
    os << "  " << str(w["shape"]) << " at ell=" << w["ell"] << " (residue degree " << w["residue_degree"] << ")\n";
    for (const auto& ch : w["characters"]) {
      os << "    inertial order " << ch["inertial"]["order"] << ", Frobenius " << str(ch["frobenius"]["zeta"])
         << " * ell^" << ch["frobenius"]["weight"] << "\n";
    }
    if (w["monodromy"].get<bool>()) os << "    monodromy N != 0\n";
    return;
  }
  if (verbose) os << "  " << cert.dump() << "\n";
}

}  // namespace

std::string explain(const json& report, bool verbose) {
  std::ostringstream os;
  os << "pqlift " << str(report.value("command", json("?"))) << ": " << str(report.value("verdict", json("?")))
     << "\n";
  if (report.contains("error")) {
    os << "error (" << str(report["error"]["kind"]) << "): " << str(report["error"]["message"]) << "\n";
    return os.str();
  }
  bool flagged = false;
  for (const auto& c : report.value("conditions", json::array())) {
    const bool holds = c["holds"].get<bool>();
    std::string marker = holds ? "  ✓ " : "  ✗ ";
    if (!holds && !flagged) {
      marker = ">>✗ ";
      flagged = true;
    }
    os << marker << str(c["label"]);
    const std::string place = str(c["place"]);
    if (!place.empty()) os << " at " << place;
    os << ": " << str(c["detail"]);
    if (!holds && marker == ">>✗ ") os << "   <- first failure";
    os << "\n";
  }
  const json& result = report.value("result", json::object());
  if (result.contains("k_class")) {
    os << "weight: k ≡ " << result["k_class"]["residue"] << " mod " << result["k_class"]["modulus"] << " (k = "
       << result["k"] << ")\n";
  }
  if (report.contains("certificate")) render_certificate(os, report["certificate"], verbose);
  if (report.contains("oracle")) {
    const auto& o = report["oracle"];
    os << "oracle: " << (o.value("applicable", false) ? (o.value("agrees", false) ? "agrees" : "DISAGREES")
                                                       : "not applicable")
       << "\n";
  }
  if (verbose) {
    os << "result: " << result.dump(2) << "\n";
    os << "input hash: " << str(report["provenance"]["input_hash"]) << "\n";
  }
  return os.str();
}

}  // namespace pqlift::cli
