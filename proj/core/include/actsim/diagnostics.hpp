#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace actsim {

struct SourceLoc {
  uint32_t line = 0;  // 1-based; 0 = unknown
  uint32_t col = 0;
};

enum class Severity { Warning, Error };

struct Diagnostic {
  SourceLoc loc;
  Severity sev = Severity::Error;
  std::string message;
};

// Thrown after the offending diagnostic was recorded.
struct FrontendError : std::runtime_error {
  explicit FrontendError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

class DiagEngine {
public:
  explicit DiagEngine(std::string filename = "<input>")
      : filename_(std::move(filename)) {}

  void warn(SourceLoc loc, const std::string& msg) {
    diags_.push_back({loc, Severity::Warning, msg});
  }

  [[noreturn]] void error(SourceLoc loc, const std::string& msg) {
    diags_.push_back({loc, Severity::Error, msg});
    throw FrontendError(format(diags_.back()));
  }

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

  bool has_errors() const {
    for (const auto& d : diags_)
      if (d.sev == Severity::Error) return true;
    return false;
  }

  std::string format(const Diagnostic& d) const {
    std::ostringstream os;
    os << filename_ << ":" << d.loc.line << ":" << d.loc.col << ": "
       << (d.sev == Severity::Error ? "error" : "warning") << ": " << d.message;
    return os.str();
  }

  std::string format_all() const {
    std::string out;
    for (const auto& d : diags_) {
      out += format(d);
      out += "\n";
    }
    return out;
  }

private:
  std::string filename_;
  std::vector<Diagnostic> diags_;
};

}  // namespace actsim
