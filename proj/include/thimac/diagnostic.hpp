#pragma once

#include <string>
#include <string_view>

namespace thimac {

enum class Severity { Error, Warning };

inline std::string_view severity_name(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

/// A semantic finding. Codes are a stable contract:
///   V1 duplicate kind per machine      V4 nesting cycle
///   V2 illegal flow succession         V5 dead potentiality (no incident edge)
///   V3 boundary crossing not T -> T    V6 transfer stage with no boundary flow
///   B1 precedence edge without a region-crossing flow or trigger
///   B2 event unreachable from every source event
///   B3 precedence cycle
struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  std::string subject;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
  auto operator<=>(const Diagnostic&) const = default;
};

}  // namespace thimac
