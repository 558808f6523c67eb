#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thimac {

enum class Errc {
  InvalidName,
  UnknownParent,
  DuplicateSiblingName,
  UnknownThimac,
  DuplicateKindInMachine,
  DuplicateAlias,
  UnknownStage,
  UnknownFlow,
  IllegalSuccession,
  UnpairedBoundaryCrossing,
  SelfTrigger,
  EmptyRegion,
  DisconnectedRegion,
  NonLinearRegion,
  InvalidTime,
  DuplicateEvent,
  UnknownEvent,
  SelfLoop,
  InvalidLetter,
  NoLegalReading,
  AmbiguousReading,
  UnknownVerb,
  InvalidScenario,
  StuckThing,
  UnknownEventInProjection,
};

std::string_view errc_name(Errc code);

// All model, event, and simulation failures surface as this exception.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  Errc code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  Errc code_;
  std::string detail_;
};

}  // namespace thimac
