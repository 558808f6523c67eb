#include "thimac/action_kind.hpp"

#include "thimac/error.hpp"

namespace thimac {

std::string_view kind_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::Create:   return "create";
    case ActionKind::Process:  return "process";
    case ActionKind::Release:  return "release";
    case ActionKind::Transfer: return "transfer";
    case ActionKind::Receive:  return "receive";
  }
  return "?";
}

std::optional<ActionKind> parse_kind(std::string_view word) {
  for (ActionKind k : kAllKinds)
    if (kind_name(k) == word) return k;
  return std::nullopt;
}

char kind_letter(ActionKind kind) {
  switch (kind) {
    case ActionKind::Create:   return 'C';
    case ActionKind::Process:  return 'P';
    case ActionKind::Release:  return 'R';
    case ActionKind::Transfer: return 'T';
    case ActionKind::Receive:  return 'R';
  }
  return '?';
}

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidName:              return "InvalidName";
    case Errc::UnknownParent:            return "UnknownParent";
    case Errc::DuplicateSiblingName:     return "DuplicateSiblingName";
    case Errc::UnknownThimac:            return "UnknownThimac";
    case Errc::DuplicateKindInMachine:   return "DuplicateKindInMachine";
    case Errc::DuplicateAlias:           return "DuplicateAlias";
    case Errc::UnknownStage:             return "UnknownStage";
    case Errc::UnknownFlow:              return "UnknownFlow";
    case Errc::IllegalSuccession:        return "IllegalSuccession";
    case Errc::UnpairedBoundaryCrossing: return "UnpairedBoundaryCrossing";
    case Errc::SelfTrigger:              return "SelfTrigger";
    case Errc::EmptyRegion:              return "EmptyRegion";
    case Errc::DisconnectedRegion:       return "DisconnectedRegion";
    case Errc::NonLinearRegion:          return "NonLinearRegion";
    case Errc::InvalidTime:              return "InvalidTime";
    case Errc::DuplicateEvent:           return "DuplicateEvent";
    case Errc::UnknownEvent:             return "UnknownEvent";
    case Errc::SelfLoop:                 return "SelfLoop";
    case Errc::InvalidLetter:            return "InvalidLetter";
    case Errc::NoLegalReading:           return "NoLegalReading";
    case Errc::AmbiguousReading:         return "AmbiguousReading";
    case Errc::UnknownVerb:              return "UnknownVerb";
    case Errc::InvalidScenario:          return "InvalidScenario";
    case Errc::StuckThing:               return "StuckThing";
    case Errc::UnknownEventInProjection: return "UnknownEventInProjection";
  }
  return "Unknown";
}

}  // namespace thimac
