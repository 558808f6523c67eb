#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace thimac {

/// The five generic actions. The set is closed.
enum class ActionKind : unsigned char { Create, Process, Release, Transfer, Receive };

/// All kinds in canonical order (create, process, release, transfer, receive).
inline constexpr std::array<ActionKind, 5> kAllKinds = {
    ActionKind::Create, ActionKind::Process, ActionKind::Release, ActionKind::Transfer,
    ActionKind::Receive};

/// Whether two stages sit in the same machine or on either side of a boundary.
enum class Scope : unsigned char { SameMachine, CrossMachine };

std::string_view kind_name(ActionKind kind);
std::optional<ActionKind> parse_kind(std::string_view word);

/// First-letter abbreviation; Release and Receive both map to 'R'.
char kind_letter(ActionKind kind);

/// Fixed adjacency table of which action may follow which.
///
/// Within one machine: create -> {process, release}, receive -> {process,
/// release}, process -> {create, release}, release -> transfer,
/// transfer -> receive. Across a boundary only transfer -> transfer.
constexpr bool legal_successor(ActionKind from, ActionKind to, Scope scope) {
  using K = ActionKind;
  if (scope == Scope::CrossMachine) return from == K::Transfer && to == K::Transfer;
  switch (from) {
    case K::Create:   return to == K::Process || to == K::Release;
    case K::Receive:  return to == K::Process || to == K::Release;
    case K::Process:  return to == K::Create || to == K::Release;
    case K::Release:  return to == K::Transfer;
    case K::Transfer: return to == K::Receive;
  }
  return false;
}

/// Scope used when the pair appears inside an abbreviated action chain:
/// transfer -> transfer is the boundary crossing, everything else is local.
constexpr Scope chain_scope(ActionKind from, ActionKind to) {
  return from == ActionKind::Transfer && to == ActionKind::Transfer ? Scope::CrossMachine
                                                                    : Scope::SameMachine;
}

}  // namespace thimac
