#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace social_gym {

enum class Framing { TopDown, BottomUp, None };
enum class Initiative { Monologic, LearnerQ, TeacherQ };

// The ten teaching conditions. LQ/TQ and Dial-LQ/Dial-TQ share framing and
// initiative and differ only in the teacher's prompt template.
enum class StrategyId {
  TD,
  BU,
  LQ,
  TQ,
  DialTdLq,
  DialTdTq,
  DialBuLq,
  DialBuTq,
  DialLq,
  DialTq,
};

inline constexpr std::array<StrategyId, 10> kAllStrategies = {
    StrategyId::TD,       StrategyId::BU,       StrategyId::LQ,       StrategyId::TQ,     StrategyId::DialTdLq,
    StrategyId::DialTdTq, StrategyId::DialBuLq, StrategyId::DialBuTq, StrategyId::DialLq, StrategyId::DialTq,
};

// Baseline condition: learner plays with the full ontology in its prompt.
inline constexpr std::string_view kExpertLabel = "EXPERT";

constexpr Framing framing(StrategyId id) noexcept {
  switch (id) {
    case StrategyId::TD:
    case StrategyId::DialTdLq:
    case StrategyId::DialTdTq: return Framing::TopDown;
    case StrategyId::BU:
    case StrategyId::DialBuLq:
    case StrategyId::DialBuTq: return Framing::BottomUp;
    default: return Framing::None;
  }
}

constexpr Initiative initiative(StrategyId id) noexcept {
  switch (id) {
    case StrategyId::TD:
    case StrategyId::BU: return Initiative::Monologic;
    case StrategyId::LQ:
    case StrategyId::DialTdLq:
    case StrategyId::DialBuLq:
    case StrategyId::DialLq: return Initiative::LearnerQ;
    default: return Initiative::TeacherQ;
  }
}

constexpr bool is_dialogic(StrategyId id) noexcept { return initiative(id) != Initiative::Monologic; }

std::string_view label(StrategyId id) noexcept;
std::optional<StrategyId> strategy_from_label(std::string_view text) noexcept;
// Throws Error(UnknownStrategy).
StrategyId parse_strategy(std::string_view text);

std::string_view to_string(Framing framing) noexcept;
std::string_view to_string(Initiative initiative) noexcept;

}  // namespace social_gym
