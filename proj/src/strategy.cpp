#include "social_gym/strategy.hpp"

#include <fmt/format.h>

#include "social_gym/error.hpp"

namespace social_gym {

std::string_view label(StrategyId id) noexcept {
  switch (id) {
    case StrategyId::TD: return "TD";
    case StrategyId::BU: return "BU";
    case StrategyId::LQ: return "LQ";
    case StrategyId::TQ: return "TQ";
    case StrategyId::DialTdLq: return "Dial-TD-LQ";
    case StrategyId::DialTdTq: return "Dial-TD-TQ";
    case StrategyId::DialBuLq: return "Dial-BU-LQ";
    case StrategyId::DialBuTq: return "Dial-BU-TQ";
    case StrategyId::DialLq: return "Dial-LQ";
    case StrategyId::DialTq: return "Dial-TQ";
  }
  return "";
}

std::optional<StrategyId> strategy_from_label(std::string_view text) noexcept {
  for (auto id : kAllStrategies) {
    if (label(id) == text) return id;
  }
  return std::nullopt;
}

StrategyId parse_strategy(std::string_view text) {
  if (auto id = strategy_from_label(text)) return *id;
  throw Error(ErrorCode::UnknownStrategy, fmt::format("unknown strategy '{}'", text));
}

std::string_view to_string(Framing framing) noexcept {
  switch (framing) {
    case Framing::TopDown: return "TOP_DOWN";
    case Framing::BottomUp: return "BOTTOM_UP";
    case Framing::None: return "NONE";
  }
  return "NONE";
}

std::string_view to_string(Initiative initiative) noexcept {
  switch (initiative) {
    case Initiative::Monologic: return "MONOLOGIC";
    case Initiative::LearnerQ: return "LEARNER_Q";
    case Initiative::TeacherQ: return "TEACHER_Q";
  }
  return "MONOLOGIC";
}

}  // namespace social_gym
