#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bpdp {

// Enumerators are listed in ascending rank, which the DP relies on.
enum class FrameState : std::uint8_t { s0, s1, s1p, s1pp, s2, s2p, s2pp, s3, s4 };

inline constexpr int frame_state_count = 9;

inline constexpr std::array<FrameState, frame_state_count> all_frame_states = {
    FrameState::s0, FrameState::s1, FrameState::s1p,  FrameState::s1pp, FrameState::s2,
    FrameState::s2p, FrameState::s2pp, FrameState::s3, FrameState::s4};

inline constexpr std::array<FrameState, 8> frobose_frame_states = {
    FrameState::s0, FrameState::s1, FrameState::s1p, FrameState::s1pp,
    FrameState::s2, FrameState::s2p, FrameState::s3, FrameState::s4};

constexpr int index(FrameState s) { return static_cast<int>(s); }

constexpr int rank(FrameState s) {
  switch (s) {
    case FrameState::s0: return 0;
    case FrameState::s1:
    case FrameState::s1p:
    case FrameState::s1pp: return 1;
    case FrameState::s2:
    case FrameState::s2p:
    case FrameState::s2pp: return 2;
    case FrameState::s3: return 3;
    case FrameState::s4: return 4;
  }
  return -1;
}

constexpr std::string_view name(FrameState s) {
  constexpr std::array<std::string_view, frame_state_count> names = {"0",  "1",   "1'", "1''", "2",
                                                                      "2'", "2''", "3",  "4"};
  return names[index(s)];
}

inline FrameState parse_frame_state(std::string_view text) {
  for (FrameState s : all_frame_states)
    if (name(s) == text) return s;
  throw std::invalid_argument("unknown frame state: " + std::string(text));
}

}  // namespace bpdp
