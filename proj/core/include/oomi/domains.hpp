#pragma once

// Benchmark domains: the N-disc Tower of Hanoi and the level-N Nine Rooms
// gridworld, with their subgoal value models.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oomi/mdp.hpp"

namespace oomi {

// ---------------------------------------------------------------------------
// Tower of Hanoi
// ---------------------------------------------------------------------------

inline constexpr int kHanoiMaxDiscs = 12;
inline constexpr double kHanoiSlip = 0.4;
inline constexpr double kHanoiSubgoalScale = 1e4;

/// Peg of every disc, disc 0 being the smallest. Stacking order on a peg is
/// implied by disc size.
struct HanoiState {
  std::vector<std::uint8_t> pegs;

  std::size_t index() const;
  static HanoiState from_index(std::size_t index, int discs);
  /// Smallest disc on `peg`, or -1 when the peg is empty.
  int top(int peg) const;
};

/// The six ordered (source, destination) peg pairs, in action order.
inline constexpr std::array<std::pair<int, int>, 6> kHanoiMoves{
    {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}};

bool hanoi_legal(const HanoiState& s, int move);
HanoiState hanoi_apply(const HanoiState& s, int move);

/// All discs on peg 0.
inline std::size_t hanoi_start(int) { return 0; }
/// All discs on peg 2.
std::size_t hanoi_goal(int discs);

/// gamma = 1, reward -1 per move, goal is an exit. In the stochastic variant
/// the intended move happens with probability 1 - p, otherwise one of the
/// other legal moves is chosen uniformly.
Mdp hanoi_mdp(int discs, bool stochastic, double slip = kHanoiSlip);

/// G- followed by K * on(s, d, e) for every disc d and peg e.
std::vector<SubgoalSpec> hanoi_subgoals(int discs, double scale = kHanoiSubgoalScale);

// ---------------------------------------------------------------------------
// Nine Rooms
// ---------------------------------------------------------------------------

inline constexpr int kNineRoomsMaxLevel = 4;
inline constexpr double kNineRoomsSlip = 0.05;
inline constexpr double kNineRoomsSubgoalScale = 1e3;
inline constexpr double kNineRoomsGamma = 0.9;

enum class Corner { NorthWest, NorthEast, SouthWest, SouthEast };

std::string to_string(Corner c);
Corner corner_from_string(const std::string& name);

struct GridState {
  int x = 0;
  int y = 0;
  friend bool operator==(const GridState&, const GridState&) = default;
};

/// Wall cells between neighbouring level-(level-1) instances, one run of
/// 3^(level-2) cells in every level-`level` instance of the grid.
struct DoorwaySpec {
  int level = 2;
  int index = 1;  // 1..6 vertical walls, 7..12 horizontal walls
  std::vector<GridState> cells;
  /// The two sub-instances the doorway connects plus the doorway itself, in
  /// every instance.
  std::vector<GridState> neighbourhood;
};

/// Side of the bounding square: 3 at level 1, then 3 * side(level-1) + 2
/// since neighbouring instances are separated by a one-cell wall.
int nine_rooms_side(int level);

/// Level of the wall line at coordinate c, or 0 if c runs through rooms.
int nine_rooms_wall_level(int c);

/// Cell geometry of one level: which squares of the bounding box are states
/// (room cells and doorway cells) and their row-major state indices.
class NineRoomsLayout {
 public:
  explicit NineRoomsLayout(int level);

  int level() const { return level_; }
  int side() const { return side_; }
  std::size_t size() const { return cells_.size(); }

  /// False for wall squares and for squares outside the grid.
  bool is_cell(GridState c) const;
  bool is_doorway(GridState c) const;
  /// Throws DomainError for a square that is not a state.
  std::size_t index(GridState c) const;
  GridState cell(std::size_t index) const { return cells_.at(index); }

 private:
  int level_;
  int side_;
  std::vector<std::int32_t> index_;  // side * side, -1 for walls
  std::vector<GridState> cells_;
};

DoorwaySpec nine_rooms_doorway(int level, int doorway_level, int index);

GridState nine_rooms_goal(int level, Corner goal);
/// The corner opposite the goal.
GridState nine_rooms_start(int level, Corner goal);

/// Actions N, E, S, W, available when the target square is a state; gamma =
/// 0.9 folded in; reward 1 for acting in the goal cell, which is an exit. The
/// stochastic variant stays put with probability p.
Mdp nine_rooms_mdp(int level, bool stochastic, double slip = kNineRoomsSlip,
                   Corner goal = Corner::NorthWest);

/// 12 (level - 1) doorway subgoals; initiation sets cover the two instances
/// each doorway joins.
std::vector<SubgoalSpec> nine_rooms_subgoals(int level, double scale = kNineRoomsSubgoalScale);

/// ASCII drawing of walls, doorways, start and goal.
std::string render_nine_rooms(int level, Corner goal = Corner::NorthWest);

}  // namespace oomi
