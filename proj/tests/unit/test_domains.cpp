#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include "oomi/domains.hpp"
#include "oomi/oracles.hpp"

namespace oomi {
namespace {

std::size_t pow3(int k) {
  std::size_t p = 1;
  while (k-- > 0) p *= 3;
  return p;
}

TEST(Hanoi, StateIndexRoundTrip) {
  for (std::size_t i = 0; i < pow3(5); ++i) EXPECT_EQ(HanoiState::from_index(i, 5).index(), i);
  EXPECT_EQ(hanoi_goal(3), (HanoiState{{2, 2, 2}}.index()));
}

TEST(Hanoi, CountsAndLegality) {
  for (int d = 1; d <= 6; ++d) {
    const Mdp mdp = hanoi_mdp(d, false);
    EXPECT_EQ(mdp.n, pow3(d));
    EXPECT_EQ(mdp.gamma, 1.0);
    EXPECT_EQ(mdp.actions.size(), 6U);
    EXPECT_EQ(mdp.exit_states(), std::vector<std::size_t>{hanoi_goal(d)});
    for (std::size_t s = 0; s < mdp.n; ++s) {
      if (mdp.is_exit(s)) continue;
      const std::size_t legal = mdp.available_actions(s).size();
      EXPECT_TRUE(legal == 2 || legal == 3) << d << " discs, state " << s;
    }
  }
}

TEST(Hanoi, TwoDiscStartMoves) {
  const Mdp mdp = hanoi_mdp(2, false);
  const auto legal = mdp.available_actions(hanoi_start(2));
  ASSERT_EQ(legal.size(), 2U);
  EXPECT_EQ(kHanoiMoves[legal[0]], (std::pair<int, int>{0, 1}));
  EXPECT_EQ(kHanoiMoves[legal[1]], (std::pair<int, int>{0, 2}));
}

TEST(Hanoi, ShortestPathIsTwoToTheN) {
  for (int d = 1; d <= 8; ++d) {
    const Mdp mdp = hanoi_mdp(d, false);
    std::vector<int> dist(mdp.n, -1);
    std::queue<std::size_t> q;
    dist[hanoi_start(d)] = 0;
    q.push(hanoi_start(d));
    while (!q.empty()) {
      const std::size_t s = q.front();
      q.pop();
      for (const Action& a : mdp.actions) {
        if (!a.available[s] || mdp.is_exit(s)) continue;
        for (State t : a.model.row(s).cols) {
          if (dist[t] < 0) {
            dist[t] = dist[s] + 1;
            q.push(t);
          }
        }
      }
    }
    EXPECT_EQ(dist[hanoi_goal(d)], (1 << d) - 1);
  }
}

TEST(Hanoi, OptimalStartValue) {
  const auto vi = value_iteration_oracle(hanoi_mdp(3, false));
  EXPECT_EQ(vi.value[hanoi_start(3)], -7.0);
}

TEST(Hanoi, StochasticRowsSumToGamma) {
  for (int d = 1; d <= 5; ++d) {
    const Mdp mdp = hanoi_mdp(d, true, 0.4);
    for (const Action& a : mdp.actions) {
      for (std::size_t s = 0; s < mdp.n; ++s) {
        if (!a.available[s] || mdp.is_exit(s)) continue;
        EXPECT_NEAR(a.model.row_sum(s), 1.0, 1e-12);
        EXPECT_EQ(a.model.reward(s), -1.0);
      }
    }
  }
}

TEST(Hanoi, SlipSplitsAcrossOtherLegalMoves) {
  // From the 2-disc start, (0,1) is intended and (0,2) is the only other move.
  const Mdp mdp = hanoi_mdp(2, true, 0.4);
  const HanoiState start = HanoiState::from_index(hanoi_start(2), 2);
  const RowView r = mdp.actions[0].model.row(hanoi_start(2));
  ASSERT_EQ(r.nonzeros(), 2U);
  EXPECT_NEAR(mdp.actions[0].model.trans(hanoi_start(2), hanoi_apply(start, 0).index()), 0.6, 1e-15);
  EXPECT_NEAR(mdp.actions[0].model.trans(hanoi_start(2), hanoi_apply(start, 1).index()), 0.4, 1e-15);
}

TEST(Hanoi, InvalidArguments) {
  EXPECT_THROW(hanoi_mdp(0, false), DomainError);
  EXPECT_THROW(hanoi_mdp(13, false), DomainError);
  EXPECT_THROW(hanoi_mdp(2, true, 1.0), DomainError);
  EXPECT_THROW(hanoi_mdp(2, true, -0.1), DomainError);
}

TEST(Hanoi, Subgoals) {
  EXPECT_EQ(hanoi_subgoals(1).size(), 4U);
  const auto subgoals = hanoi_subgoals(2);
  ASSERT_EQ(subgoals.size(), 7U);
  EXPECT_TRUE(subgoals[0].true_value);
  std::size_t found = 0;
  for (const SubgoalSpec& g : subgoals) {
    if (g.true_value) continue;
    EXPECT_FALSE(g.initiation.has_value());
    EXPECT_EQ(g.g.reward(hanoi_goal(2)) == 1e4, g.name.find("p2") != std::string::npos) << g.name;
  }
  // The subgoal for disc 0 on peg 1 scores K in exactly three states.
  for (const SubgoalSpec& g : subgoals) {
    if (g.true_value) continue;
    std::size_t hits = 0;
    bool disc0_peg1 = true;
    for (std::size_t s = 0; s < 9; ++s) {
      const bool on = HanoiState::from_index(s, 2).pegs[0] == 1;
      if (g.g.reward(s) == 1e4) ++hits;
      disc0_peg1 = disc0_peg1 && (on == (g.g.reward(s) == 1e4));
    }
    EXPECT_EQ(hits, 3U);
    if (disc0_peg1) ++found;
  }
  EXPECT_EQ(found, 1U);
}

TEST(NineRooms, Geometry) {
  EXPECT_EQ(nine_rooms_side(1), 3);
  EXPECT_EQ(nine_rooms_side(2), 11);
  EXPECT_EQ(nine_rooms_side(3), 35);
  EXPECT_EQ(nine_rooms_side(4), 107);
  const std::size_t expect[] = {9, 93, 873, 7965};
  for (int level = 1; level <= 4; ++level) {
    const NineRoomsLayout layout(level);
    EXPECT_EQ(layout.size(), expect[level - 1]);
    for (std::size_t i = 0; i < layout.size(); ++i) EXPECT_EQ(layout.index(layout.cell(i)), i);
  }
  EXPECT_EQ(nine_rooms_wall_level(3), 2);
  EXPECT_EQ(nine_rooms_wall_level(11), 3);
  EXPECT_EQ(nine_rooms_wall_level(4), 0);
  EXPECT_THROW(NineRoomsLayout(2).index({3, 0}), DomainError);
}

TEST(NineRooms, DoorwayWidths) {
  for (int level = 2; level <= 4; ++level) {
    for (int l = 2; l <= level; ++l) {
      for (int j = 1; j <= 12; ++j) {
        const DoorwaySpec d = nine_rooms_doorway(level, l, j);
        EXPECT_EQ(d.cells.size() % pow3(l - 2), 0U);
        const NineRoomsLayout layout(level);
        for (const GridState c : d.cells) EXPECT_TRUE(layout.is_doorway(c));
      }
    }
  }
  // One instance at the top level, so exactly 3^(l-2) cells.
  EXPECT_EQ(nine_rooms_doorway(2, 2, 1).cells.size(), 1U);
  EXPECT_EQ(nine_rooms_doorway(3, 3, 5).cells.size(), 3U);
  EXPECT_EQ(nine_rooms_doorway(4, 4, 12).cells.size(), 9U);
}

TEST(NineRooms, DoorwaysAreCentred) {
  // Level 2: the wall segment between two rooms is 3 cells long.
  const DoorwaySpec d = nine_rooms_doorway(2, 2, 1);
  EXPECT_EQ(d.cells[0], (GridState{3, 1}));
  const DoorwaySpec h = nine_rooms_doorway(3, 3, 7);
  ASSERT_EQ(h.cells.size(), 3U);
  EXPECT_EQ(h.cells[0], (GridState{4, 11}));
  EXPECT_EQ(h.cells[2], (GridState{6, 11}));
}

TEST(NineRooms, Subgoals) {
  EXPECT_EQ(nine_rooms_subgoals(2).size(), 12U);
  EXPECT_EQ(nine_rooms_subgoals(4).size(), 36U);
  for (int level = 2; level <= 4; ++level) {
    const NineRoomsLayout layout(level);
    const auto subgoals = nine_rooms_subgoals(level);
    for (std::size_t s = 0; s < layout.size(); ++s) {
      if (!layout.is_doorway(layout.cell(s))) {
        for (const SubgoalSpec& g : subgoals) EXPECT_EQ(g.g.reward(s), 0.0);
        continue;
      }
      std::size_t scoring = 0;
      for (const SubgoalSpec& g : subgoals) {
        if (g.g.reward(s) == 1e3) {
          ++scoring;
          const auto& init = *g.initiation;
          EXPECT_NE(std::find(init.begin(), init.end(), static_cast<State>(s)), init.end());
        }
      }
      EXPECT_EQ(scoring, 1U) << "level " << level << " cell " << s;
    }
  }
}

TEST(NineRooms, InitiationCoversTwoRoomsAndDoor) {
  const auto subgoals = nine_rooms_subgoals(2);
  // Two 3x3 rooms plus the door cell.
  for (const SubgoalSpec& g : subgoals) EXPECT_EQ(g.initiation->size(), 19U);
}

TEST(NineRooms, LevelOneValues) {
  const Mdp mdp = nine_rooms_mdp(1, false);
  EXPECT_EQ(mdp.n, 9U);
  const auto vi = value_iteration_oracle(mdp);
  const NineRoomsLayout layout(1);
  EXPECT_NEAR(vi.value[layout.index({2, 2})], std::pow(0.9, 4), 1e-12);
  EXPECT_NEAR(vi.value[layout.index({0, 0})], 1.0, 1e-12);
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      EXPECT_NEAR(vi.value[layout.index({x, y})], vi.value[layout.index({y, x})], 1e-12);
    }
  }
}

TEST(NineRooms, StochasticStaysPut) {
  const Mdp mdp = nine_rooms_mdp(2, true, 0.05);
  for (const Action& a : mdp.actions) {
    for (std::size_t s = 0; s < mdp.n; ++s) {
      if (!a.available[s] || mdp.is_exit(s)) continue;
      EXPECT_NEAR(a.model.row_sum(s), 0.9, 1e-12);
      EXPECT_NEAR(a.model.trans(s, s), 0.9 * 0.05, 1e-15);
    }
  }
}

TEST(NineRooms, Connected) {
  for (int level = 1; level <= 4; ++level) {
    const Mdp mdp = nine_rooms_mdp(level, false);
    std::vector<std::size_t> parent(mdp.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Action& a : mdp.actions) {
      for (std::size_t s = 0; s < mdp.n; ++s) {
        for (State t : a.model.row(s).cols) parent[find(s)] = find(t);
      }
    }
    std::set<std::size_t> roots;
    for (std::size_t s = 0; s < mdp.n; ++s) roots.insert(find(s));
    EXPECT_EQ(roots.size(), 1U) << "level " << level;
  }
}

TEST(NineRooms, GoalCorners) {
  EXPECT_EQ(nine_rooms_goal(2, Corner::NorthWest), (GridState{0, 0}));
  EXPECT_EQ(nine_rooms_goal(2, Corner::SouthEast), (GridState{10, 10}));
  EXPECT_EQ(nine_rooms_start(2, Corner::NorthWest), (GridState{10, 10}));
  const Mdp mdp = nine_rooms_mdp(2, false, 0.05, Corner::NorthEast);
  EXPECT_TRUE(mdp.is_exit(NineRoomsLayout(2).index(nine_rooms_goal(2, Corner::NorthEast))));
  EXPECT_EQ(corner_from_string(to_string(Corner::SouthWest)), Corner::SouthWest);
  EXPECT_THROW(corner_from_string("up"), DomainError);
}

TEST(NineRooms, Render) {
  const std::string text = render_nine_rooms(2);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 11);
  EXPECT_EQ(std::count(text.begin(), text.end(), 'G'), 1);
  EXPECT_EQ(std::count(text.begin(), text.end(), 'S'), 1);
  EXPECT_EQ(std::count(text.begin(), text.end(), 'd'), 12);
}

}  // namespace
}  // namespace oomi
