#include <algorithm>
#include <array>
#include <sstream>
#include <string>

#include "oomi/domains.hpp"

namespace oomi {

namespace {

int ipow3(int k) {
  int r = 1;
  for (int i = 0; i < k; ++i) r *= 3;
  return r;
}

void check_level(int level) {
  if (level < 1 || level > kNineRoomsMaxLevel) {
    throw DomainError("nine_rooms: level must be in [1, " + std::to_string(kNineRoomsMaxLevel) +
                      "]");
  }
}

// Spacing of level-k instances along an axis: the instance plus one wall.
int pitch(int k) { return 4 * ipow3(k - 1); }

// Offset and width of the level-l doorway within a level-(l-1) span.
int door_offset(int l) { return (ipow3(l - 1) - 1) / 2; }
int door_width(int l) { return ipow3(l - 2); }

struct Move {
  const char* id;
  int dx;
  int dy;
};

constexpr std::array<Move, 4> kMoves{{{"N", 0, -1}, {"E", 1, 0}, {"S", 0, 1}, {"W", -1, 0}}};

}  // namespace

std::string to_string(Corner c) {
  switch (c) {
    case Corner::NorthWest: return "nw";
    case Corner::NorthEast: return "ne";
    case Corner::SouthWest: return "sw";
    case Corner::SouthEast: return "se";
  }
  return "nw";
}

Corner corner_from_string(const std::string& name) {
  if (name == "nw") return Corner::NorthWest;
  if (name == "ne") return Corner::NorthEast;
  if (name == "sw") return Corner::SouthWest;
  if (name == "se") return Corner::SouthEast;
  throw DomainError("unknown corner '" + name + "' (expected nw, ne, sw, se)");
}

int nine_rooms_side(int level) { return pitch(level) - 1; }

int nine_rooms_wall_level(int c) {
  if ((c + 1) % 4 != 0) return 0;
  int l = 2;
  while ((c + 1) % pitch(l) == 0) ++l;
  return l;
}

NineRoomsLayout::NineRoomsLayout(int level) : level_(level), side_(0) {
  check_level(level);
  side_ = nine_rooms_side(level);
  index_.assign(static_cast<std::size_t>(side_) * static_cast<std::size_t>(side_), -1);
  for (int y = 0; y < side_; ++y) {
    for (int x = 0; x < side_; ++x) {
      const int lx = nine_rooms_wall_level(x);
      const int ly = nine_rooms_wall_level(y);
      bool cell = lx == 0 && ly == 0;
      if (lx > ly) {
        const int off = y % pitch(lx - 1) - door_offset(lx);
        cell = off >= 0 && off < door_width(lx);
      } else if (ly > lx) {
        const int off = x % pitch(ly - 1) - door_offset(ly);
        cell = off >= 0 && off < door_width(ly);
      }
      if (cell) {
        index_[static_cast<std::size_t>(y) * static_cast<std::size_t>(side_) +
               static_cast<std::size_t>(x)] = static_cast<std::int32_t>(cells_.size());
        cells_.push_back({x, y});
      }
    }
  }
}

bool NineRoomsLayout::is_cell(GridState c) const {
  if (c.x < 0 || c.y < 0 || c.x >= side_ || c.y >= side_) return false;
  return index_[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(side_) +
                static_cast<std::size_t>(c.x)] >= 0;
}

bool NineRoomsLayout::is_doorway(GridState c) const {
  return is_cell(c) && (nine_rooms_wall_level(c.x) != 0 || nine_rooms_wall_level(c.y) != 0);
}

std::size_t NineRoomsLayout::index(GridState c) const {
  if (!is_cell(c)) {
    throw DomainError("nine_rooms: (" + std::to_string(c.x) + ", " + std::to_string(c.y) +
                      ") is not a cell");
  }
  return static_cast<std::size_t>(index_[static_cast<std::size_t>(c.y) *
                                             static_cast<std::size_t>(side_) +
                                         static_cast<std::size_t>(c.x)]);
}

DoorwaySpec nine_rooms_doorway(int level, int doorway_level, int index) {
  check_level(level);
  if (doorway_level < 2 || doorway_level > level) {
    throw DomainError("nine_rooms_doorway: doorway level must be in [2, level]");
  }
  if (index < 1 || index > 12) throw DomainError("nine_rooms_doorway: index must be in [1, 12]");

  const NineRoomsLayout layout(level);
  DoorwaySpec d;
  d.level = doorway_level;
  d.index = index;
  const int inst = pitch(doorway_level);
  const int block = pitch(doorway_level - 1);
  const int span = block - 1;
  const int width = door_width(doorway_level);
  const int off = door_offset(doorway_level);
  const int count = ipow3(level - doorway_level);

  // Block coordinates of the north/west instance.
  const bool vertical_wall = index <= 6;
  const int bx = vertical_wall ? (index - 1) % 2 : (index - 7) / 2;
  const int by = vertical_wall ? (index - 1) / 2 : (index - 7) % 2;
  const int px = vertical_wall ? bx + 1 : bx;
  const int py = vertical_wall ? by : by + 1;
  for (int iy = 0; iy < count; ++iy) {
    for (int ix = 0; ix < count; ++ix) {
      const int ox = ix * inst;
      const int oy = iy * inst;
      std::vector<GridState> door;
      for (int i = 0; i < width; ++i) {
        if (vertical_wall) {
          door.push_back({ox + (bx + 1) * block - 1, oy + by * block + off + i});
        } else {
          door.push_back({ox + bx * block + off + i, oy + (by + 1) * block - 1});
        }
      }
      for (const auto& [rx, ry] : {std::pair{bx, by}, std::pair{px, py}}) {
        for (int y = 0; y < span; ++y) {
          for (int x = 0; x < span; ++x) {
            const GridState c{ox + rx * block + x, oy + ry * block + y};
            if (layout.is_cell(c)) d.neighbourhood.push_back(c);
          }
        }
      }
      d.neighbourhood.insert(d.neighbourhood.end(), door.begin(), door.end());
      d.cells.insert(d.cells.end(), door.begin(), door.end());
    }
  }
  return d;
}

GridState nine_rooms_goal(int level, Corner goal) {
  const int m = nine_rooms_side(level) - 1;
  switch (goal) {
    case Corner::NorthWest: return {0, 0};
    case Corner::NorthEast: return {m, 0};
    case Corner::SouthWest: return {0, m};
    case Corner::SouthEast: return {m, m};
  }
  return {0, 0};
}

GridState nine_rooms_start(int level, Corner goal) {
  const int m = nine_rooms_side(level) - 1;
  const GridState g = nine_rooms_goal(level, goal);
  return {m - g.x, m - g.y};
}

Mdp nine_rooms_mdp(int level, bool stochastic, double slip, Corner goal) {
  check_level(level);
  if (!(slip >= 0.0 && slip < 1.0)) throw DomainError("nine_rooms: slip must be in [0, 1)");
  const NineRoomsLayout layout(level);

  Mdp mdp;
  mdp.n = layout.size();
  mdp.gamma = kNineRoomsGamma;
  mdp.exit.assign(mdp.n, 0);
  const std::size_t goal_index = layout.index(nine_rooms_goal(level, goal));
  mdp.exit[goal_index] = 1;

  const double move_p = stochastic ? 1.0 - slip : 1.0;
  const double stay_p = stochastic ? slip : 0.0;
  std::vector<State> cols;
  std::vector<double> vals;
  for (const Move& mv : kMoves) {
    Action a;
    a.id = mv.id;
    a.available.assign(mdp.n, 0);
    ModelBuilder b(mdp.n);
    for (std::size_t s = 0; s < mdp.n; ++s) {
      if (s == goal_index) {
        a.available[s] = 1;
        b.add_empty_row(1.0);
        continue;
      }
      const GridState c = layout.cell(s);
      const GridState t{c.x + mv.dx, c.y + mv.dy};
      if (!layout.is_cell(t)) {
        b.add_empty_row(0.0);
        continue;
      }
      a.available[s] = 1;
      const auto target = static_cast<State>(layout.index(t));
      std::vector<std::pair<State, double>> entries{{target, mdp.gamma * move_p}};
      if (stay_p > 0.0) entries.emplace_back(static_cast<State>(s), mdp.gamma * stay_p);
      std::sort(entries.begin(), entries.end());
      cols.clear();
      vals.clear();
      for (const auto& [col, p] : entries) {
        cols.push_back(col);
        vals.push_back(p);
      }
      b.add_row(0.0, cols, vals);
    }
    a.model = std::move(b).finish();
    mdp.actions.push_back(std::move(a));
  }
  return mdp;
}

std::vector<SubgoalSpec> nine_rooms_subgoals(int level, double scale) {
  check_level(level);
  if (level < 2) throw DomainError("nine_rooms_subgoals: level must be at least 2");
  if (!(scale > 0.0)) throw DomainError("nine_rooms_subgoals: scale must be positive");
  const NineRoomsLayout layout(level);
  const std::size_t n = layout.size();
  std::vector<SubgoalSpec> out;
  for (int l = 2; l <= level; ++l) {
    for (int j = 1; j <= 12; ++j) {
      const DoorwaySpec d = nine_rooms_doorway(level, l, j);
      std::vector<double> g(n, 0.0);
      for (const GridState& c : d.cells) g[layout.index(c)] = scale;
      std::vector<State> init;
      init.reserve(d.neighbourhood.size());
      for (const GridState& c : d.neighbourhood) {
        init.push_back(static_cast<State>(layout.index(c)));
      }
      std::sort(init.begin(), init.end());
      out.push_back({"door(l" + std::to_string(l) + ",j" + std::to_string(j) + ")",
                     ModelMatrix::value_model(std::move(g)), std::move(init), false});
    }
  }
  return out;
}

std::string render_nine_rooms(int level, Corner goal) {
  const NineRoomsLayout layout(level);
  const int side = layout.side();
  const GridState g = nine_rooms_goal(level, goal);
  const GridState st = nine_rooms_start(level, goal);
  std::string out;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const GridState c{x, y};
      char ch = '#';
      if (c == g) {
        ch = 'G';
      } else if (c == st) {
        ch = 'S';
      } else if (layout.is_doorway(c)) {
        ch = 'd';
      } else if (layout.is_cell(c)) {
        ch = '.';
      }
      out += ch;
    }
    out += '\n';
  }
  return out;
}

}  // namespace oomi
