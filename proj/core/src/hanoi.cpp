#include <algorithm>
#include <string>

#include "oomi/domains.hpp"

namespace oomi {

namespace {

std::size_t pow3(int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= 3;
  return r;
}

void check_discs(int discs) {
  if (discs < 1 || discs > kHanoiMaxDiscs) {
    throw DomainError("hanoi: disc count must be in [1, " + std::to_string(kHanoiMaxDiscs) + "]");
  }
}

}  // namespace

std::size_t HanoiState::index() const {
  std::size_t idx = 0;
  for (std::size_t d = pegs.size(); d-- > 0;) idx = idx * 3 + pegs[d];
  return idx;
}

HanoiState HanoiState::from_index(std::size_t index, int discs) {
  HanoiState s;
  s.pegs.resize(static_cast<std::size_t>(discs));
  for (auto& p : s.pegs) {
    p = static_cast<std::uint8_t>(index % 3);
    index /= 3;
  }
  return s;
}

int HanoiState::top(int peg) const {
  for (std::size_t d = 0; d < pegs.size(); ++d) {
    if (pegs[d] == peg) return static_cast<int>(d);
  }
  return -1;
}

bool hanoi_legal(const HanoiState& s, int move) {
  const auto [src, dst] = kHanoiMoves[static_cast<std::size_t>(move)];
  const int moving = s.top(src);
  if (moving < 0) return false;
  const int blocking = s.top(dst);
  return blocking < 0 || blocking > moving;
}

HanoiState hanoi_apply(const HanoiState& s, int move) {
  const auto [src, dst] = kHanoiMoves[static_cast<std::size_t>(move)];
  HanoiState out = s;
  out.pegs[static_cast<std::size_t>(s.top(src))] = static_cast<std::uint8_t>(dst);
  return out;
}

std::size_t hanoi_goal(int discs) { return pow3(discs) - 1; }

Mdp hanoi_mdp(int discs, bool stochastic, double slip) {
  check_discs(discs);
  if (!(slip >= 0.0 && slip < 1.0)) throw DomainError("hanoi: slip must be in [0, 1)");

  Mdp mdp;
  mdp.n = pow3(discs);
  mdp.gamma = 1.0;
  mdp.exit.assign(mdp.n, 0);
  const std::size_t goal = hanoi_goal(discs);
  mdp.exit[goal] = 1;

  std::vector<ModelBuilder> builders;
  builders.reserve(kHanoiMoves.size());
  mdp.actions.resize(kHanoiMoves.size());
  for (std::size_t a = 0; a < kHanoiMoves.size(); ++a) {
    builders.emplace_back(mdp.n);
    mdp.actions[a].id = std::to_string(kHanoiMoves[a].first) + "->" +
                        std::to_string(kHanoiMoves[a].second);
    mdp.actions[a].available.assign(mdp.n, 0);
  }

  std::vector<std::size_t> targets(kHanoiMoves.size());
  std::vector<int> legal;
  std::vector<std::pair<State, double>> entries;
  std::vector<State> cols;
  std::vector<double> vals;
  for (std::size_t s = 0; s < mdp.n; ++s) {
    if (s == goal) {
      for (std::size_t a = 0; a < kHanoiMoves.size(); ++a) {
        builders[a].add_empty_row(0.0);
        mdp.actions[a].available[s] = 1;
      }
      continue;
    }
    const HanoiState hs = HanoiState::from_index(s, discs);
    legal.clear();
    for (int a = 0; a < static_cast<int>(kHanoiMoves.size()); ++a) {
      if (hanoi_legal(hs, a)) {
        legal.push_back(a);
        targets[static_cast<std::size_t>(a)] = hanoi_apply(hs, a).index();
      }
    }
    for (std::size_t a = 0; a < kHanoiMoves.size(); ++a) {
      const bool ok = std::find(legal.begin(), legal.end(), static_cast<int>(a)) != legal.end();
      if (!ok) {
        builders[a].add_empty_row(0.0);
        continue;
      }
      mdp.actions[a].available[s] = 1;
      entries.clear();
      const std::size_t others = legal.size() - 1;
      if (!stochastic || others == 0 || slip == 0.0) {
        entries.emplace_back(static_cast<State>(targets[a]), 1.0);
      } else {
        entries.emplace_back(static_cast<State>(targets[a]), 1.0 - slip);
        const double share = slip / static_cast<double>(others);
        for (int b : legal) {
          if (b == static_cast<int>(a)) continue;
          entries.emplace_back(static_cast<State>(targets[static_cast<std::size_t>(b)]), share);
        }
      }
      std::sort(entries.begin(), entries.end());
      cols.clear();
      vals.clear();
      for (const auto& [c, p] : entries) {
        cols.push_back(c);
        vals.push_back(p * mdp.gamma);
      }
      builders[a].add_row(-1.0, cols, vals);
    }
  }
  for (std::size_t a = 0; a < kHanoiMoves.size(); ++a) {
    mdp.actions[a].model = std::move(builders[a]).finish();
  }
  return mdp;
}

std::vector<SubgoalSpec> hanoi_subgoals(int discs, double scale) {
  check_discs(discs);
  if (!(scale > 0.0)) throw DomainError("hanoi_subgoals: scale must be positive");
  const std::size_t n = pow3(discs);
  // Matches true_value_model(hanoi_mdp(discs, ...)): gamma = 1, |R| = 1,
  // horizon 10 n, margin 1.
  const double floor = -10.0 * static_cast<double>(n) - 1.0;

  std::vector<SubgoalSpec> out;
  out.push_back({"G-", ModelMatrix::constant_value(n, floor), std::nullopt, true});
  for (int d = 0; d < discs; ++d) {
    for (int e = 0; e < 3; ++e) {
      std::vector<double> g(n, 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        std::size_t x = s;
        for (int k = 0; k < d; ++k) x /= 3;
        if (static_cast<int>(x % 3) == e) g[s] = scale;
      }
      out.push_back({"on(d" + std::to_string(d) + ",p" + std::to_string(e) + ")",
                     ModelMatrix::value_model(std::move(g)), std::nullopt, false});
    }
  }
  return out;
}

}  // namespace oomi
