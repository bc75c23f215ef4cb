#include "oomi/mdp_json.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <ostream>
#include <json.hpp>

namespace oomi {

using nlohmann::json;

std::string mdp_to_json(const Mdp& mdp, int indent) {
  json doc;
  doc["n"] = mdp.n;
  doc["gamma"] = mdp.gamma;
  doc["exit_states"] = mdp.exit_states();
  json actions = json::array();
  for (const Action& a : mdp.actions) {
    json rows = json::array();
    json rewards = json::array();
    json available = json::array();
    for (std::size_t s = 0; s < mdp.n; ++s) {
      const RowView r = a.model.row(s);
      for (std::size_t i = 0; i < r.cols.size(); ++i) {
        rows.push_back(json::array({s, r.cols[i], r.vals[i]}));
      }
      if (r.reward != 0.0) rewards.push_back(json::array({s, r.reward}));
      if (a.available[s]) available.push_back(s);
    }
    actions.push_back(
        {{"id", a.id}, {"rows", rows}, {"rewards", rewards}, {"available", available}});
  }
  doc["actions"] = std::move(actions);
  return doc.dump(indent);
}

Mdp mdp_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("MDP JSON: ") + e.what());
  }
  try {
    Mdp mdp;
    mdp.n = doc.at("n").get<std::size_t>();
    mdp.gamma = doc.at("gamma").get<double>();
    mdp.exit.assign(mdp.n, 0);
    for (std::size_t s : doc.at("exit_states").get<std::vector<std::size_t>>()) {
      if (s >= mdp.n) throw DimensionError("MDP JSON: exit state out of range");
      mdp.exit[s] = 1;
    }
    for (const json& ja : doc.at("actions")) {
      Action a;
      a.id = ja.at("id").get<std::string>();
      std::vector<double> reward(mdp.n, 0.0);
      for (const json& jr : ja.at("rewards")) {
        const auto s = jr.at(0).get<std::size_t>();
        if (s >= mdp.n) throw DimensionError("MDP JSON: reward state out of range");
        reward[s] = jr.at(1).get<double>();
      }
      std::vector<std::vector<std::pair<State, double>>> rows(mdp.n);
      for (const json& jr : ja.at("rows")) {
        const auto s = jr.at(0).get<std::size_t>();
        const auto t = jr.at(1).get<std::size_t>();
        if (s >= mdp.n || t >= mdp.n) throw DimensionError("MDP JSON: row index out of range");
        rows[s].emplace_back(static_cast<State>(t), jr.at(2).get<double>());
      }
      ModelBuilder b(mdp.n);
      std::vector<State> cols;
      std::vector<double> vals;
      for (std::size_t s = 0; s < mdp.n; ++s) {
        std::sort(rows[s].begin(), rows[s].end());
        cols.clear();
        vals.clear();
        for (const auto& [t, p] : rows[s]) {
          if (!cols.empty() && cols.back() == t) {
            vals.back() += p;
          } else {
            cols.push_back(t);
            vals.push_back(p);
          }
        }
        b.add_row(reward[s], cols, vals);
      }
      a.model = std::move(b).finish();
      a.available.assign(mdp.n, 0);
      for (std::size_t s : ja.at("available").get<std::vector<std::size_t>>()) {
        if (s >= mdp.n) throw DimensionError("MDP JSON: available state out of range");
        a.available[s] = 1;
      }
      mdp.actions.push_back(std::move(a));
    }
    validate(mdp);
    return mdp;
  } catch (const json::exception& e) {
    throw DomainError(std::string("MDP JSON: ") + e.what());
  }
}

void save_mdp(const Mdp& mdp, std::ostream& out) { out << mdp_to_json(mdp) << '\n'; }

Mdp load_mdp(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return mdp_from_json(text);
}

}  // namespace oomi
