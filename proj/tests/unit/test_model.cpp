#include <gtest/gtest.h>

#include <random>

#include "oomi/model.hpp"
#include "test_support.hpp"

namespace oomi {
namespace {

using test::dense_gap;
using test::homogeneous;
using test::random_model;

ModelMatrix example_model() {
  return ModelMatrix::from_dense({1, 0}, {{0, 0.5}, {0, 0.5}});
}

TEST(Compose, IdentityIsNeutral) {
  std::mt19937_64 rng(1);
  const ModelMatrix m = random_model(5, rng);
  EXPECT_EQ(compose(ModelMatrix::identity(5), m), m);
  EXPECT_EQ(compose(m, ModelMatrix::identity(5)), m);
}

TEST(Compose, HandExample) {
  const ModelMatrix mm = compose(example_model(), example_model());
  EXPECT_EQ(mm.reward(0), 1.0);
  EXPECT_EQ(mm.reward(1), 0.0);
  EXPECT_EQ(mm.trans(0, 0), 0.0);
  EXPECT_EQ(mm.trans(0, 1), 0.25);
  EXPECT_EQ(mm.trans(1, 1), 0.25);
}

TEST(Compose, MatchesHomogeneousProduct) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const ModelMatrix a = random_model(7, rng);
    const ModelMatrix b = random_model(7, rng);
    const Eigen::MatrixXd expect = homogeneous(a) * homogeneous(b);
    EXPECT_LT((homogeneous(compose(a, b)) - expect).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Compose, DimensionMismatchThrows) {
  EXPECT_THROW(compose(ModelMatrix::identity(2), ModelMatrix::identity(3)), DimensionError);
}

TEST(Apply, IndicatorPicksRow) {
  std::mt19937_64 rng(3);
  const ModelMatrix m = random_model(4, rng);
  for (std::size_t s = 0; s < 4; ++s) {
    const Rasp x = apply(Rasp::deterministic(4, s), m);
    const Rasp row = m.row_rasp(s);
    EXPECT_EQ(x.reward, row.reward);
    EXPECT_EQ(x.dist, row.dist);
  }
}

TEST(Apply, IdentityAndHomogeneity) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const Rasp x = test::random_rasp(6, rng);
    const Rasp same = apply(x, ModelMatrix::identity(6));
    EXPECT_EQ(same.reward, x.reward);
    EXPECT_EQ(same.dist, x.dist);

    const ModelMatrix a = random_model(6, rng);
    const ModelMatrix b = random_model(6, rng);
    const Rasp lhs = apply(apply(x, a), b);
    const Rasp rhs = apply(x, compose(a, b));
    EXPECT_NEAR(lhs.reward, rhs.reward, 1e-12);
    for (std::size_t s = 0; s < 6; ++s) EXPECT_NEAR(lhs.dist[s], rhs.dist[s], 1e-12);
  }
}

TEST(Apply, DimensionMismatchThrows) {
  EXPECT_THROW(apply(Rasp::deterministic(3, 0), ModelMatrix::identity(2)), DimensionError);
}

TEST(Expectation, PointMassCopiesModel) {
  std::mt19937_64 rng(5);
  const ModelSet set({random_model(4, rng), random_model(4, rng)});
  const ModelMatrix e = expectation_model(PolicyWeights::deterministic({1, 1, 1, 1}), set);
  EXPECT_LT(dense_gap(e, set[1]), 1e-15);
}

TEST(Expectation, UniformAveragesRows) {
  std::mt19937_64 rng(6);
  const ModelSet set({random_model(5, rng), random_model(5, rng)});
  const ModelMatrix e = expectation_model(PolicyWeights::uniform(set), set);
  const Eigen::MatrixXd mean = 0.5 * (homogeneous(set[0]) + homogeneous(set[1]));
  EXPECT_LT((homogeneous(e) - mean).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Expectation, MissingModelThrows) {
  const ModelSet set({ModelMatrix::identity(2)});
  EXPECT_THROW(expectation_model(PolicyWeights::deterministic({0, 1}), set), DomainError);
}

TEST(Expectation, UnavailableRowThrows) {
  ModelSet set;
  set.add(ModelMatrix::identity(2), {1, 0});
  EXPECT_THROW(expectation_model(PolicyWeights::deterministic({0, 0}), set), DomainError);
}

TEST(Termination, Boundaries) {
  std::mt19937_64 rng(7);
  const ModelMatrix m = random_model(4, rng);
  EXPECT_EQ(termination_model(Termination::constant(4, 1.0), m), ModelMatrix::identity(4));
  EXPECT_EQ(termination_model(Termination::constant(4, 0.0), m), m);
}

TEST(Termination, PerRowBlend) {
  std::mt19937_64 rng(8);
  const ModelMatrix m = random_model(2, rng, 1.0);
  const ModelMatrix t = termination_model({{1.0, 0.0}}, m);
  EXPECT_EQ(t.reward(0), 0.0);
  EXPECT_EQ(t.trans(0, 0), 1.0);
  EXPECT_EQ(t.trans(0, 1), 0.0);
  EXPECT_EQ(t.reward(1), m.reward(1));
  EXPECT_EQ(t.trans(1, 0), m.trans(1, 0));
  EXPECT_EQ(t.trans(1, 1), m.trans(1, 1));

  const ModelMatrix half = termination_model(Termination::constant(2, 0.5), m);
  const Eigen::MatrixXd expect =
      0.5 * (homogeneous(ModelMatrix::identity(2)) + homogeneous(m));
  EXPECT_LT((homogeneous(half) - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Termination, OutOfRangeThrows) {
  EXPECT_THROW(termination_model({{1.5, 0.0}}, ModelMatrix::identity(2)), DomainError);
  EXPECT_THROW(termination_model({{-0.1, 0.0}}, ModelMatrix::identity(2)), DomainError);
  EXPECT_THROW(termination_model({{0.0}}, ModelMatrix::identity(2)), DimensionError);
}

TEST(MaxValue, Elementwise) {
  const ModelMatrix v1 = ModelMatrix::value_model({1, 5});
  const ModelMatrix v2 = ModelMatrix::value_model({3, 2});
  const std::vector<ModelMatrix> vs{v1, v2};
  const ModelMatrix m = max_value_model(vs);
  EXPECT_TRUE(m.is_value_model());
  EXPECT_EQ(m.reward(0), 3.0);
  EXPECT_EQ(m.reward(1), 5.0);

  const std::vector<ModelMatrix> one{v1};
  EXPECT_EQ(max_value_model(one), v1);
}

TEST(MaxValue, Monotone) {
  std::mt19937_64 rng(9);
  std::vector<ModelMatrix> vs;
  for (int i = 0; i < 4; ++i) vs.push_back(ModelMatrix::value_model(test::random_values(6, rng)));
  const ModelMatrix before = max_value_model(std::span(vs).first(3));
  const ModelMatrix after = max_value_model(vs);
  for (std::size_t s = 0; s < 6; ++s) EXPECT_GE(after.reward(s), before.reward(s));
}

TEST(MaxValue, Errors) {
  EXPECT_THROW(max_value_model(std::vector<ModelMatrix>{}), DomainError);
  const std::vector<ModelMatrix> with_trans{ModelMatrix::identity(2)};
  EXPECT_THROW(max_value_model(with_trans), DomainError);
}

TEST(Argmax, Singleton) {
  std::mt19937_64 rng(10);
  const ModelMatrix m = random_model(5, rng);
  const ArgmaxResult r = argmax_model(ModelSet({m}), ModelMatrix::value_model(test::random_values(5, rng)));
  EXPECT_EQ(r.model, m);
  EXPECT_EQ(r.selection, std::vector<std::size_t>(5, 0));
}

TEST(Argmax, ValueModelsPickLargerReward) {
  const ModelSet set({ModelMatrix::value_model({1, 5, 2}), ModelMatrix::value_model({3, 2, 2})});
  const ArgmaxResult r = argmax_model(set, ModelMatrix::value_model({100, 100, 100}));
  EXPECT_EQ(r.selection, (std::vector<std::size_t>{1, 0, 0}));
  EXPECT_EQ(r.model.reward(0), 3.0);
  EXPECT_EQ(r.model.reward(1), 5.0);
}

TEST(Argmax, TieKeepsLowestIndex) {
  const ModelSet set({ModelMatrix::value_model({1.0}), ModelMatrix::value_model({1.0 + 1e-13})});
  EXPECT_EQ(argmax_model(set, ModelMatrix::value_model({0.0})).selection[0], 0U);
  const ModelSet better({ModelMatrix::value_model({1.0}), ModelMatrix::value_model({1.0 + 1e-9})});
  EXPECT_EQ(argmax_model(better, ModelMatrix::value_model({0.0})).selection[0], 1U);
}

TEST(Argmax, OnlyRewardsCompared) {
  // Same composed reward, different distributions: the incumbent stays.
  const ModelMatrix a = ModelMatrix::from_dense({1, 0}, {{0.5, 0}, {0, 0}});
  const ModelMatrix b = ModelMatrix::from_dense({1, 0}, {{0, 0.5}, {0, 0}});
  const ArgmaxResult r = argmax_model(ModelSet({a, b}), ModelMatrix::value_model({2, 2}));
  EXPECT_EQ(r.selection[0], 0U);
}

TEST(Argmax, SkipsUnavailableRows) {
  ModelSet set;
  set.add(ModelMatrix::value_model({10, 10}), {0, 1});
  set.add(ModelMatrix::value_model({1, 1}));
  const ArgmaxResult r = argmax_model(set, ModelMatrix::value_model({0, 0}));
  EXPECT_EQ(r.selection, (std::vector<std::size_t>{1, 0}));
}

TEST(Argmax, GreedyPolicyOfTwoStateMdp) {
  // Two actions on two states, gamma 0.9. Enumerate the four policies and
  // check the argmax against the best.
  const double g = 0.9;
  const ModelMatrix stay = ModelMatrix::from_dense({0, 1}, {{g, 0}, {0, g}});
  const ModelMatrix swap = ModelMatrix::from_dense({0.5, 0}, {{0, g}, {g, 0}});
  const ModelSet set({stay, swap});

  std::vector<double> best(2, -1e300);
  std::vector<std::size_t> best_choice(2);
  for (std::size_t c0 = 0; c0 < 2; ++c0) {
    for (std::size_t c1 = 0; c1 < 2; ++c1) {
      SolveConfig direct;
      direct.method = SolveMethod::Direct;
      const ModelMatrix v = evaluate_policy_model(set, PolicyWeights::deterministic({c0, c1}), direct);
      if (v.reward(0) > best[0] + 1e-12) {
        best[0] = v.reward(0);
        best_choice[0] = c0;
      }
      if (v.reward(1) > best[1] + 1e-12) {
        best[1] = v.reward(1);
        best_choice[1] = c1;
      }
    }
  }
  const ArgmaxResult r = argmax_model(set, ModelMatrix::value_model(best));
  EXPECT_EQ(r.selection, best_choice);
}

TEST(Argmax, EmptySetThrows) {
  EXPECT_THROW(argmax_model(ModelSet{}, ModelMatrix::value_model({0})), DomainError);
}

TEST(ModelMatrix, ValidateSubstochastic) {
  EXPECT_NO_THROW(validate_substochastic(example_model()));
  EXPECT_THROW(validate_substochastic(ModelMatrix::from_dense({0}, {{1.1}})), DomainError);
  EXPECT_THROW(validate_substochastic(ModelMatrix::from_dense({0}, {{-0.1}})), DomainError);
  EXPECT_NO_THROW(validate_substochastic(ModelMatrix::from_dense({0}, {{1.0 + 1e-10}})));
}

TEST(ModelMatrix, BuilderRejectsUnsortedColumns) {
  ModelBuilder b(3);
  const std::vector<State> cols{2, 1};
  const std::vector<double> vals{0.5, 0.5};
  EXPECT_THROW(b.add_row(0.0, cols, vals), DomainError);
}

TEST(Properties, SubstochasticClosure) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const ModelSet set({random_model(8, rng), random_model(8, rng), random_model(8, rng)});
    EXPECT_NO_THROW(validate_substochastic(compose(set[0], set[1])));
    EXPECT_NO_THROW(validate_substochastic(expectation_model(PolicyWeights::uniform(set), set)));
  }
}

TEST(Properties, Associativity) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 16;
    const ModelMatrix a = random_model(n, rng);
    const ModelMatrix b = random_model(n, rng);
    const ModelMatrix c = random_model(n, rng);
    EXPECT_LT(dense_gap(compose(compose(a, b), c), compose(a, compose(b, c))), 1e-10);
  }
}

TEST(Properties, ArgmaxDominance) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 10;
    const ModelSet set({random_model(n, rng), random_model(n, rng), random_model(n, rng)});
    const std::vector<double> v = test::random_values(n, rng);
    const ArgmaxResult r = argmax_model(set, ModelMatrix::value_model(v));
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t k = 0; k < set.size(); ++k) {
        EXPECT_GE(composed_value(r.model, s, v), composed_value(set[k], s, v) - 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace oomi
