#include <gtest/gtest.h>

#include <random>

#include "canrt/beliefs.hpp"
#include "canrt/errors.hpp"
#include "support/generators.hpp"

namespace canrt {
namespace {

TEST(Entails, ClosedWorld) {
  BeliefBase b{"flying"};
  EXPECT_TRUE(entails(b, parse_formula("flying")));
  EXPECT_FALSE(entails(b, parse_formula("parked")));
  EXPECT_TRUE(entails(b, parse_formula("~parked")));
  EXPECT_TRUE(entails(b, parse_formula("~sensor_malfunc & ~engine_malfunc")));
  EXPECT_FALSE(entails(b, parse_formula("sensor_malfunc | engine_malfunc")));
  EXPECT_TRUE(entails(b, parse_formula("true")));
  EXPECT_TRUE(entails(BeliefBase{}, BeliefFormula()));
}

TEST(Entails, Precedence) {
  BeliefBase b{"a"};
  // ~ binds tighter than &, which binds tighter than |.
  EXPECT_TRUE(entails(b, parse_formula("~a & b | a")));
  EXPECT_FALSE(entails(b, parse_formula("~(a & b | a)")));
  EXPECT_EQ(to_string(parse_formula("(a | b) & c")), "(a | b) & c");
  EXPECT_EQ(to_string(parse_formula("a | (b | c)")), "a | (b | c)");
}

TEST(Entails, TautologiesOverEverySubset) {
  std::mt19937_64 rng(1);
  std::vector<std::string> atoms;
  for (int i = 0; i < 10; ++i) atoms.push_back("p" + std::to_string(i));
  for (int f = 0; f < 40; ++f) {
    int width = 1 + f % 10;
    std::vector<std::string> used(atoms.begin(), atoms.begin() + width);
    BeliefFormula phi = testing::random_formula(rng, used, 3);
    BeliefFormula contradiction = BeliefFormula::conjunction(phi, BeliefFormula::negation(phi));
    BeliefFormula excluded_middle = BeliefFormula::disjunction(phi, BeliefFormula::negation(phi));
    for (unsigned mask = 0; mask < (1u << width); ++mask) {
      BeliefBase b;
      std::set<std::string> s;
      for (int i = 0; i < width; ++i) {
        if (mask & (1u << i)) s.insert(used[i]);
      }
      b = BeliefBase(s);
      ASSERT_FALSE(entails(b, contradiction)) << to_string(phi);
      ASSERT_TRUE(entails(b, excluded_middle)) << to_string(phi);
    }
  }
}

TEST(ApplyEffects, RemovesThenAdds) {
  BeliefBase b{"flying", "x"};
  EXPECT_EQ(apply_effects(b, {"parked"}, {"flying"}), (BeliefBase{"parked", "x"}));
  EXPECT_EQ(apply_effects(b, {}, {"absent"}), b);
}

TEST(ApplyEffects, Idempotent) {
  std::mt19937_64 rng(2);
  std::vector<std::string> atoms{"a", "b", "c", "d", "e"};
  for (int i = 0; i < 500; ++i) {
    std::set<std::string> start, adds, dels;
    for (const auto& a : atoms) {
      int r = std::uniform_int_distribution<int>(0, 5)(rng);
      if (r & 1) start.insert(a);
      if (r == 2) adds.insert(a);
      if (r == 4) dels.insert(a);
    }
    BeliefBase once = apply_effects(BeliefBase(start), adds, dels);
    ASSERT_EQ(apply_effects(once, adds, dels), once);
  }
}

TEST(ApplyEffects, ConflictRejected) {
  EXPECT_THROW(apply_effects(BeliefBase{}, {"a"}, {"a"}), EffectConflict);
}

TEST(BeliefBaseEquality, OrderFree) {
  EXPECT_EQ((BeliefBase{"b", "a", "c"}), (BeliefBase{"c", "b", "a"}));
  EXPECT_EQ(to_string(BeliefBase{"b", "a"}), "{a,b}");
}

TEST(FormulaParse, RoundTripsRandomFormulas) {
  std::mt19937_64 rng(8);
  std::vector<std::string> atoms{"a", "b", "c"};
  for (int i = 0; i < 1000; ++i) {
    BeliefFormula f = testing::random_formula(rng, atoms, 4);
    ASSERT_EQ(parse_formula(to_string(f)), f) << to_string(f);
  }
}

}  // namespace
}  // namespace canrt
