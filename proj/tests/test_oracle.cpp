#include "support.hpp"

#include <gtest/gtest.h>

using namespace qform;
using qform::testing::element;

namespace {

SearchBudget bound(long b, std::size_t stab = 1, std::size_t limit = 5'000'000) { return {b, stab, limit}; }

}  // namespace

TEST(Oracle, LagrangiansOfH2) {
  for (long b = 1; b <= 4; ++b) {
    auto ls = enumerate_lagrangians(hyperbolic(1), bound(b));
    ASSERT_EQ(ls.size(), 2u) << "bound " << b;
    EXPECT_EQ(ls[0], SubgroupRep(AbGroup::free(2), {element({0, 1})}));
    EXPECT_EQ(ls[1], SubgroupRep(AbGroup::free(2), {element({1, 0})}));
  }
}

TEST(Oracle, OddPlaneLagrangians) {
  AbGroup z2 = AbGroup::free(2);
  EQForm odd(z2, IntMatrix{{0, 1}, {1, 1}}, GroupHom::zero(z2, AbGroup()));
  // Isotropic lines are b = 0 and b = -2a.
  EXPECT_EQ(enumerate_lagrangians(odd, bound(1)).size(), 1u);
  auto ls = enumerate_lagrangians(odd, bound(3));
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], SubgroupRep(z2, {element({1, -2})}));
  EXPECT_EQ(ls[1], SubgroupRep(z2, {element({1, 0})}));
}

TEST(Oracle, LagrangiansOfH4Regression) {
  auto ls = enumerate_lagrangians(hyperbolic(2), bound(1));
  for (const auto& l : ls) EXPECT_TRUE(is_free_lagrangian(hyperbolic(2), l));
  EXPECT_EQ(ls.size(), 8u);
}

TEST(Oracle, LagrangiansRespectMu) {
  // Over Z with mu = (1, 0) only <e2> survives.
  auto ls = enumerate_lagrangians(e_ab(1, 0), bound(2));
  ASSERT_EQ(ls.size(), 1u);
  EXPECT_EQ(ls[0], SubgroupRep(AbGroup::free(2), {element({0, 1})}));
}

TEST(Oracle, NodeLimitIsExplicit) {
  EXPECT_THROW(enumerate_lagrangians(hyperbolic(2), bound(2, 1, 5)), BudgetExhausted);
  EQForm h = hyperbolic(1, AbGroup::free(1));
  EXPECT_THROW(search_isomorphism(direct_sum(e_ab(6, 1), h), direct_sum(e_ab(2, 3), h), bound(9, 1, 100)),
               BudgetExhausted);
}

TEST(Oracle, AutH2HasFourElements) {
  for (long b = 1; b <= 3; ++b) EXPECT_EQ(enumerate_isomorphisms(hyperbolic(1), hyperbolic(1), bound(b)).size(), 4u);
}

TEST(Oracle, SearchIsomorphismExamples) {
  auto s = search_isomorphism(e_ab(2, 3), e_ab(3, 2), bound(2));
  ASSERT_EQ(s.status, SearchStatus::Found);
  EXPECT_EQ(s.iso->matrix(), (IntMatrix{{0, 1}, {1, 0}}));
  auto none = search_isomorphism(e_ab(1, 6), e_ab(2, 3), bound(2));
  EXPECT_EQ(none.status, SearchStatus::ExhaustivelyNone);
  auto self = search_isomorphism(e_ab(2, 3), e_ab(2, 3), bound(2));
  ASSERT_EQ(self.status, SearchStatus::Found);
  EXPECT_EQ(self.iso->matrix(), IntMatrix::identity(2));
}

TEST(Oracle, Si2AgreesWithSearch) {
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      for (int c = -4; c <= 4; ++c)
        for (int d = -4; d <= 4; ++d) {
          bool found = search_isomorphism(e_ab(a, b), e_ab(c, d), bound(1)).status == SearchStatus::Found;
          EXPECT_EQ(found, si2_isomorphic(a, b, c, d).has_value()) << a << b << c << d;
        }
}

TEST(Oracle, StableIsoTrivial) {
  QuasiFormation q{hyperbolic(1, AbGroup::free(1)), SubgroupRep(AbGroup::free(2), {element({0, 1})}),
       SubgroupRep(AbGroup::free(2), {element({1, 0})})};
  QuasiFormation q2 = qf_direct_sum(q, standard_hyperbolic(1, AbGroup::free(1)));
  auto r = search_stable_isomorphism(q2, q, bound(1));
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(r.witness->k, 0u);
  EXPECT_EQ(r.witness->l, 1u);
  auto r2 = search_stable_isomorphism(q, q2, bound(1));
  ASSERT_TRUE(r2.witness);
  EXPECT_EQ(r2.witness->k, 1u);
  EXPECT_EQ(r2.witness->l, 0u);
  EXPECT_EQ(r2.witness->iso.matrix(), IntMatrix::identity(4));
}

TEST(Oracle, StableIsoOfE16AndE23) {
  EXPECT_EQ(search_stable_isomorphism(e_ab(1, 6), e_ab(2, 3), bound(8)).status, SearchStatus::NoneWithinBound);
  auto r = search_stable_isomorphism(e_ab(1, 6), e_ab(2, 3), bound(9, 1, 50'000'000));
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(r.witness->k, 1u);
  EXPECT_EQ(r.witness->l, 1u);
  EXPECT_TRUE(si1_decide(1, 6, 2, 3));
}

TEST(Oracle, BruteSiExamples) {
  EXPECT_EQ(brute_si(1, 6).size, 2u);
  EXPECT_EQ(brute_si(1, 6).reps, (std::vector<IntPair>{{1, 6}, {2, 3}}));
  EXPECT_EQ(brute_si(2, 2).size, 1u);
  EXPECT_EQ(brute_si(1, 30).size, 4u);
  EXPECT_EQ(brute_si(0, 7).size, 1u);
  EXPECT_EQ(brute_si(0, 0).size, 1u);
}

TEST(Oracle, BruteSiAgreesWithEnumerate) {
  for (int a = -60; a <= 60; ++a)
    for (int b = -60; b <= 60; ++b) {
      if (std::abs(a * b) > 60) continue;
      SIReport x = brute_si(a, b), y = si_enumerate(a, b);
      EXPECT_EQ(x.size, y.size) << a << "," << b;
      EXPECT_EQ(x.reps, y.reps) << a << "," << b;
    }
}
