#include "support.hpp"

#include <gtest/gtest.h>

using namespace qform;
using qform::testing::element;
using qform::testing::Rng;

namespace {

const AbGroup kZ = AbGroup::free(1);

EQForm h2_geometric() { return hyperbolic(1).with_v(parity_map(AbGroup(), {})); }

}  // namespace

TEST(FormValidate, HyperbolicOverTrivialTarget) {
  FormReport r = form_validate(h2_geometric());
  EXPECT_TRUE(r.free);
  EXPECT_TRUE(r.nonsingular);
  EXPECT_TRUE(r.even);
  EXPECT_TRUE(r.full);
  EXPECT_EQ(r.geometric, std::optional<bool>(true));
  EXPECT_EQ(r.rank, 2u);
}

TEST(FormValidate, EabOverZ) {
  EQForm e = e_ab(2, 3).with_v(parity_map(kZ, {0}));
  FormReport r = form_validate(e);
  EXPECT_TRUE(r.nonsingular);
  EXPECT_TRUE(r.even);
  EXPECT_TRUE(r.full);
  EXPECT_EQ(r.geometric, std::optional<bool>(true));
}

TEST(FormValidate, SingularRankOne) {
  EQForm e(AbGroup::free(1), IntMatrix{{2}}, GroupHom::zero(AbGroup::free(1), AbGroup()));
  EXPECT_FALSE(form_validate(e).nonsingular);
  EXPECT_FALSE(form_validate(e).geometric.has_value());
  EXPECT_THROW(is_geometric(e), MissingV);
}

TEST(EQForm, RejectsTorsionPairing) {
  AbGroup g(1, {3});
  EXPECT_THROW(EQForm(g, IntMatrix{{0, 1}, {1, 0}}, GroupHom::zero(g, AbGroup())), ValidationError);
  EXPECT_THROW(EQForm(AbGroup::free(2), IntMatrix{{0, 1}, {2, 0}}, GroupHom::zero(AbGroup::free(2), AbGroup())),
               ValidationError);
}

TEST(Constructors, DualNegate) {
  EQForm h = hyperbolic(2);
  EXPECT_EQ(dual(h), h);
  EXPECT_EQ(dual(e_ab(2, 5)), e_ab(-2, -5));
  EQForm e = e_ab(2, 5);
  EXPECT_EQ(negate(dual(e)), dual(negate(e)));
}

TEST(Constructors, NegatedHyperbolicIsHyperbolic) {
  EQForm h = hyperbolic(1);
  EXPECT_NO_THROW(FormIso(negate(h), h, IntMatrix{{1, 0}, {0, -1}}));
}

TEST(Constructors, HyperbolicSmallCases) {
  EXPECT_EQ(hyperbolic(0).dim(), 0u);
  EXPECT_EQ(hyperbolic(1, kZ), e_ab(0, 0));
  // H_2 + H_4 -> H_6 by moving each a before the b's.
  EQForm s = direct_sum(hyperbolic(1), hyperbolic(2));
  IntMatrix p = IntMatrix(6, 6);
  // source coordinates a1 b1 | a2 a3 b2 b3 ; target a1 a2 a3 b1 b2 b3
  std::vector<std::size_t> to = {0, 3, 1, 2, 4, 5};
  for (std::size_t j = 0; j < 6; ++j) p(to[j], j) = 1;
  EXPECT_NO_THROW(FormIso(s, hyperbolic(3), p));
}

TEST(Constructors, PullbackAlongInclusion) {
  EQForm e = e_ab(2, 3);
  GroupHom inc(AbGroup::free(1), AbGroup::free(2), IntMatrix{{3}, {-2}});
  EQForm p = pullback(inc, e);
  EXPECT_EQ(p.lambda(), (IntMatrix{{-12}}));
  EXPECT_EQ(p.mu().matrix(), (IntMatrix{{0}}));
}

TEST(Constructors, TorsionDirectSumRenormalises) {
  AbGroup g2(1, {2}), g3(1, {3});
  EQForm a(g2, IntMatrix{{1, 0}, {0, 0}}, GroupHom::zero(g2, AbGroup()));
  EQForm b(g3, IntMatrix{{-1, 0}, {0, 0}}, GroupHom::zero(g3, AbGroup()));
  FormSum s = sum_forms(a, b);
  EXPECT_EQ(s.form.group(), AbGroup(2, {6}));
  Vector x = s.form.group().reduce(s.parts.embed1 * element({1, 0}));
  Vector y = s.form.group().reduce(s.parts.embed2 * element({1, 0}));
  EXPECT_EQ(s.form.pair(x, x), 1);
  EXPECT_EQ(s.form.pair(y, y), -1);
  EXPECT_EQ(s.form.pair(x, y), 0);
  EXPECT_EQ(s.form.lambda_free().determinant(), -1);
}

TEST(OrthogonalComplement, Examples) {
  EQForm h2 = hyperbolic(1);
  EXPECT_EQ(orthogonal_complement(h2, SubgroupRep::zero(h2.group())), SubgroupRep::whole(h2.group()));
  SubgroupRep e1(h2.group(), {element({1, 0})});
  EXPECT_EQ(orthogonal_complement(h2, e1), e1);

  EQForm h4 = direct_sum(hyperbolic(1), hyperbolic(1));
  SubgroupRep x(h4.group(), {element({1, 0, 1, 0})});
  SubgroupRep p = orthogonal_complement(h4, x);
  EXPECT_EQ(p.rank(), 3u);
  EXPECT_TRUE(p.contains(element({1, 0, 0, 0})));
  EXPECT_TRUE(p.contains(element({0, 0, 1, 0})));
  EXPECT_TRUE(p.contains(element({0, 1, 0, -1})));
}

TEST(OrthogonalComplement, RandomizedRankFormula) {
  Rng rng(3);
  std::vector<AbGroup> torsions = {AbGroup(), AbGroup(0, {2}), AbGroup(0, {3, 6})};
  for (int t = 0; t < 120; ++t) {
    std::size_t k = static_cast<std::size_t>(rng.uniform(1, 3));
    auto inst = qform::testing::random_metabolic(rng, k, AbGroup(), parity_map(AbGroup(), {}));
    EQForm e = inst.form;
    const AbGroup& tor = torsions[rng.index(torsions.size())];
    if (!tor.is_trivial()) e = direct_sum(e, EQForm(tor, IntMatrix(tor.dim(), tor.dim()), GroupHom::zero(tor, AbGroup())));
    std::vector<Vector> gens;
    for (int i = 0; i < rng.uniform(0, 3); ++i) gens.push_back(qform::testing::random_element(rng, e.group(), 3));
    SubgroupRep x(e.group(), gens);
    SubgroupRep p = orthogonal_complement(e, x);
    ASSERT_TRUE(p.contains_torsion());
    ASSERT_TRUE(summand_test(p));
    ASSERT_EQ(x.rank() + p.rank(), e.rank());
  }
}

TEST(SubgroupClassify, Examples) {
  EQForm h2 = hyperbolic(1);
  SubgroupFlags f = subgroup_classify(h2, SubgroupRep(h2.group(), {element({1, 0})}));
  EXPECT_TRUE(f.free_lagrangian);
  EXPECT_TRUE(f.t_lagrangian);  // no torsion to contain

  SubgroupFlags g = subgroup_classify(h2, SubgroupRep(h2.group(), {element({1, 1})}));
  EXPECT_TRUE(g.half_rank_summand);
  EXPECT_FALSE(g.isotropic);
  EXPECT_FALSE(g.free_lagrangian);

  AbGroup m(2, {3});
  EQForm t(m, IntMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}, GroupHom::zero(m, AbGroup()));
  SubgroupFlags h = subgroup_classify(t, SubgroupRep(m, {element({1, 0, 0}), element({0, 0, 1})}));
  EXPECT_TRUE(h.t_lagrangian);
  EXPECT_FALSE(h.free_lagrangian);
  EXPECT_TRUE(subgroup_classify(t, SubgroupRep(m, {element({1, 0, 0})})).free_lagrangian);
}

TEST(HyperbolicWitness, Examples) {
  EQForm h4 = hyperbolic(2);
  HyperbolicCheck c = is_hyperbolic_with_witness(h4, SubgroupRep(h4.group(), {element({1, 0, 0, 0}), element({0, 1, 0, 0})}));
  ASSERT_TRUE(c);
  EXPECT_EQ(c.iso->target(), hyperbolic(2));

  EQForm odd(AbGroup::free(2), IntMatrix{{0, 1}, {1, 1}}, GroupHom::zero(AbGroup::free(2), AbGroup()));
  HyperbolicCheck r = is_hyperbolic_with_witness(odd, SubgroupRep(odd.group(), {element({1, 0})}));
  EXPECT_FALSE(r);
  EXPECT_EQ(r.reason, "form is not even");

  EQForm e00 = e_ab(0, 0);
  EXPECT_TRUE(is_hyperbolic_with_witness(e00, SubgroupRep(e00.group(), {element({1, 0})})));
  EQForm e01 = e_ab(0, 1);
  HyperbolicCheck m = is_hyperbolic_with_witness(e01, SubgroupRep(e01.group(), {element({1, 0})}));
  EXPECT_FALSE(m);
  EXPECT_EQ(m.reason, "mu is not zero");
}

TEST(Properties, GeometricOnGeneratorsSuffices) {
  Rng rng(17);
  std::vector<std::string> names = {"0", "Z", "Z2", "Z+Z/2"};
  for (int t = 0; t < 80; ++t) {
    AbGroup q = qform::testing::target_by_name(names[rng.index(names.size())]);
    std::size_t k = std::max<std::size_t>(q.dim(), static_cast<std::size_t>(rng.uniform(1, 3)));
    auto v = qform::testing::random_v(rng, q);
    auto inst = qform::testing::random_metabolic(rng, k, q, *v);
    ASSERT_TRUE(is_geometric(inst.form));
    for (int s = 0; s < 20; ++s) {
      Vector x = qform::testing::random_element(rng, inst.form.group(), 6);
      int lhs = inst.form.pair(x, x) % 2 == 0 ? 0 : 1;
      ASSERT_EQ(lhs, inst.form.v_of(inst.form.mu_of(x)));
    }
  }
}

TEST(Properties, ConstructorsPreserveFlags) {
  Rng rng(23);
  for (int t = 0; t < 60; ++t) {
    AbGroup q = AbGroup::free(1);
    auto v = parity_map(q, {static_cast<int>(rng.uniform(0, 1))});
    auto a = qform::testing::random_metabolic(rng, 1 + rng.index(2), q, v).form;
    auto b = qform::testing::random_metabolic(rng, 1 + rng.index(2), q, v).form;
    for (const EQForm& e : {direct_sum(a, b), negate(a), dual(a)}) {
      FormReport r = form_validate(e);
      ASSERT_TRUE(r.nonsingular);
      ASSERT_EQ(r.geometric, std::optional<bool>(true));
    }
    EQForm nonfull = hyperbolic(1, q).with_v(v);
    ASSERT_TRUE(is_full(direct_sum(a, nonfull)));
    ASSERT_EQ(is_even(direct_sum(a, b)), is_even(a) && is_even(b));
  }
}

TEST(Properties, FormIsoInverseValidates) {
  Rng rng(29);
  for (int t = 0; t < 60; ++t) {
    AbGroup q = AbGroup::free(1);
    auto v = parity_map(q, {0});
    auto inst = qform::testing::random_metabolic(rng, 2, q, v, false);
    IntMatrix p = qform::testing::random_unimodular(rng, 4);
    EQForm twisted = pullback(GroupHom(inst.form.group(), inst.form.group(), p), inst.form);
    FormIso iso(twisted, inst.form, p);
    FormIso back = iso.inverse();
    ASSERT_EQ(compose(back, iso).matrix(), IntMatrix::identity(4));
    ASSERT_FALSE(FormIso::check(inst.form, twisted, back.matrix()).has_value());
  }
}
