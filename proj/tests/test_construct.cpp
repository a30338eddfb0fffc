#include "support.hpp"

#include <gtest/gtest.h>

using namespace qform;
using qform::testing::element;
using qform::testing::Rng;

namespace {

const AbGroup kZ = AbGroup::free(1);

EQForm rank2(long a, long b, long c, const AbGroup& q = AbGroup()) {
  return EQForm(AbGroup::free(2), IntMatrix{{a, b}, {b, c}}, GroupHom::zero(AbGroup::free(2), q));
}

SubgroupRep span(const EQForm& e, std::vector<Vector> gens) { return SubgroupRep(e.group(), gens); }

void expect_block_shape(const EQForm& e, const SubgroupRep& l, const MetabolicBasis& mb) {
  ASSERT_TRUE(is_unimodular(mb.basis));
  ASSERT_EQ(mb.basis.transpose() * e.lambda() * mb.basis, mb.block_lambda());
  for (const auto& d : mb.d) ASSERT_TRUE(d == 0 || d == 1);
  std::vector<Vector> first;
  for (std::size_t i = 0; i < mb.k(); ++i) first.push_back(mb.e(i));
  ASSERT_EQ(SubgroupRep(e.group(), first), l);
}

}  // namespace

TEST(MetabolicBasis, Examples) {
  EQForm h2 = hyperbolic(1);
  MetabolicBasis a = metabolic_basis(h2, span(h2, {element({1, 0})}));
  EXPECT_EQ(a.d, std::vector<Int>{0});
  EXPECT_EQ(a.basis, IntMatrix::identity(2));

  EQForm five = rank2(0, 1, 5);
  MetabolicBasis b = metabolic_basis(five, span(five, {element({1, 0})}));
  EXPECT_EQ(b.d, std::vector<Int>{1});
  EXPECT_EQ(b.f(0), element({-2, 1}));

  EQForm four = rank2(0, 1, 4);
  EXPECT_EQ(metabolic_basis(four, span(four, {element({1, 0})})).d, std::vector<Int>{0});

  EXPECT_THROW(metabolic_basis(h2, span(h2, {element({1, 1})})), HypothesisError);
}

TEST(MetabolicBasis, RandomizedBlockShape) {
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    std::size_t k = static_cast<std::size_t>(rng.uniform(1, 4));
    auto inst = qform::testing::random_metabolic(rng, k, AbGroup(), parity_map(AbGroup(), {}));
    // Random odd/even diagonal: rebuild without the geometric constraint.
    MetabolicBasis mb = metabolic_basis(inst.form, inst.lagrangian);
    expect_block_shape(inst.form, inst.lagrangian, mb);
  }
}

TEST(NegIsomorphism, Examples) {
  EQForm h2 = hyperbolic(1);
  FormIso j = neg_isomorphism(h2, span(h2, {element({1, 0})}));
  EXPECT_EQ(j.matrix(), (IntMatrix{{1, 0}, {0, -1}}));

  EQForm odd = rank2(0, 1, 1);
  FormIso jo = neg_isomorphism(odd, span(odd, {element({1, 0})}));
  EXPECT_EQ(jo.apply(element({0, 1})), element({1, -1}));

  EQForm mixed = direct_sum(hyperbolic(1), odd);
  SubgroupRep l = span(mixed, {element({1, 0, 0, 0}), element({0, 0, 1, 0})});
  FormIso jm = neg_isomorphism(mixed, l);
  EXPECT_EQ(jm.apply(l), l);
  EXPECT_EQ(jm.target(), negate(mixed));
}

TEST(DoubleToHyperbolic, Examples) {
  for (const EQForm& e : {hyperbolic(1), rank2(0, 1, 1)}) {
    SubgroupRep l = span(e, {element({1, 0})});
    FormIso i = double_to_hyperbolic(e, l);
    EXPECT_EQ(i.source().rank(), 2 * e.rank());
    EXPECT_EQ(i.target().rank(), 2 * e.rank());
    EXPECT_EQ(i.apply(subgroup_sum(e, l, e, l)), stabilized_lagrangian(e, l, 1));
  }
}

TEST(DiagonalLagrangians, Examples) {
  EQForm h2 = hyperbolic(1);
  DiagonalLagrangians d = diagonal_lagrangians(FormIso::identity(h2));
  EXPECT_EQ(d.delta, SubgroupRep(d.ambient.group(), {element({1, 0, 1, 0}), element({0, 1, 0, 1})}));
  EXPECT_TRUE(is_free_lagrangian(d.ambient, d.delta));

  EQForm e = e_ab(2, 3);
  DiagonalLagrangians de = diagonal_lagrangians(FormIso::identity(e));
  EXPECT_TRUE(is_free_lagrangian(de.ambient, de.delta));
  EXPECT_TRUE(is_free_lagrangian(de.ambient_star, de.delta_star));
  EXPECT_FALSE(is_free_lagrangian(de.ambient, de.delta_star.ambient() == de.ambient.group() ? de.delta_star : de.delta_star));
}

TEST(StableLagrangianIso, StrictExamples) {
  GroupHom v = parity_map(kZ, {0});
  EQForm e = EQForm(AbGroup::free(2), IntMatrix{{0, 1}, {1, 0}}, GroupHom(AbGroup::free(2), kZ, IntMatrix{{0, 1}}), v);
  SubgroupRep l = span(e, {element({1, 0})});
  StableLagrangianIso s = stable_lagrangian_iso(e, l, e, l, MatchMode::Strict);
  EXPECT_EQ(s.k, 0u);
  EXPECT_EQ(s.l, 0u);
  EXPECT_EQ(s.iso.apply(l), l);

  EQForm e2 = EQForm(AbGroup::free(2), IntMatrix{{0, 1}, {1, 0}}, GroupHom(AbGroup::free(2), kZ, IntMatrix{{0, -1}}), v);
  StableLagrangianIso t = stable_lagrangian_iso(e, l, e2, l, MatchMode::Strict);
  EXPECT_EQ(t.iso.apply(l), l);
  EXPECT_EQ(t.iso.target(), e2);
}

TEST(StableLagrangianIso, StableAgainstLargerForm) {
  GroupHom v = parity_map(kZ, {0});
  EQForm e = EQForm(AbGroup::free(2), IntMatrix{{0, 1}, {1, 0}}, GroupHom(AbGroup::free(2), kZ, IntMatrix{{0, 1}}), v);
  SubgroupRep l = span(e, {element({1, 0})});
  EQForm big = direct_sum(e, e);
  SubgroupRep lb = subgroup_sum(e, l, e, l);
  StableLagrangianIso s = stable_lagrangian_iso(e, l, big, lb, MatchMode::Stable);
  EXPECT_GT(s.k + s.l, 0u);
  EXPECT_EQ(e.rank() + 2 * s.k, big.rank() + 2 * s.l);
  EXPECT_EQ(s.iso.apply(stabilized_lagrangian(e, l, s.k)), stabilized_lagrangian(big, lb, s.l));
}

TEST(StableLagrangianIso, MissingVAndHypotheses) {
  EQForm e = e_ab(0, 1);
  SubgroupRep l = span(e, {element({1, 0})});
  EXPECT_THROW(stable_lagrangian_iso(e, l, e, l), MissingV);
  EQForm g = e.with_v(parity_map(kZ, {0}));
  EXPECT_THROW(stable_lagrangian_iso(g, span(g, {element({0, 1})}), g, l), HypothesisError);
}

TEST(StableLagrangianIso, StrictOnTwistedCopies) {
  Rng rng(57);
  for (int t = 0; t < 40; ++t) {
    AbGroup q = t % 2 ? AbGroup::free(1) : AbGroup();
    auto v = *qform::testing::random_v(rng, q);
    auto inst = qform::testing::random_metabolic(rng, 2, q, v, false);
    IntMatrix p = qform::testing::random_unimodular(rng, 4);
    EQForm tw = pullback(GroupHom(inst.form.group(), inst.form.group(), p), inst.form);
    SubgroupRep lt = image(GroupHom(inst.form.group(), inst.form.group(), unimodular_inverse(p)), inst.lagrangian);
    StableLagrangianIso s = stable_lagrangian_iso(inst.form, inst.lagrangian, tw, lt, MatchMode::Strict);
    ASSERT_EQ(s.iso.apply(inst.lagrangian), lt);
  }
}

TEST(RUWord, EvaluationBasics) {
  EQForm h2 = hyperbolic(1);
  SubgroupRep l = span(h2, {element({0, 1})});
  EXPECT_EQ(ru_word_eval(RUWord{h2, l, {}}), IntMatrix::identity(2));

  EQForm zero = hyperbolic(0);
  Flip flip{FormIso(h2, direct_sum(hyperbolic(1), zero), IntMatrix::identity(2)), zero, SubgroupRep::zero(zero.group())};
  EXPECT_EQ(ru_word_eval(RUWord{h2, l, {flip}}), (IntMatrix{{0, 1}, {1, 0}}));

  EQForm h4 = hyperbolic(2);
  SubgroupRep l4 = span(h4, {element({1, 0, 0, 0}), element({0, 1, 0, 0})});
  // a -> A a, b -> A^{-T} b preserves the lagrangian spanned by the a's.
  IntMatrix keep{{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, -1, 1}};
  RUWord w{h4, l4, {Keep{keep}, Keep{unimodular_inverse(keep)}}};
  EXPECT_EQ(ru_word_eval(w), IntMatrix::identity(4));

  RUWord bad{h4, l4, {Keep{keep}, Keep{IntMatrix{{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}}}};
  try {
    ru_word_eval(bad);
    FAIL() << "expected a generator error";
  } catch (const GeneratorError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(RUWall, HyperbolicPlaneAutomorphisms) {
  EQForm h2 = hyperbolic(1).with_v(parity_map(AbGroup(), {}));
  SubgroupRep l = span(h2, {element({0, 1})});
  for (const IntMatrix& phi : {IntMatrix::identity(2), IntMatrix{{-1, 0}, {0, -1}}, IntMatrix{{0, 1}, {1, 0}}}) {
    RUWallWitness w = ru_wall_witness(h2, l, FormIso(h2, h2, phi));
    IntMatrix expected = block_diagonal(block_diagonal(phi, unimodular_inverse(phi)), IntMatrix::identity(2));
    EXPECT_EQ(ru_word_eval(w.word), expected);
  }
}

TEST(RUWall, RandomRankFourAutomorphisms) {
  Rng rng(77);
  int done = 0;
  for (int t = 0; t < 30; ++t) {
    AbGroup q = t % 2 ? AbGroup::free(1) : AbGroup();
    auto v = *qform::testing::random_v(rng, q);
    auto inst = qform::testing::random_metabolic(rng, 2, q, v);
    IntMatrix phi = qform::testing::random_automorphism(rng, inst.form, inst.lagrangian);
    RUWallWitness w = ru_wall_witness(inst.form, inst.lagrangian, FormIso(inst.form, inst.form, phi));
    ASSERT_EQ(ru_word_eval(w.word), w.expected);
    ++done;
  }
  EXPECT_EQ(done, 30);
}
