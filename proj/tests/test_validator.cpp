#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "thimac/error.hpp"
#include "thimac/validator.hpp"

using namespace thimac;
using testing_support::load;

namespace {

using K = ActionKind;

std::vector<std::string> codes(const std::vector<Diagnostic>& diags) {
  std::vector<std::string> out;
  for (const auto& d : diags) out.push_back(d.code);
  return out;
}

bool has(const std::vector<Diagnostic>& diags, const std::string& code, const std::string& subject = "") {
  return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) {
    return d.code == code && (subject.empty() || d.subject.find(subject) != std::string::npos);
  });
}

}  // namespace

TEST(Validate, CorpusHasNoErrors) {
  for (const char* file : {"library.tm", "toast.tm", "picnic.tm"}) {
    auto diags = validate(load(file).model);
    EXPECT_FALSE(has_errors(diags)) << file;
  }
  EXPECT_TRUE(validate(load("library.tm").model).empty());
}

TEST(Validate, IllegalSuccessionInjectedRaw) {
  StaticModel m;
  auto x = m.add_thimac("X");
  auto c = m.add_stage(x, K::Create);
  auto r = m.add_stage(x, K::Receive);
  ModelSurgery::raw_flow(m, c, r);
  auto diags = validate(m);
  EXPECT_TRUE(has(diags, "V2", "X.create->X.receive"));
  EXPECT_TRUE(has_errors(diags));
}

TEST(Validate, UnpairedCrossingInjectedRaw) {
  StaticModel m;
  auto a = m.add_thimac("A");
  auto b = m.add_thimac("B");
  auto ac = m.add_stage(a, K::Create);
  auto br = m.add_stage(b, K::Receive);
  ModelSurgery::raw_flow(m, ac, br);
  EXPECT_EQ(codes(validate(m)), (std::vector<std::string>{"V3"}));
}

TEST(Validate, DuplicateKindInjectedRaw) {
  StaticModel m;
  auto x = m.add_thimac("X");
  auto p = m.add_stage(x, K::Process);
  auto p2 = ModelSurgery::raw_stage(m, x, K::Process, "process2");
  m.add_trigger(p, p2);
  auto diags = validate(m);
  EXPECT_TRUE(has(diags, "V1", "X"));
}

TEST(Validate, NestingCycleInjectedRaw) {
  StaticModel m;
  auto a = m.add_thimac("A");
  auto b = m.add_thimac("B", a);
  ModelSurgery::set_parent(m, a, b);
  auto diags = validate(m);
  EXPECT_TRUE(has(diags, "V4", "A"));
  EXPECT_TRUE(has(diags, "V4", "B"));
}

TEST(Validate, DeadPotentiality) {
  StaticModel m;
  auto x = m.add_thimac("X");
  m.add_stage(x, K::Process);
  auto diags = validate(m);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "V5");
  EXPECT_EQ(diags[0].severity, Severity::Warning);
  EXPECT_EQ(diags[0].subject, "X.process");
  EXPECT_FALSE(has_errors(diags));
}

TEST(Validate, DanglingInterface) {
  StaticModel m;
  auto x = m.add_thimac("X");
  auto r = m.add_stage(x, K::Release);
  auto t = m.add_stage(x, K::Transfer);
  m.add_flow(r, t);
  auto diags = validate(m);
  EXPECT_TRUE(has(diags, "V6", "X.transfer"));
  EXPECT_FALSE(has(diags, "V5"));
}

TEST(Validate, IdempotentAndSorted) {
  auto doc = load("toast.tm");
  StaticModel m = doc.model;
  auto y = m.add_thimac("Spare");
  m.add_stage(y, K::Transfer);
  m.add_stage(y, K::Create);
  auto first = validate(m);
  auto second = validate(m);
  EXPECT_EQ(first, second);
  EXPECT_TRUE(std::is_sorted(first.begin(), first.end()));
  EXPECT_EQ(std::adjacent_find(first.begin(), first.end()), first.end());
}

TEST(Validate, RandomLegalModelsHaveNoSuccessionErrors) {
  std::mt19937 rng(20240917);
  std::size_t flows = 0;
  for (int i = 0; i < 1000; ++i) {
    StaticModel m = testing_support::random_legal_model(rng);
    flows += m.flows().size();
    auto diags = validate(m);
    ASSERT_FALSE(has(diags, "V2")) << i;
    ASSERT_FALSE(has(diags, "V3")) << i;
  }
  EXPECT_GT(flows, 1000u);
}

TEST(Lexicon, PaperVerbs) {
  auto lex = VerbLexicon::shipped();
  using R = Role;
  EXPECT_EQ(normalize_verb(lex, "take"),
            (Decomposition{{R::Source, K::Release}, {R::Source, K::Transfer}, {R::Sink, K::Transfer}, {R::Sink, K::Receive}}));
  EXPECT_EQ(normalize_verb(lex, "put"),
            (Decomposition{{R::Agent, K::Release}, {R::Agent, K::Transfer}, {R::Sink, K::Transfer}, {R::Sink, K::Receive}}));
  EXPECT_EQ(normalize_verb(lex, "spread"), (Decomposition{{R::Agent, K::Process}}));
  EXPECT_EQ(normalize_verb(lex, "fold"), (Decomposition{{R::Agent, K::Process}}));
  EXPECT_EQ(normalize_verb(lex, "Take"), normalize_verb(lex, "take"));
  try {
    normalize_verb(lex, "frobnicate");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownVerb);
  }
}

TEST(Lexicon, ShippedEntriesAreLegalAndMarked) {
  auto lex = VerbLexicon::shipped();
  EXPECT_EQ(lex.entries().size(), 10u);
  for (const auto& [verb, entry] : lex.entries()) {
    EXPECT_TRUE(is_legal_decomposition(entry.steps)) << verb;
    bool worked_example = verb == "take" || verb == "put" || verb == "spread" || verb == "fold";
    EXPECT_EQ(entry.corpus_verified, worked_example) << verb;
  }
}

TEST(Lexicon, RejectsIllegalChains) {
  VerbLexicon lex;
  EXPECT_THROW(lex.add("bad", {{Role::Agent, K::Create}, {Role::Agent, K::Receive}}), Error);
  EXPECT_THROW(lex.add("leap", {{Role::Agent, K::Release}, {Role::Sink, K::Receive}}), Error);
  EXPECT_THROW(lex.add("nothing", {}), Error);
  EXPECT_TRUE(lex.entries().empty());
}
