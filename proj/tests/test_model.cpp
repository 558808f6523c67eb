#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "thimac/error.hpp"
#include "thimac/model.hpp"

using namespace thimac;
using testing_support::load;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::InvalidName;
}

}  // namespace

TEST(Model, EmptyModel) {
  StaticModel m;
  EXPECT_TRUE(m.empty());
  EXPECT_EQ(m.thimacs().size(), 0u);
  EXPECT_EQ(m.flows().size(), 0u);
  EXPECT_TRUE(m.roots().empty());
}

TEST(Model, TwoRoots) {
  StaticModel m;
  m.add_thimac("Librarian");
  m.add_thimac("Library system");
  ASSERT_EQ(m.roots().size(), 2u);
  EXPECT_EQ(m.roots()[0].str(), "Librarian");
  EXPECT_EQ(m.roots()[1].str(), "Library system");
}

TEST(Model, NestedThimac) {
  StaticModel m;
  auto b = m.add_thimac("B");
  auto hands = m.add_thimac("Hands", b);
  EXPECT_EQ(hands.str(), "B.Hands");
  EXPECT_EQ(m.roots().size(), 1u);
  ASSERT_TRUE(m.thimac(hands).parent);
  EXPECT_EQ(*m.thimac(hands).parent, b);
  EXPECT_EQ(m.thimac(b).child_ids, std::vector<ThimacId>{hands});
  EXPECT_TRUE(m.is_ancestor(b, hands));
  EXPECT_FALSE(m.is_ancestor(hands, b));
}

TEST(Model, DuplicateSibling) {
  StaticModel m;
  auto p = m.add_thimac("P");
  m.add_thimac("X", p);
  EXPECT_EQ(code_of([&] { m.add_thimac("X", p); }), Errc::DuplicateSiblingName);
  EXPECT_EQ(code_of([&] { m.add_thimac("P"); }), Errc::DuplicateSiblingName);
  m.add_thimac("X");  // same name at another level is fine
}

TEST(Model, UnknownParentAndBadNames) {
  StaticModel m;
  EXPECT_EQ(code_of([&] { m.add_thimac("X", ThimacId("nope")); }), Errc::UnknownParent);
  EXPECT_EQ(code_of([&] { m.add_thimac(""); }), Errc::InvalidName);
  EXPECT_EQ(code_of([&] { m.add_thimac("a.b"); }), Errc::InvalidName);
}

TEST(Model, Stages) {
  StaticModel m;
  auto x = m.add_thimac("X");
  auto c = m.add_stage(x, ActionKind::Create);
  EXPECT_EQ(c.str(), "X.create");
  EXPECT_EQ(m.stage(c).kind, ActionKind::Create);
  EXPECT_EQ(m.stage(c).owner, x);
  m.add_stage(x, ActionKind::Process);
  EXPECT_EQ(code_of([&] { m.add_stage(x, ActionKind::Process); }), Errc::DuplicateKindInMachine);
  EXPECT_EQ(code_of([&] { m.add_stage(ThimacId("Y"), ActionKind::Create); }), Errc::UnknownThimac);
}

TEST(Model, AllFiveKinds) {
  StaticModel m;
  auto x = m.add_thimac("X");
  for (ActionKind k : kAllKinds) m.add_stage(x, k);
  EXPECT_EQ(m.stages().size(), 5u);
  EXPECT_EQ(m.thimac(x).stage_ids.size(), 5u);
}

TEST(Model, Aliases) {
  StaticModel m;
  auto x = m.add_thimac("X");
  m.add_stage(x, ActionKind::Process, "butter");
  EXPECT_EQ(code_of([&] { m.add_stage(x, ActionKind::Create, "butter"); }), Errc::DuplicateAlias);
  ASSERT_NE(m.resolve_stage(x, "butter"), nullptr);
  EXPECT_EQ(m.resolve_stage(x, "butter")->kind, ActionKind::Process);
  EXPECT_EQ(m.resolve_stage(x, "process"), m.resolve_stage(x, "butter"));
  EXPECT_EQ(m.resolve_stage(x, "create"), nullptr);
}

struct TwoMachines : ::testing::Test {
  StaticModel m;
  ThimacId lib, sys;
  void SetUp() override {
    lib = m.add_thimac("Librarian");
    sys = m.add_thimac("System");
    for (ActionKind k : kAllKinds) {
      m.add_stage(lib, k);
      m.add_stage(sys, k);
    }
  }
  StageId s(const ThimacId& t, const char* kind) { return StageId(t.str() + "." + kind); }
};

TEST_F(TwoMachines, LegalFlows) {
  auto f1 = m.add_flow(s(lib, "release"), s(lib, "transfer"), "request", 1);
  EXPECT_EQ(f1.str(), "f1");
  EXPECT_EQ(m.flow(f1).carries, "request");
  EXPECT_EQ(m.flow(f1).anchor, 1);
  auto f2 = m.add_flow(s(lib, "transfer"), s(sys, "transfer"));
  EXPECT_EQ(f2.str(), "f2");
  EXPECT_EQ(m.placement(s(lib, "transfer"), s(sys, "transfer")), Placement::Separate);
}

TEST_F(TwoMachines, IllegalFlows) {
  EXPECT_EQ(code_of([&] { m.add_flow(s(lib, "create"), s(sys, "receive")); }),
            Errc::UnpairedBoundaryCrossing);
  EXPECT_EQ(code_of([&] { m.add_flow(s(lib, "create"), s(lib, "receive")); }),
            Errc::IllegalSuccession);
  EXPECT_EQ(code_of([&] { m.add_flow(s(lib, "transfer"), s(lib, "transfer")); }),
            Errc::IllegalSuccession);
  EXPECT_EQ(code_of([&] { m.add_flow(StageId("Nope.create"), s(lib, "release")); }),
            Errc::UnknownStage);
  EXPECT_TRUE(m.flows().empty());
}

TEST_F(TwoMachines, Triggers) {
  auto g = m.add_trigger(s(sys, "process"), s(lib, "process"));
  EXPECT_EQ(g.str(), "g1");
  // no legality check on triggers
  m.add_trigger(s(sys, "receive"), s(lib, "create"));
  EXPECT_EQ(code_of([&] { m.add_trigger(s(sys, "process"), s(sys, "process")); }),
            Errc::SelfTrigger);
  EXPECT_EQ(code_of([&] { m.add_trigger(s(sys, "process"), StageId("X.create")); }),
            Errc::UnknownStage);
  EXPECT_EQ(m.outgoing_triggers(s(sys, "process")).size(), 1u);
  EXPECT_EQ(m.incoming_triggers(s(lib, "create")).size(), 1u);
}

TEST(Model, NestedFlowsExemptFromBoundaryRule) {
  StaticModel m;
  auto sel = m.add_thimac("Selection");
  auto neu = m.add_thimac("New", sel);
  auto p = m.add_stage(sel, ActionKind::Process);
  auto rc = m.add_stage(sel, ActionKind::Receive);
  auto c = m.add_stage(neu, ActionKind::Create);
  auto rl = m.add_stage(neu, ActionKind::Release);
  EXPECT_EQ(m.placement(p, c), Placement::Nested);
  m.add_flow(p, c);   // process -> create into a submachine
  m.add_flow(rc, rl); // receive -> release into a submachine
  m.add_flow(c, rl);
  EXPECT_EQ(m.flows().size(), 3u);
  EXPECT_EQ(code_of([&] { m.add_flow(rc, c); }), Errc::IllegalSuccession);
}

TEST(Model, Subdiagram) {
  StaticModel m;
  auto x = m.add_thimac("X");
  auto c = m.add_stage(x, ActionKind::Create);
  auto r = m.add_stage(x, ActionKind::Release);
  auto p = m.add_stage(x, ActionKind::Process);
  m.add_flow(c, r);

  std::vector<StageId> pair{c, r};
  Region reg = subdiagram(m, pair);
  EXPECT_TRUE(reg.connected);
  EXPECT_EQ(reg.flows.size(), 1u);

  std::vector<StageId> apart{c, p};
  EXPECT_FALSE(subdiagram(m, apart).connected);

  std::vector<StageId> none;
  EXPECT_EQ(code_of([&] { subdiagram(m, none); }), Errc::EmptyRegion);
  std::vector<StageId> bad{StageId("Q.create")};
  EXPECT_EQ(code_of([&] { subdiagram(m, bad); }), Errc::UnknownStage);

  // a trigger connects as well as a flow does
  m.add_trigger(r, p);
  std::vector<StageId> via_trigger{r, p};
  EXPECT_TRUE(subdiagram(m, via_trigger).connected);
}

TEST(Model, SubdiagramMonotone) {
  auto doc = load("library.tm");
  const auto& m = doc.model;
  std::vector<StageId> growing;
  std::set<FlowId> before;
  for (const auto& s : m.stages()) {
    growing.push_back(s.id);
    Region r = subdiagram(m, growing);
    std::set<FlowId> now(r.flows.begin(), r.flows.end());
    for (const auto& f : before) EXPECT_TRUE(now.contains(f));
    before = std::move(now);
  }
}

TEST(Model, LibraryIsConnected) {
  auto doc = load("library.tm");
  std::vector<StageId> all;
  for (const auto& s : doc.model.stages()) all.push_back(s.id);
  EXPECT_TRUE(subdiagram(doc.model, all).connected);
}

TEST(Model, LibraryAuthorRequestRegionConnected) {
  auto doc = load("library.tm");
  const auto& m = doc.model;
  // the author request: circles 34-35, then the book-ID intake
  std::vector<StageId> region;
  for (const auto& f : m.flows()) {
    if (f.from.str().starts_with("Librarian.AuthorRequest.") && (f.anchor == 34 || f.anchor == 35))
      for (const auto& s : {f.from, f.to})
        if (std::find(region.begin(), region.end(), s) == region.end()) region.push_back(s);
  }
  EXPECT_EQ(region.size(), 4u);
  Region r = subdiagram(m, region);
  EXPECT_TRUE(r.connected);
  EXPECT_EQ(r.flows.size(), 3u);
  region.push_back(StageId("System.BookId.receive"));
  region.push_back(StageId("System.BookId.process"));
  EXPECT_TRUE(subdiagram(m, region).connected);
}

TEST(Model, NestingIsAForest) {
  auto doc = load("library.tm");
  const auto& m = doc.model;
  for (const auto& t : m.thimacs()) {
    const Thimac* cur = &t;
    std::size_t steps = 0;
    while (cur->parent) {
      cur = &m.thimac(*cur->parent);
      ASSERT_LE(++steps, m.thimacs().size());
    }
    std::set<ActionKind> kinds;
    for (const auto& s : t.stage_ids) EXPECT_TRUE(kinds.insert(m.stage(s).kind).second);
  }
}
