#include "support/fixtures.hpp"

#include "odcheck/errors.hpp"
#include "odcheck/lowstore.hpp"

#include <doctest.h>

using namespace odcheck;
using namespace odcheck::testing;

namespace {

StepEvent write_event(VarId id, Value old_v, Value new_v)
{
	return StepEvent{0, Write{id, old_v, new_v}};
}

} // namespace

TEST_CASE("low_equivalent ignores high variables")
{
	auto p = parse(kBranchLeak);
	CHECK(low_equivalent(p, {0, 0, 0}, {0, 0, 7}));
	CHECK_FALSE(low_equivalent(p, {0, 0, 0}, {1, 0, 0}));
	Store s{3, 4, 5};
	CHECK(low_equivalent(p, s, s));
	CHECK_THROWS_AS(low_equivalent(p, {0, 0}, {0, 0, 0}), ValidationError);
}

TEST_CASE("observe: a single low change")
{
	// Schedule where only l1 := 1 changes the low store.
	std::vector<StepEvent> events{StepEvent{0, {}}, write_event(1, 0, 1), write_event(3, 0, 1)};
	auto obs = observe(events, {0, 0});
	REQUIRE(obs.changes.size() == 1);
	CHECK(obs.changes[0] == ChangeEvent{1, 1, 1});
	CHECK(obs.trace == LowTrace{{0, 0}, {1, 0}});
}

TEST_CASE("observe: rewriting the current value is a stutter")
{
	std::vector<StepEvent> events{write_event(1, 0, 0)};
	auto obs = observe(events, {0, 0});
	CHECK(obs.changes.empty());
	CHECK(obs.trace == LowTrace{{0, 0}});
}

TEST_CASE("observe: l1 -> 1, l1 -> -1, l2 -> 2")
{
	std::vector<StepEvent> events{write_event(1, 0, 1), write_event(1, 1, -1), write_event(2, 0, 2)};
	auto obs = observe(events, {0, 0});
	CHECK(obs.trace == LowTrace{{0, 0}, {1, 0}, {-1, 0}, {-1, 2}});
	CHECK(obs.changes ==
	      std::vector<ChangeEvent>{{1, 1, 1}, {2, 1, -1}, {3, 2, 2}});
}

TEST_CASE("monitor tracks its own current store, not the event's old value")
{
	LowStoreMonitor m({5});
	CHECK_FALSE(m.observe(write_event(1, 0, 5)));
	auto c = m.observe(write_event(1, 5, 6));
	REQUIRE(c);
	CHECK(c->num == 1);
	CHECK(m.current() == LowStore{6});
	CHECK(m.changes() == 1);
}

TEST_CASE("property: trace length, reconstruction, no-op filtering")
{
	ProgramGenerator gen(99, GenParams{});
	std::mt19937_64 rng(3);
	for (int i = 0; i < 300; ++i) {
		auto p = gen.program();
		auto cat = gen.category(p);
		Interpreter interp(p, Granularity::Stmt);
		auto highs = high_assignments(cat).front();
		auto s = interp.initial_state(overrides_for(cat, highs));

		std::vector<StepEvent> events;
		while (interp.any_enabled(s)) {
			auto en = interp.enabled(s);
			events.push_back(interp.step(
				s, en[std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng)]));
		}
		auto obs = observe(events, cat.low_init);
		CHECK(obs.trace.size() == obs.changes.size() + 1);
		CHECK(obs.trace.back() == low_part(p, s.store));

		LowStore cur = cat.low_init;
		for (std::size_t k = 0; k < obs.changes.size(); ++k) {
			CHECK(obs.changes[k].num == k + 1);
			CHECK(cur[obs.changes[k].id - 1] != obs.changes[k].val);
			apply(cur, obs.changes[k].id, obs.changes[k].val);
			CHECK(cur == obs.trace[k + 1]);
			CHECK(obs.trace[k] != obs.trace[k + 1]);
		}
	}
}
