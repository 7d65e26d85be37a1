#include "support/fixtures.hpp"

#include "odcheck/errors.hpp"
#include "odcheck/explorer.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace odcheck;
using namespace odcheck::testing;

namespace {

struct Recorded {
	Iteration it;
	IterationOutcome outcome;
	std::vector<StepEvent> events;
};

class Recorder : public IterationVisitor {
public:
	std::size_t abort_after = 0; // 0 = never

	void on_begin(const HighAssignment &, std::uint64_t) override { current_.clear(); }
	void on_event(const StepEvent &ev) override { current_.push_back(ev); }
	VisitControl on_end(const Iteration &it, IterationOutcome o) override
	{
		seen.push_back({it, o, current_});
		return abort_after && seen.size() >= abort_after ? VisitControl::Abort
								 : VisitControl::Continue;
	}

	std::vector<Recorded> seen;

private:
	std::vector<StepEvent> current_;
};

// Maximal feasible schedules by plain recursion with state copies.
void brute_force(const Interpreter &interp, const ExecState &s, Schedule &prefix,
		 std::vector<Schedule> &out)
{
	auto en = interp.enabled(s);
	if (en.empty()) {
		out.push_back(prefix);
		return;
	}
	for (auto t : en) {
		auto next = s;
		interp.step(next, t);
		prefix.push_back(t);
		brute_force(interp, next, prefix, out);
		prefix.pop_back();
	}
}

std::vector<Schedule> brute_force(const Program &p, Granularity g, const Overrides &init = {})
{
	Interpreter interp(p, g);
	std::vector<Schedule> out;
	Schedule prefix;
	brute_force(interp, interp.initial_state(init), prefix, out);
	return out;
}

} // namespace

TEST_CASE("explore enumerates the six schedules of the three-thread leak")
{
	auto p = parse(kBranchLeak);
	Recorder rec;
	auto stats = explore(p, default_category(p), {100, Granularity::BranchAtomic, {}}, rec);
	CHECK(stats.completed == 6);
	CHECK(stats.depth_exceeded == 0);
	REQUIRE(rec.seen.size() == 6);
	std::vector<Schedule> expected = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
					  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
	for (std::size_t i = 0; i < 6; ++i) {
		CHECK(rec.seen[i].it.schedule == expected[i]);
		CHECK(rec.seen[i].it.ordinal == i + 1);
		CHECK(rec.seen[i].outcome == IterationOutcome::Completed);
	}
}

TEST_CASE("single thread, single statement")
{
	auto p = parse("low l = 0; thread { l := 1; }");
	Recorder rec;
	explore(p, default_category(p), {}, rec);
	REQUIRE(rec.seen.size() == 1);
	CHECK(rec.seen[0].it.schedule == Schedule{0});
}

TEST_CASE("two threads of two statements interleave six ways")
{
	auto p = parse("low a = 0; low b = 0; thread { a := 1; a := 2; } thread { b := 1; b := 2; }");
	auto oracle = brute_force(p, Granularity::Stmt);
	CHECK(oracle.size() == 6);

	Recorder rec;
	auto stats = explore(p, default_category(p), {}, rec);
	CHECK(stats.completed == 6);
	std::multiset<Schedule> got;
	for (const auto &r : rec.seen)
		got.insert(r.it.schedule);
	CHECK(got == std::multiset<Schedule>(oracle.begin(), oracle.end()));
}

TEST_CASE("high assignments are enumerated lexicographically by id")
{
	auto p = parse("low l = 0; high a = 0; high b = 0; thread { skip; }");
	auto cat = default_category(p);
	cat.high_domains[2] = {5, 6};
	cat.high_domains[3] = {0, 1, 2};
	auto all = high_assignments(cat);
	REQUIRE(all.size() == 6);
	CHECK(all[0] == HighAssignment{{2, 5}, {3, 0}});
	CHECK(all[1] == HighAssignment{{2, 5}, {3, 1}});
	CHECK(all[3] == HighAssignment{{2, 6}, {3, 0}});
	CHECK(all[5] == HighAssignment{{2, 6}, {3, 2}});

	Recorder rec;
	explore(p, cat, {}, rec);
	REQUIRE(rec.seen.size() == 6);
	for (std::size_t i = 0; i < 6; ++i) {
		CHECK(rec.seen[i].it.highs == all[i]);
		CHECK(rec.seen[i].it.ordinal == i + 1);
	}

	auto no_highs = parse("low l = 0; thread { skip; }");
	CHECK(high_assignments(default_category(no_highs)).size() == 1);
}

TEST_CASE("category validation")
{
	auto p = parse(kBranchLeak);
	Recorder rec;
	auto cat = default_category(p);
	cat.low_init.pop_back();
	CHECK_THROWS_AS(explore(p, cat, {}, rec), ValidationError);

	cat = default_category(p);
	cat.high_domains[3].clear();
	CHECK_THROWS_AS(explore(p, cat, {}, rec), ValidationError);

	cat = default_category(p);
	cat.high_domains[1] = {0};
	CHECK_THROWS_AS(explore(p, cat, {}, rec), ValidationError);

	CHECK_THROWS_AS(explore(p, default_category(p), {0, Granularity::Stmt, {}}, rec),
			ValidationError);
}

TEST_CASE("visitor abort stops the enumeration")
{
	auto p = parse(kBranchLeak);
	Recorder rec;
	rec.abort_after = 2;
	auto stats = explore(p, default_category(p), {100, Granularity::BranchAtomic, {}}, rec);
	CHECK(rec.seen.size() == 2);
	CHECK(stats.completed == 2);
}

TEST_CASE("depth bound abandons long executions and keeps going")
{
	auto p = parse(kSpin);
	Recorder rec;
	auto stats = explore(p, default_category(p), {10, Granularity::Stmt, {}}, rec);
	CHECK(stats.completed == 0);
	// Thread 1 runs at one of positions 0..9, or never.
	CHECK(stats.depth_exceeded == 11);
	for (const auto &r : rec.seen) {
		CHECK(r.outcome == IterationOutcome::DepthExceeded);
		CHECK(r.it.schedule.size() == 10);
	}
	CHECK(stats.max_stack <= 10);
}

TEST_CASE("an execution finishing exactly at the bound completes")
{
	auto p = parse("low l = 0; thread { l := 1; l := 2; }");
	Recorder rec;
	auto stats = explore(p, default_category(p), {2, Granularity::Stmt, {}}, rec);
	CHECK(stats.completed == 1);
	auto tight = explore(p, default_category(p), {1, Granularity::Stmt, {}}, rec);
	CHECK(tight.depth_exceeded == 1);
}

TEST_CASE("fairness pruning")
{
	auto p = parse("low a = 0; thread { a := 1; a := 2; } thread { skip; skip; }");
	Recorder all;
	explore(p, default_category(p), {}, all);
	CHECK(all.seen.size() == 6);

	// K = 1: no enabled thread may wait more than one step, so runs alternate.
	Recorder fair;
	auto stats = explore(p, default_category(p), {100, Granularity::Stmt, 1}, fair);
	std::set<Schedule> got;
	for (const auto &r : fair.seen)
		got.insert(r.it.schedule);
	CHECK(got == std::set<Schedule>{{0, 1, 0, 1}, {1, 0, 1, 0}});
	CHECK(stats.pruned == 0);

	// Three threads with K = 1 hit dead ends: after one choice two threads
	// have already waited a step and only one can go next.
	auto three = parse("low a = 0; thread { skip; skip; } thread { skip; skip; } thread { skip; skip; }");
	Recorder r3;
	auto s3 = explore(three, default_category(three), {100, Granularity::Stmt, 1}, r3);
	CHECK(s3.pruned > 0);
	CHECK(r3.seen.empty());
	auto s3b = explore(three, default_category(three), {100, Granularity::Stmt, 2}, r3);
	CHECK(s3b.completed > 0);
	for (const auto &r : r3.seen) {
		// No thread starves for more than 2 consecutive steps while enabled.
		CHECK(r.it.schedule.size() == 6);
	}
}

TEST_CASE("replay reproduces explored iterations")
{
	auto p = parse(kBranchLeak);
	auto cat = default_category(p);
	Recorder rec;
	explore(p, cat, {100, Granularity::BranchAtomic, {}}, rec);
	for (const auto &r : rec.seen) {
		std::vector<StepEvent> events;
		auto status = replay(p, cat, r.it, Granularity::BranchAtomic,
				     [&](const StepEvent &e) { events.push_back(e); });
		CHECK(status == RunStatus::Completed);
		CHECK(events == r.events);
	}

	// Iteration 4 is [1,2,0]: its low store ends at (1, 1).
	const auto &violating = rec.seen[3];
	REQUIRE(violating.it.schedule == Schedule{1, 2, 0});
	auto obs = observe(violating.events, cat.low_init);
	CHECK(obs.trace == LowTrace{{0, 0}, {1, 0}, {1, 1}});

	Iteration bad{{}, {0, 0, 0}, 1};
	CHECK_THROWS_AS(replay(p, cat, bad, Granularity::BranchAtomic), ExecutionError);
}

TEST_CASE("property: completeness and no duplication on small random programs")
{
	GenParams params;
	params.max_stmts = 2;
	ProgramGenerator gen(1234, params);
	int checked = 0;
	for (int i = 0; i < 200; ++i) {
		auto p = gen.program();
		auto g = i % 2 ? Granularity::Stmt : Granularity::BranchAtomic;
		auto cat = gen.category(p);

		std::map<HighAssignment, std::multiset<Schedule>> expected;
		bool small = true;
		for (const auto &h : high_assignments(cat)) {
			auto all = brute_force(p, g, overrides_for(cat, h));
			for (const auto &s : all)
				small = small && s.size() <= 8;
			expected[h].insert(all.begin(), all.end());
		}
		if (!small)
			continue;
		++checked;

		Recorder rec;
		auto stats = explore(p, cat, {64, g, {}}, rec);
		std::map<HighAssignment, std::multiset<Schedule>> got;
		std::set<std::pair<HighAssignment, Schedule>> unique;
		for (const auto &r : rec.seen) {
			got[r.it.highs].insert(r.it.schedule);
			unique.insert({r.it.highs, r.it.schedule});
		}
		CHECK(got == expected);
		CHECK(unique.size() == rec.seen.size());
		CHECK(stats.completed == rec.seen.size());
	}
	CHECK(checked > 100);
}
