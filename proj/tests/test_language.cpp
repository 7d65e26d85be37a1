#include "support/fixtures.hpp"

#include "odcheck/errors.hpp"

#include <doctest.h>

using namespace odcheck;
using namespace odcheck::testing;

TEST_CASE("parse assigns low ids first, then high ids")
{
	auto p = parse(kBranchLeak);
	REQUIRE(p.thread_count() == 3);
	CHECK(p.find("l1")->id == 1);
	CHECK(p.find("l2")->id == 2);
	CHECK(p.find("h")->id == 3);
	CHECK(p.low_count() == 2);
	CHECK_NOTHROW(validate(p));

	// Declaration order interleaved: lows still get 1..|L|.
	auto q = parse("high a = 1; low b = 2; high c = 3; low d = 4; thread { skip; }");
	CHECK(q.find("b")->id == 1);
	CHECK(q.find("d")->id == 2);
	CHECK(q.find("a")->id == 3);
	CHECK(q.find("c")->id == 4);
}

TEST_CASE("minimal program")
{
	auto p = parse("low l = 0; thread { skip }");
	REQUIRE(p.thread_count() == 1);
	REQUIRE(p.threads[0].size() == 1);
	CHECK(std::holds_alternative<Skip>(p.threads[0][0].node));
	CHECK(parse("low l = 0; thread { skip; }") == p);
	CHECK_THROWS_AS(parse("low l = 0; thread { skip skip }"), ParseError);
}

TEST_CASE("parse errors carry positions")
{
	SUBCASE("undeclared variable")
	{
		try {
			parse("low l = 0; thread { l := x; }");
			FAIL("expected ParseError");
		} catch (const ParseError &e) {
			CHECK(e.line() == 1);
			CHECK(e.column() == 26);
			CHECK(std::string(e.what()).find("undeclared") != std::string::npos);
		}
	}
	SUBCASE("duplicate declaration")
	{
		try {
			parse("low l = 0;\nhigh l = 1;\nthread { skip; }");
			FAIL("expected ParseError");
		} catch (const ParseError &e) {
			CHECK(e.line() == 2);
			CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
		}
	}
	SUBCASE("syntax")
	{
		CHECK_THROWS_AS(parse("low l = 0; thread { l := ; }"), ParseError);
		CHECK_THROWS_AS(parse("low l = 0; thread { l = 1; }"), ParseError);
		CHECK_THROWS_AS(parse("low l := 0; thread { skip; }"), ParseError);
		CHECK_THROWS_AS(parse("low l = 0;"), ParseError);
		CHECK_THROWS_AS(parse("thread { skip; } low l = 0;"), ParseError);
		CHECK_THROWS_AS(parse("low l = 0; thread { skip; "), ParseError);
		CHECK_THROWS_AS(parse("low l = 99999999999999999999; thread { skip; }"), ParseError);
		CHECK_THROWS_AS(parse("low l = 0; thread { l := 1 $ 2; }"), ParseError);
	}
}

TEST_CASE("validate")
{
	auto p = parse(kBranchLeak);
	CHECK_NOTHROW(validate(p));

	auto dup = p;
	dup.decls.push_back({"l1", SecurityLabel::Low, 4, 0});
	CHECK_THROWS_AS(validate(dup), ValidationError);

	auto none = p;
	none.threads.clear();
	CHECK_THROWS_AS(validate(none), ValidationError);

	auto bad_ref = p;
	bad_ref.threads[1][0] = Stmt{Assign{1, var(42)}};
	CHECK_THROWS_AS(validate(bad_ref), ValidationError);

	auto bad_ids = p;
	std::swap(bad_ids.decls[0].id, bad_ids.decls[2].id);
	CHECK_THROWS_AS(validate(bad_ids), ValidationError);
}

TEST_CASE("label_of")
{
	auto p = parse(kBranchLeak);
	CHECK(label_of(p, 1) == SecurityLabel::Low);
	CHECK(label_of(p, 3) == SecurityLabel::High);
	CHECK_THROWS_AS(label_of(p, 99), ValidationError);
}

TEST_CASE("expression precedence and negative literals")
{
	auto p = parse("low a = -5; thread { a := 1 + 2 * 3 == 7 && !(a < 0) || -a <= (-2); }");
	CHECK(p.decls[0].init == -5);
	const auto &asg = std::get<Assign>(p.threads[0][0].node);
	// top-level operator is ||
	const auto &top = std::get<Binary>(asg.rhs->node);
	CHECK(top.op == BinaryOp::Or);
	const auto &rhs = std::get<Binary>(top.rhs->node);
	CHECK(rhs.op == BinaryOp::Le);
	CHECK(std::get<Literal>(rhs.rhs->node).value == -2);
	CHECK(parse(render(p)) == p);
}

TEST_CASE("else branch is optional and renders as empty")
{
	auto p = parse("low l = 0; thread { if (l == 0) { l := 1; } }");
	const auto &s = std::get<If>(p.threads[0][0].node);
	CHECK(s.else_branch.empty());
	CHECK(parse(render(p)) == p);
}

TEST_CASE("comments are ignored")
{
	auto p = parse("// header\nlow l = 0; // trailing\nthread { skip; } // done");
	CHECK(p.thread_count() == 1);
}

TEST_CASE("property: parse . render is the identity on random programs")
{
	GenParams params;
	params.loops = true;
	params.multiply = true;
	ProgramGenerator gen(0x5eed, params);
	for (int i = 0; i < 500; ++i) {
		auto p = gen.program();
		REQUIRE_NOTHROW(validate(p));
		auto text = render(p);
		auto q = parse(text);
		INFO(text);
		REQUIRE(q == p);
		CHECK(render(q) == text);
	}
}

TEST_CASE("low ids are stable across parses")
{
	auto a = parse(kBranchLeak);
	auto b = parse(kBranchLeak);
	CHECK(a == b);
}
