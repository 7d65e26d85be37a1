#pragma once

// Shared programs and random generators for the test suites.

#include "odcheck/ast.hpp"
#include "odcheck/explorer.hpp"
#include "odcheck/lowstore.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

namespace odcheck::testing {

/// Three threads: a guarded copy of h into l2, l1 := 1, h := 1.
inline constexpr const char *kBranchLeak = R"(
low l1 = 0;
low l2 = 0;
high h = 0;
thread { if (l1 == 1) { l2 := h; } else { skip; } }
thread { l1 := 1; }
thread { h := 1; }
)";

inline constexpr const char *kDirectLeak = "low l = 0; high h = 0; thread { l := h; }";

inline constexpr const char *kSecureCounter =
	"low l1 = 0; high h = 0; thread { l1 := 1; } thread { h := h + 1; }";

inline constexpr const char *kSpin =
	"low l = 0; thread { while (1 == 1) { skip; } } thread { l := 1; }";

inline Category with_high_domain(const Program &p, Category cat, const std::string &name,
				 std::vector<Value> dom)
{
	cat.high_domains[p.find(name)->id] = std::move(dom);
	return cat;
}

inline std::string read_text(const std::string &path)
{
	std::ifstream in(path, std::ios::binary);
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

struct GenParams {
	std::size_t max_threads = 3;
	std::size_t max_stmts = 4;
	std::size_t max_low = 3;
	std::size_t max_high = 2;
	Value max_literal = 3;
	bool loops = false;
	bool multiply = false;
};

class ProgramGenerator {
public:
	ProgramGenerator(std::uint64_t seed, GenParams params) : rng_(seed), params_(params) {}

	Program program()
	{
		Program p;
		auto lows = pick(1, params_.max_low);
		auto highs = pick(0, params_.max_high);
		for (std::size_t i = 0; i < lows; ++i)
			p.decls.push_back({"l" + std::to_string(i + 1), SecurityLabel::Low, 0, literal()});
		for (std::size_t i = 0; i < highs; ++i)
			p.decls.push_back({"h" + std::to_string(i + 1), SecurityLabel::High, 0, literal()});
		// Interleave declaration order so id assignment is exercised.
		std::shuffle(p.decls.begin(), p.decls.end(), rng_);
		assign_ids(p.decls);

		auto threads = pick(1, params_.max_threads);
		for (std::size_t t = 0; t < threads; ++t) {
			StmtList body;
			auto n = pick(1, params_.max_stmts);
			for (std::size_t i = 0; i < n; ++i)
				body.push_back(statement(p, 1));
			p.threads.push_back(std::move(body));
		}
		return p;
	}

	/// Low store of 0..max_literal values and a non-empty subset of {0, 1}
	/// for every high variable.
	Category category(const Program &p)
	{
		Category cat = default_category(p, "random");
		for (auto &v : cat.low_init)
			v = literal();
		for (auto &[id, dom] : cat.high_domains) {
			switch (pick(0, 2)) {
			case 0:
				dom = {0};
				break;
			case 1:
				dom = {1};
				break;
			default:
				dom = {0, 1};
			}
		}
		return cat;
	}

	std::mt19937_64 &rng() { return rng_; }

private:
	std::size_t pick(std::size_t lo, std::size_t hi)
	{
		return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
	}

	Value literal() { return static_cast<Value>(pick(0, static_cast<std::size_t>(params_.max_literal))); }

	VarId any_var(const Program &p) { return static_cast<VarId>(pick(1, p.decls.size())); }

	ExprPtr expr(const Program &p, int depth)
	{
		auto roll = pick(0, 9);
		if (depth <= 0 || roll < 4)
			return roll % 2 ? lit(literal()) : var(any_var(p));
		if (roll == 4)
			return unary(pick(0, 1) ? UnaryOp::Not : UnaryOp::Negate, expr(p, depth - 1));
		static constexpr BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Eq,
						   BinaryOp::Ne,  BinaryOp::Lt,  BinaryOp::Le,
						   BinaryOp::And, BinaryOp::Or,  BinaryOp::Mul};
		auto n = std::size(ops) - (params_.multiply ? 0 : 1);
		return binary(ops[pick(0, n - 1)], expr(p, depth - 1), expr(p, depth - 1));
	}

	Stmt simple(const Program &p)
	{
		if (pick(0, 4) == 0)
			return Stmt{Skip{}};
		return Stmt{Assign{any_var(p), expr(p, 2)}};
	}

	// If branches hold at most one assignment so the program is valid in
	// branch-atomic mode too.
	StmtList branch(const Program &p)
	{
		StmtList out;
		if (pick(0, 3) > 0)
			out.push_back(simple(p));
		if (pick(0, 3) == 0)
			out.push_back(Stmt{Skip{}});
		return out;
	}

	Stmt statement(const Program &p, int nesting)
	{
		auto roll = pick(0, 9);
		if (roll < 7 || nesting <= 0)
			return simple(p);
		if (roll < 9 || !params_.loops)
			return Stmt{If{expr(p, 2), branch(p), branch(p)}};
		StmtList body;
		body.push_back(statement(p, nesting - 1));
		return Stmt{While{expr(p, 1), std::move(body)}};
	}

	std::mt19937_64 rng_;
	GenParams params_;
};

/// Trace of `len` low stores of the given arity drawn from `alphabet`
/// distinct stores.
inline LowTrace random_trace(std::mt19937_64 &rng, std::size_t arity, std::size_t len,
			     std::size_t alphabet)
{
	std::uniform_int_distribution<std::size_t> letter(0, alphabet - 1);
	LowTrace t;
	for (std::size_t i = 0; i < len; ++i) {
		auto a = static_cast<Value>(letter(rng));
		LowStore s(arity, 0);
		if (arity > 0)
			s[0] = a;
		t.push_back(std::move(s));
	}
	return t;
}

} // namespace odcheck::testing
