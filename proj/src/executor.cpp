#include "odcheck/executor.hpp"

#include "odcheck/errors.hpp"

#include <limits>

namespace odcheck {

std::string_view to_string(Granularity g)
{
	return g == Granularity::Stmt ? "stmt" : "branch-atomic";
}

std::optional<Granularity> granularity_from_string(std::string_view s)
{
	if (s == "stmt")
		return Granularity::Stmt;
	if (s == "branch-atomic")
		return Granularity::BranchAtomic;
	return std::nullopt;
}

std::string_view to_string(RunStatus s)
{
	switch (s) {
	case RunStatus::Completed:
		return "completed";
	case RunStatus::Incomplete:
		return "incomplete";
	case RunStatus::Infeasible:
		return "infeasible";
	case RunStatus::Overflow:
		return "overflow";
	}
	return "?";
}

namespace {

// Maximum number of writes along any path through `stmts`, or nullopt if a
// While occurs.
std::optional<std::size_t> atomic_writes(const StmtList &stmts)
{
	std::size_t total = 0;
	for (const auto &s : stmts) {
		if (std::holds_alternative<Assign>(s.node)) {
			++total;
		} else if (const auto *i = std::get_if<If>(&s.node)) {
			auto a = atomic_writes(i->then_branch);
			auto b = atomic_writes(i->else_branch);
			if (!a || !b)
				return std::nullopt;
			total += std::max(*a, *b);
		} else if (std::holds_alternative<While>(s.node)) {
			return std::nullopt;
		}
	}
	return total;
}

void check_branch_atomic(const StmtList &stmts, std::size_t tid)
{
	for (const auto &s : stmts) {
		if (const auto *i = std::get_if<If>(&s.node)) {
			for (const auto *branch : {&i->then_branch, &i->else_branch}) {
				auto writes = atomic_writes(*branch);
				if (!writes)
					throw ValidationError("thread " + std::to_string(tid) +
							      ": branch-atomic if-branch contains a while loop");
				if (*writes > 1)
					throw ValidationError(
						"thread " + std::to_string(tid) +
						": branch-atomic if-branch may write more than one variable");
			}
		} else if (const auto *w = std::get_if<While>(&s.node)) {
			check_branch_atomic(w->body, tid);
		}
	}
}

} // namespace

Interpreter::Interpreter(const Program &p, Granularity g) : program_(&p), granularity_(g)
{
	validate(p);
	if (g == Granularity::BranchAtomic)
		for (std::size_t t = 0; t < p.threads.size(); ++t)
			check_branch_atomic(p.threads[t], t);
}

ExecState Interpreter::initial_state(const Overrides &overrides) const
{
	ExecState s;
	s.store.resize(program_->var_count());
	for (const auto &d : program_->decls)
		s.store[d.id - 1] = d.init;
	for (const auto &[id, v] : overrides) {
		if (id == 0 || id > s.store.size())
			throw ValidationError("override of undeclared variable id " + std::to_string(id));
		s.store[id - 1] = v;
	}
	s.threads.resize(program_->thread_count());
	for (std::size_t t = 0; t < s.threads.size(); ++t) {
		s.threads[t].frames.push_back(Frame{&program_->threads[t], 0});
		normalize(s.threads[t]);
	}
	return s;
}

std::vector<ThreadId> Interpreter::enabled(const ExecState &s) const
{
	std::vector<ThreadId> out;
	for (std::size_t t = 0; t < s.threads.size(); ++t)
		if (!s.threads[t].terminated())
			out.push_back(static_cast<ThreadId>(t));
	return out;
}

bool Interpreter::is_enabled(const ExecState &s, ThreadId tid) const
{
	return tid < s.threads.size() && !s.threads[tid].terminated();
}

bool Interpreter::any_enabled(const ExecState &s) const
{
	for (const auto &tc : s.threads)
		if (!tc.terminated())
			return true;
	return false;
}

void Interpreter::normalize(ThreadControl &tc) const
{
	while (!tc.frames.empty() && tc.frames.back().pc >= tc.frames.back().stmts->size())
		tc.frames.pop_back();
}

Value Interpreter::eval(const Store &store, const Expr &e) const
{
	return std::visit(
		[&](const auto &x) -> Value {
			using T = std::decay_t<decltype(x)>;
			if constexpr (std::is_same_v<T, Literal>) {
				return x.value;
			} else if constexpr (std::is_same_v<T, VarRef>) {
				return store[x.id - 1];
			} else if constexpr (std::is_same_v<T, Unary>) {
				Value v = eval(store, *x.operand);
				if (x.op == UnaryOp::Not)
					return v == 0 ? 1 : 0;
				if (v == std::numeric_limits<Value>::min())
					throw OverflowError("arithmetic overflow");
				return -v;
			} else {
				if (x.op == BinaryOp::And) {
					if (eval(store, *x.lhs) == 0)
						return 0;
					return eval(store, *x.rhs) != 0 ? 1 : 0;
				}
				if (x.op == BinaryOp::Or) {
					if (eval(store, *x.lhs) != 0)
						return 1;
					return eval(store, *x.rhs) != 0 ? 1 : 0;
				}
				Value a = eval(store, *x.lhs);
				Value b = eval(store, *x.rhs);
				Value r = 0;
				bool overflow = false;
				switch (x.op) {
				case BinaryOp::Add:
					overflow = __builtin_add_overflow(a, b, &r);
					break;
				case BinaryOp::Sub:
					overflow = __builtin_sub_overflow(a, b, &r);
					break;
				case BinaryOp::Mul:
					overflow = __builtin_mul_overflow(a, b, &r);
					break;
				case BinaryOp::Eq:
					return a == b;
				case BinaryOp::Ne:
					return a != b;
				case BinaryOp::Lt:
					return a < b;
				case BinaryOp::Le:
					return a <= b;
				default:
					return 0;
				}
				if (overflow)
					throw OverflowError("arithmetic overflow");
				return r;
			}
		},
		e.node);
}

void Interpreter::run_atomic(Store &store, const StmtList &stmts,
			     std::optional<Write> &write) const
{
	for (const auto &s : stmts) {
		if (const auto *a = std::get_if<Assign>(&s.node)) {
			Value v = eval(store, *a->rhs);
			write = Write{a->target, store[a->target - 1], v};
			store[a->target - 1] = v;
		} else if (const auto *i = std::get_if<If>(&s.node)) {
			run_atomic(store, eval(store, *i->guard) != 0 ? i->then_branch : i->else_branch,
				   write);
		}
	}
}

StepEvent Interpreter::step(ExecState &s, ThreadId tid) const
{
	if (!is_enabled(s, tid))
		throw ExecutionError("thread " + std::to_string(tid) + " is not enabled");

	auto &tc = s.threads[tid];
	Frame &top = tc.frames.back();
	const Stmt &stmt = (*top.stmts)[top.pc];
	StepEvent ev{tid, std::nullopt};

	if (std::holds_alternative<Skip>(stmt.node)) {
		++top.pc;
	} else if (const auto *a = std::get_if<Assign>(&stmt.node)) {
		Value v = eval(s.store, *a->rhs);
		ev.write = Write{a->target, s.store[a->target - 1], v};
		s.store[a->target - 1] = v;
		++top.pc;
	} else if (const auto *i = std::get_if<If>(&stmt.node)) {
		if (granularity_ == Granularity::BranchAtomic) {
			// At most one write happens, so restoring it undoes a failed step.
			std::optional<Write> w;
			try {
				run_atomic(s.store, eval(s.store, *i->guard) != 0 ? i->then_branch
										   : i->else_branch,
					   w);
			} catch (const OverflowError &) {
				if (w)
					s.store[w->id - 1] = w->old_value;
				throw;
			}
			ev.write = w;
			++top.pc;
		} else {
			const StmtList &branch =
				eval(s.store, *i->guard) != 0 ? i->then_branch : i->else_branch;
			++top.pc;
			tc.frames.push_back(Frame{&branch, 0});
		}
	} else if (const auto *w = std::get_if<While>(&stmt.node)) {
		if (eval(s.store, *w->guard) != 0)
			tc.frames.push_back(Frame{&w->body, 0});
		else
			++top.pc;
	}

	normalize(tc);
	++s.steps;
	return ev;
}

RunOutcome Interpreter::run_schedule(const Overrides &overrides, const Schedule &sched,
				     const EventSink &sink) const
{
	ExecState s = initial_state(overrides);
	for (std::size_t i = 0; i < sched.size(); ++i) {
		if (!is_enabled(s, sched[i]))
			return {RunStatus::Infeasible, i};
		StepEvent ev;
		try {
			ev = step(s, sched[i]);
		} catch (const OverflowError &) {
			return {RunStatus::Overflow, i};
		}
		if (sink)
			sink(ev);
	}
	return {any_enabled(s) ? RunStatus::Incomplete : RunStatus::Completed, sched.size()};
}

std::pair<ExecState, StepEvent> step(const Interpreter &interp, const ExecState &s, ThreadId tid)
{
	ExecState next = s;
	StepEvent ev = interp.step(next, tid);
	return {std::move(next), ev};
}

} // namespace odcheck
