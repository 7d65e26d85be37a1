#pragma once

#include "odcheck/ast.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace odcheck {

/// Value of every declared variable, indexed by id - 1. Lows occupy the
/// prefix [0, |L|).
using Store = std::vector<Value>;
using Overrides = std::map<VarId, Value>;
using Schedule = std::vector<ThreadId>;

enum class Granularity {
	/// Skip, Assign and each If/While guard evaluation are separate steps.
	Stmt,
	/// An If evaluates its guard and runs the chosen branch in one step.
	BranchAtomic,
};

std::string_view to_string(Granularity g);
std::optional<Granularity> granularity_from_string(std::string_view s);

/// Position inside one statement list. A frame whose list is the body of a
/// While leaves the parent's pc on the loop, so popping it re-tests the guard.
struct Frame {
	const StmtList *stmts = nullptr;
	std::size_t pc = 0;

	friend bool operator==(const Frame &, const Frame &) = default;
};

struct ThreadControl {
	std::vector<Frame> frames; // empty iff the thread has terminated

	bool terminated() const { return frames.empty(); }
	friend bool operator==(const ThreadControl &, const ThreadControl &) = default;
};

/// Execution state. Frames point into the Program's statement lists, so a
/// state is only meaningful while its Program is alive.
struct ExecState {
	Store store;
	std::vector<ThreadControl> threads;
	std::uint64_t steps = 0;

	friend bool operator==(const ExecState &, const ExecState &) = default;
};

struct Write {
	VarId id = 0;
	Value old_value = 0;
	Value new_value = 0;

	friend bool operator==(const Write &, const Write &) = default;
};

struct StepEvent {
	ThreadId tid = 0;
	std::optional<Write> write;

	friend bool operator==(const StepEvent &, const StepEvent &) = default;
};

enum class RunStatus {
	Completed,  // schedule consumed and no thread enabled
	Incomplete, // schedule consumed but some thread still enabled
	Infeasible, // a scheduled thread was not enabled at its turn
	Overflow,
};

std::string_view to_string(RunStatus s);

struct RunOutcome {
	RunStatus status = RunStatus::Completed;
	/// Index into the schedule where Infeasible/Overflow occurred.
	std::size_t position = 0;
};

using EventSink = std::function<void(const StepEvent &)>;

/// Small-step interpreter for one program at a fixed atomicity granularity.
/// Stateless and const: one instance may be shared by concurrent callers.
class Interpreter {
public:
	/// Validates the program. In BranchAtomic mode every If branch must be
	/// loop free and write at most one variable along any path.
	Interpreter(const Program &p, Granularity g);

	const Program &program() const { return *program_; }
	Granularity granularity() const { return granularity_; }

	/// Throws ValidationError when an override names an undeclared variable.
	ExecState initial_state(const Overrides &overrides = {}) const;

	/// Non-terminated threads in ascending order.
	std::vector<ThreadId> enabled(const ExecState &s) const;
	bool is_enabled(const ExecState &s, ThreadId tid) const;
	bool any_enabled(const ExecState &s) const;

	/// Executes one atomic unit of `tid` in place. On error (disabled tid,
	/// overflow) the state is left unchanged.
	StepEvent step(ExecState &s, ThreadId tid) const;

	/// Replays `sched` from the initial state, forwarding each event.
	RunOutcome run_schedule(const Overrides &overrides, const Schedule &sched,
				const EventSink &sink = {}) const;

	Value eval(const Store &store, const Expr &e) const;

private:
	void normalize(ThreadControl &tc) const;
	void run_atomic(Store &store, const StmtList &stmts, std::optional<Write> &write) const;

	const Program *program_;
	Granularity granularity_;
};

/// Functional form of Interpreter::step.
std::pair<ExecState, StepEvent> step(const Interpreter &interp, const ExecState &s, ThreadId tid);

} // namespace odcheck
