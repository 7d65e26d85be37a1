#pragma once

#include "odcheck/executor.hpp"

#include <span>

namespace odcheck {

/// Values of the low variables ordered by id 1..|L|.
using LowStore = std::vector<Value>;
using LowTrace = std::vector<LowStore>;

/// A value-changing write to a low variable.
struct ChangeEvent {
	std::uint64_t num = 0; // 1-based within one execution
	VarId id = 0;
	Value val = 0;

	friend bool operator==(const ChangeEvent &, const ChangeEvent &) = default;
};

/// Projection of a full store onto the low variables.
LowStore low_part(const Program &p, const Store &s);

/// True iff the stores agree on every low variable. Throws ValidationError
/// when either store does not match the program's declarations.
bool low_equivalent(const Program &p, const Store &a, const Store &b);

/// Tracks the current low store of one execution and turns writes into
/// change events. Keeps no history.
class LowStoreMonitor {
public:
	explicit LowStoreMonitor(LowStore initial) : current_(std::move(initial)) {}

	/// Emits a ChangeEvent iff the event writes a low variable with a value
	/// different from its current one.
	std::optional<ChangeEvent> observe(const StepEvent &ev);

	const LowStore &current() const { return current_; }
	std::uint64_t changes() const { return changes_; }

private:
	LowStore current_;
	std::uint64_t changes_ = 0;
};

struct Observation {
	std::vector<ChangeEvent> changes;
	LowTrace trace; // initial low store, then the store after each change
};

Observation observe(std::span<const StepEvent> events, const LowStore &initial);

/// Applies one change to a low store. Throws ValidationError when the id is
/// not a low variable of the store.
void apply(LowStore &store, VarId id, Value val);

} // namespace odcheck
