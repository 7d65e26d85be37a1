#pragma once

#include "odcheck/executor.hpp"
#include "odcheck/lowstore.hpp"

#include <map>
#include <string>

namespace odcheck {

using HighAssignment = std::map<VarId, Value>;

/// A class of pairwise low-equivalent initial stores: one fixed low store and
/// a finite domain for every high variable.
struct Category {
	std::string name;
	LowStore low_init;                           // indexed by low id - 1
	std::map<VarId, std::vector<Value>> high_domains; // every high id, non-empty

	friend bool operator==(const Category &, const Category &) = default;
};

/// Low store from the declared inits and singleton declared-init high domains.
Category default_category(const Program &p, std::string name = "default");

/// Checks that the category covers the program's variables exactly.
void validate(const Program &p, const Category &cat);

/// Every high assignment of the category, lexicographic by high id then by
/// domain order.
std::vector<HighAssignment> high_assignments(const Category &cat);

/// Store overrides for one iteration: the category's low store plus `highs`.
Overrides overrides_for(const Category &cat, const HighAssignment &highs);

struct Iteration {
	HighAssignment highs;
	Schedule schedule;
	std::uint64_t ordinal = 0; // 1-based within the category

	friend bool operator==(const Iteration &, const Iteration &) = default;
};

enum class IterationOutcome { Completed, DepthExceeded };

std::string_view to_string(IterationOutcome o);

struct ExplorationStats {
	std::uint64_t completed = 0;
	std::uint64_t depth_exceeded = 0;
	std::uint64_t pruned = 0; // fairness dead ends, never visited
	/// Deepest scheduling-choice stack seen; bounded by the depth bound.
	std::size_t max_stack = 0;

	ExplorationStats &operator+=(const ExplorationStats &o);
};

struct ExploreOptions {
	std::size_t depth_bound = 10000;
	Granularity granularity = Granularity::Stmt;
	/// When set, no continuously enabled thread may be passed over for more
	/// than this many consecutive steps.
	std::optional<std::size_t> fairness;
};

enum class VisitControl { Continue, Abort };

/// Receives iterations in enumeration order. For each one: begin, every step
/// event in order, then end with the outcome and the full schedule.
class IterationVisitor {
public:
	virtual ~IterationVisitor() = default;
	virtual void on_begin(const HighAssignment &highs, std::uint64_t ordinal)
	{
		(void)highs;
		(void)ordinal;
	}
	virtual void on_event(const StepEvent &ev) = 0;
	virtual VisitControl on_end(const Iteration &it, IterationOutcome outcome) = 0;
};

/// Stateless depth-first enumeration of every (high assignment, schedule)
/// pair that either completes or reaches the depth bound. Backtracking
/// re-executes from the initial state; only the current stack of scheduling
/// choices is retained between iterations.
ExplorationStats explore(const Program &p, const Category &cat, const ExploreOptions &opts,
			 IterationVisitor &visitor);

/// Re-executes one iteration. Throws ExecutionError when the schedule is not
/// feasible or overflows.
RunStatus replay(const Program &p, const Category &cat, const Iteration &it, Granularity g,
		 const EventSink &sink = {});

} // namespace odcheck
