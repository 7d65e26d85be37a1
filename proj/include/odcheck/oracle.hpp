#pragma once

#include "odcheck/explorer.hpp"
#include "odcheck/lowstore.hpp"

#include <map>
#include <span>

namespace odcheck {

/// A low trace with no two adjacent elements equal: the canonical
/// representative of its stutter-equivalence class.
using CollapsedTrace = LowTrace;

/// Removes consecutive duplicates. Throws ValidationError on an empty trace.
CollapsedTrace stutter_collapse(const LowTrace &t);

/// True iff both traces collapse to the same sequence. Throws
/// ValidationError when the traces have different low-store arity.
bool stutter_equivalent(const LowTrace &a, const LowTrace &b);

using TraceMultiset = std::map<CollapsedTrace, std::uint64_t>;

/// Collapsed low trace of every (high assignment, maximal schedule) pair,
/// found by plain recursion over enabled threads with state copies. Throws
/// BoundExceededError if any execution runs longer than `depth_bound` steps.
TraceMultiset all_low_traces(const Program &p, const Category &cat, std::size_t depth_bound,
			     Granularity g);

struct OracleCategory {
	std::string name;
	bool secure = false;
	TraceMultiset traces;
};

struct OracleResult {
	std::vector<OracleCategory> categories;
	bool secure = true;
};

/// Decides observational determinism directly: a category is secure iff all
/// of its executions share one collapsed low trace.
OracleResult od_oracle(const Program &p, std::span<const Category> categories,
		       std::size_t depth_bound, Granularity g);

} // namespace odcheck
