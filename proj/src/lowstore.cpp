#include "odcheck/lowstore.hpp"

#include "odcheck/errors.hpp"

namespace odcheck {

LowStore low_part(const Program &p, const Store &s)
{
	const auto n = p.low_count();
	if (s.size() != p.var_count())
		throw ValidationError("store does not match the program declarations");
	return LowStore(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
}

bool low_equivalent(const Program &p, const Store &a, const Store &b)
{
	return low_part(p, a) == low_part(p, b);
}

void apply(LowStore &store, VarId id, Value val)
{
	if (id == 0 || id > store.size())
		throw ValidationError("variable id " + std::to_string(id) + " is not a low variable");
	store[id - 1] = val;
}

std::optional<ChangeEvent> LowStoreMonitor::observe(const StepEvent &ev)
{
	if (!ev.write)
		return std::nullopt;
	const auto &w = *ev.write;
	if (w.id == 0 || w.id > current_.size())
		return std::nullopt; // high variable
	Value &slot = current_[w.id - 1];
	if (slot == w.new_value)
		return std::nullopt;
	slot = w.new_value;
	return ChangeEvent{++changes_, w.id, w.new_value};
}

Observation observe(std::span<const StepEvent> events, const LowStore &initial)
{
	Observation out;
	out.trace.push_back(initial);
	LowStoreMonitor monitor(initial);
	for (const auto &ev : events) {
		if (auto change = monitor.observe(ev)) {
			out.changes.push_back(*change);
			out.trace.push_back(monitor.current());
		}
	}
	return out;
}

} // namespace odcheck
