#include "odcheck/oracle.hpp"

#include "odcheck/errors.hpp"

#include <functional>

namespace odcheck {

CollapsedTrace stutter_collapse(const LowTrace &t)
{
	if (t.empty())
		throw ValidationError("cannot collapse an empty trace");
	CollapsedTrace out;
	for (const auto &s : t)
		if (out.empty() || out.back() != s)
			out.push_back(s);
	return out;
}

bool stutter_equivalent(const LowTrace &a, const LowTrace &b)
{
	if (!a.empty() && !b.empty() && a.front().size() != b.front().size())
		throw ValidationError("traces have different low-store arity");
	return stutter_collapse(a) == stutter_collapse(b);
}

namespace {

class TraceCollector {
public:
	TraceCollector(const Interpreter &interp, std::size_t bound, std::size_t lows,
		       TraceMultiset &out)
		: interp_(interp), bound_(bound), lows_(lows), out_(out)
	{}

	// `raw` holds the low store after every step taken so far, stutters
	// included.
	void visit(const ExecState &s, LowTrace &raw)
	{
		bool any = false;
		for (ThreadId t = 0; t < s.threads.size(); ++t) {
			if (s.threads[t].terminated())
				continue;
			any = true;
			if (s.steps >= bound_)
				throw BoundExceededError("an execution exceeds the depth bound of " +
							 std::to_string(bound_) + " steps");
			ExecState next = s;
			interp_.step(next, t);
			raw.emplace_back(next.store.begin(),
					 next.store.begin() + static_cast<std::ptrdiff_t>(lows_));
			visit(next, raw);
			raw.pop_back();
		}
		if (!any)
			++out_[stutter_collapse(raw)];
	}

private:
	const Interpreter &interp_;
	std::size_t bound_;
	std::size_t lows_;
	TraceMultiset &out_;
};

void for_each_high(const std::vector<std::pair<VarId, std::vector<Value>>> &doms, std::size_t i,
		   Overrides &acc, const std::function<void(const Overrides &)> &fn)
{
	if (i == doms.size()) {
		fn(acc);
		return;
	}
	for (Value v : doms[i].second) {
		acc[doms[i].first] = v;
		for_each_high(doms, i + 1, acc, fn);
	}
}

} // namespace

TraceMultiset all_low_traces(const Program &p, const Category &cat, std::size_t depth_bound,
			     Granularity g)
{
	validate(p, cat);
	Interpreter interp(p, g);
	const auto lows = p.low_count();

	Overrides base;
	for (std::size_t i = 0; i < lows; ++i)
		base[static_cast<VarId>(i + 1)] = cat.low_init[i];
	std::vector<std::pair<VarId, std::vector<Value>>> doms(cat.high_domains.begin(),
								 cat.high_domains.end());

	TraceMultiset out;
	TraceCollector collector(interp, depth_bound, lows, out);
	for_each_high(doms, 0, base, [&](const Overrides &init) {
		ExecState s = interp.initial_state(init);
		LowTrace raw{LowStore(s.store.begin(), s.store.begin() + static_cast<std::ptrdiff_t>(lows))};
		collector.visit(s, raw);
	});
	return out;
}

OracleResult od_oracle(const Program &p, std::span<const Category> categories,
		       std::size_t depth_bound, Granularity g)
{
	OracleResult out;
	for (const auto &cat : categories) {
		OracleCategory c{cat.name, false, all_low_traces(p, cat, depth_bound, g)};
		c.secure = c.traces.size() == 1;
		out.secure = out.secure && c.secure;
		out.categories.push_back(std::move(c));
	}
	return out;
}

} // namespace odcheck
