#include "odcheck/explorer.hpp"

#include "odcheck/errors.hpp"

#include <sstream>

namespace odcheck {

std::string_view to_string(IterationOutcome o)
{
	return o == IterationOutcome::Completed ? "completed" : "depth-exceeded";
}

ExplorationStats &ExplorationStats::operator+=(const ExplorationStats &o)
{
	completed += o.completed;
	depth_exceeded += o.depth_exceeded;
	pruned += o.pruned;
	max_stack = std::max(max_stack, o.max_stack);
	return *this;
}

Category default_category(const Program &p, std::string name)
{
	Category cat;
	cat.name = std::move(name);
	cat.low_init.resize(p.low_count());
	for (const auto &d : p.decls) {
		if (d.label == SecurityLabel::Low)
			cat.low_init[d.id - 1] = d.init;
		else
			cat.high_domains[d.id] = {d.init};
	}
	return cat;
}

void validate(const Program &p, const Category &cat)
{
	const auto lows = p.low_count();
	if (cat.low_init.size() != lows)
		throw ValidationError("category '" + cat.name + "' has " +
				      std::to_string(cat.low_init.size()) + " low values, program declares " +
				      std::to_string(lows));
	if (cat.high_domains.size() != p.var_count() - lows)
		throw ValidationError("category '" + cat.name +
				      "' must give a domain for every high variable");
	for (const auto &[id, dom] : cat.high_domains) {
		const auto *d = p.find(id);
		if (!d || d->label != SecurityLabel::High)
			throw ValidationError("category '" + cat.name + "' gives a domain for id " +
					      std::to_string(id) + ", which is not a high variable");
		if (dom.empty())
			throw ValidationError("category '" + cat.name + "' has an empty domain for '" +
					      d->name + "'");
	}
}

std::vector<HighAssignment> high_assignments(const Category &cat)
{
	std::vector<HighAssignment> out;
	std::vector<std::pair<VarId, const std::vector<Value> *>> doms;
	for (const auto &[id, dom] : cat.high_domains) {
		if (dom.empty())
			return out;
		doms.emplace_back(id, &dom);
	}
	// Odometer with the lowest id as the most significant digit.
	std::vector<std::size_t> digit(doms.size(), 0);
	for (;;) {
		HighAssignment h;
		for (std::size_t i = 0; i < doms.size(); ++i)
			h[doms[i].first] = (*doms[i].second)[digit[i]];
		out.push_back(std::move(h));

		std::size_t i = doms.size();
		while (i > 0) {
			--i;
			if (++digit[i] < doms[i].second->size())
				break;
			digit[i] = 0;
			if (i == 0)
				return out;
		}
		if (doms.empty())
			return out;
	}
}

Overrides overrides_for(const Category &cat, const HighAssignment &highs)
{
	Overrides o(highs.begin(), highs.end());
	for (std::size_t i = 0; i < cat.low_init.size(); ++i)
		o[static_cast<VarId>(i + 1)] = cat.low_init[i];
	return o;
}

namespace {

struct ChoicePoint {
	std::vector<ThreadId> options;
	std::size_t index = 0;
};

std::string describe(const Schedule &sched)
{
	std::ostringstream os;
	os << '[';
	for (std::size_t i = 0; i < sched.size(); ++i)
		os << (i ? "," : "") << sched[i];
	os << ']';
	return os.str();
}

class Dfs {
public:
	Dfs(const Interpreter &interp, const ExploreOptions &opts, IterationVisitor &visitor,
	    ExplorationStats &stats)
		: interp_(interp), opts_(opts), visitor_(visitor), stats_(stats)
	{}

	/// Returns false when the visitor aborted.
	bool run(const Overrides &init, const HighAssignment &highs, std::uint64_t &ordinal)
	{
		stack_.clear();
		for (;;) {
			auto outcome = execute(init);
			stats_.max_stack = std::max(stats_.max_stack, stack_.size());
			if (outcome) {
				++ordinal;
				if (*outcome == IterationOutcome::Completed)
					++stats_.completed;
				else
					++stats_.depth_exceeded;
				visitor_.on_begin(highs, ordinal);
				for (const auto &ev : events_)
					visitor_.on_event(ev);
				it_.highs = highs;
				it_.ordinal = ordinal;
				if (visitor_.on_end(it_, *outcome) == VisitControl::Abort)
					return false;
			} else {
				++stats_.pruned;
			}

			while (!stack_.empty() && stack_.back().index + 1 >= stack_.back().options.size())
				stack_.pop_back();
			if (stack_.empty())
				return true;
			++stack_.back().index;
		}
	}

private:
	// Runs the current choice prefix, then extends it with first choices.
	// Returns nullopt when fairness leaves no admissible thread.
	std::optional<IterationOutcome> execute(const Overrides &init)
	{
		ExecState s = interp_.initial_state(init);
		events_.clear();
		it_.schedule.clear();
		starved_.assign(s.threads.size(), 0);

		for (std::size_t depth = 0;; ++depth) {
			enabled_ = interp_.enabled(s);
			if (enabled_.empty())
				return IterationOutcome::Completed;
			if (depth >= opts_.depth_bound)
				return IterationOutcome::DepthExceeded;

			ThreadId tid;
			if (depth < stack_.size()) {
				const auto &cp = stack_[depth];
				tid = cp.options[cp.index];
			} else {
				auto options = admissible();
				if (options.empty())
					return std::nullopt;
				tid = options.front();
				stack_.push_back(ChoicePoint{std::move(options), 0});
			}

			try {
				events_.push_back(interp_.step(s, tid));
			} catch (const OverflowError &e) {
				it_.schedule.push_back(tid);
				throw OverflowError(std::string(e.what()) + " under schedule " +
						    describe(it_.schedule));
			}
			it_.schedule.push_back(tid);
			for (auto u : enabled_)
				starved_[u] = u == tid ? 0 : starved_[u] + 1;
		}
	}

	std::vector<ThreadId> admissible() const
	{
		if (!opts_.fairness)
			return enabled_;
		const auto k = *opts_.fairness;
		std::vector<ThreadId> out;
		for (auto t : enabled_) {
			bool ok = true;
			for (auto u : enabled_)
				if (u != t && starved_[u] + 1 > k)
					ok = false;
			if (ok)
				out.push_back(t);
		}
		return out;
	}

	const Interpreter &interp_;
	const ExploreOptions &opts_;
	IterationVisitor &visitor_;
	ExplorationStats &stats_;

	std::vector<ChoicePoint> stack_;
	// Scratch buffers reused across iterations.
	std::vector<StepEvent> events_;
	std::vector<ThreadId> enabled_;
	std::vector<std::size_t> starved_;
	Iteration it_;
};

} // namespace

ExplorationStats explore(const Program &p, const Category &cat, const ExploreOptions &opts,
			 IterationVisitor &visitor)
{
	if (opts.depth_bound == 0)
		throw ValidationError("depth bound must be at least 1");
	if (opts.fairness && *opts.fairness == 0)
		throw ValidationError("fairness bound must be at least 1");
	validate(p, cat);
	Interpreter interp(p, opts.granularity);

	ExplorationStats stats;
	Dfs dfs(interp, opts, visitor, stats);
	std::uint64_t ordinal = 0;
	for (const auto &highs : high_assignments(cat))
		if (!dfs.run(overrides_for(cat, highs), highs, ordinal))
			break;
	return stats;
}

RunStatus replay(const Program &p, const Category &cat, const Iteration &it, Granularity g,
		 const EventSink &sink)
{
	validate(p, cat);
	Interpreter interp(p, g);
	for (const auto &[id, v] : it.highs) {
		const auto *d = p.find(id);
		if (!d || d->label != SecurityLabel::High)
			throw ExecutionError("iteration assigns id " + std::to_string(id) +
					     ", which is not a high variable");
	}
	auto outcome = interp.run_schedule(overrides_for(cat, it.highs), it.schedule, sink);
	if (outcome.status == RunStatus::Infeasible)
		throw ExecutionError("schedule " + describe(it.schedule) + " is infeasible at position " +
				     std::to_string(outcome.position));
	if (outcome.status == RunStatus::Overflow)
		throw OverflowError("arithmetic overflow at schedule position " +
				    std::to_string(outcome.position));
	return outcome.status;
}

} // namespace odcheck
