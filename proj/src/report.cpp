#include "odcheck/report.hpp"

#include "odcheck/errors.hpp"

#include <sstream>

namespace odcheck {

namespace {

const VarDecl &named(const Program &p, const std::string &name, SecurityLabel label,
		     std::string_view where)
{
	const auto *d = p.find(name);
	if (!d)
		throw ValidationError(std::string(where) + ": unknown variable '" + name + "'");
	if (d->label != label)
		throw ValidationError(std::string(where) + ": '" + name + "' is not a " +
				      std::string(to_string(label)) + " variable");
	return *d;
}

Value int_value(const json &j, std::string_view where)
{
	if (!j.is_number_integer())
		throw ValidationError(std::string(where) + ": expected an integer");
	return j.get<Value>();
}

json low_store_json(const Program &p, const LowStore &s)
{
	json out = json::object();
	for (std::size_t i = 0; i < s.size(); ++i)
		out[p.decl(static_cast<VarId>(i + 1)).name] = s[i];
	return out;
}

json record_json(const Program &p, const LSRecord &r)
{
	return {{"num", r.num}, {"id", r.id}, {"var", p.decl(r.id).name}, {"val", r.val}};
}

json change_json(const Program &p, const ChangeEvent &c)
{
	return {{"num", c.num}, {"id", c.id}, {"var", p.decl(c.id).name}, {"val", c.val}};
}

json signature_json(const Program &p, const Signature &sig)
{
	json recs = json::array();
	for (const auto &r : sig.records)
		recs.push_back(record_json(p, r));
	return {{"lssc", sig.lssc}, {"records", std::move(recs)}};
}

json stats_json(const ExplorationStats &s)
{
	return {{"completed", s.completed},
		{"depth_exceeded", s.depth_exceeded},
		{"pruned", s.pruned}};
}

json context_json(const ReportContext &ctx)
{
	return {{"program", ctx.program_path},
		{"granularity", std::string(to_string(ctx.granularity))},
		{"depth_bound", ctx.depth_bound},
		{"fairness", ctx.fairness ? json(*ctx.fairness) : json(nullptr)}};
}

json low_vars_json(const Program &p)
{
	json names = json::array();
	for (VarId id = 1; id <= p.low_count(); ++id)
		names.push_back(p.decl(id).name);
	return names;
}

} // namespace

std::vector<Category> categories_from_json(const Program &p, const json &config)
{
	if (!config.is_object() || !config.contains("categories") || !config["categories"].is_array())
		throw ValidationError("category config must be an object with a 'categories' array");

	std::vector<Category> out;
	for (const auto &entry : config["categories"]) {
		if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string())
			throw ValidationError("every category needs a string 'name'");
		Category cat = default_category(p, entry["name"].get<std::string>());
		const std::string where = "category '" + cat.name + "'";

		if (entry.contains("low")) {
			if (!entry["low"].is_object())
				throw ValidationError(where + ": 'low' must be an object");
			for (const auto &[name, v] : entry["low"].items()) {
				const auto &d = named(p, name, SecurityLabel::Low, where);
				cat.low_init[d.id - 1] = int_value(v, where);
			}
		}
		if (entry.contains("high_domains")) {
			if (!entry["high_domains"].is_object())
				throw ValidationError(where + ": 'high_domains' must be an object");
			for (const auto &[name, dom] : entry["high_domains"].items()) {
				const auto &d = named(p, name, SecurityLabel::High, where);
				if (!dom.is_array() || dom.empty())
					throw ValidationError(where + ": domain of '" + name +
							      "' must be a non-empty array");
				std::vector<Value> values;
				for (const auto &v : dom)
					values.push_back(int_value(v, where));
				cat.high_domains[d.id] = std::move(values);
			}
		}
		out.push_back(std::move(cat));
	}
	if (out.empty())
		throw ValidationError("category config lists no categories");
	return out;
}

json iteration_to_json(const Program &p, const Iteration &it)
{
	json highs = json::object();
	for (const auto &[id, v] : it.highs)
		highs[p.decl(id).name] = v;
	return {{"ordinal", it.ordinal}, {"highs", std::move(highs)}, {"schedule", it.schedule}};
}

Iteration iteration_from_json(const Program &p, const json &j)
{
	if (!j.is_object() || !j.contains("schedule") || !j["schedule"].is_array())
		throw ValidationError("iteration must carry a 'schedule' array");
	Iteration it;
	if (j.contains("ordinal") && j["ordinal"].is_number_unsigned())
		it.ordinal = j["ordinal"].get<std::uint64_t>();
	if (j.contains("highs")) {
		if (!j["highs"].is_object())
			throw ValidationError("iteration 'highs' must be an object");
		for (const auto &[name, v] : j["highs"].items())
			it.highs[named(p, name, SecurityLabel::High, "witness").id] = int_value(v, "witness");
	}
	for (const auto &t : j["schedule"]) {
		if (!t.is_number_unsigned())
			throw ValidationError("schedule entries must be thread indices");
		it.schedule.push_back(t.get<ThreadId>());
	}
	return it;
}

Category category_from_report(const Program &p, const json &entry)
{
	Category cat = default_category(p, entry.value("name", std::string("default")));
	if (entry.contains("low")) {
		for (const auto &[name, v] : entry["low"].items()) {
			const auto &d = named(p, name, SecurityLabel::Low, "report");
			cat.low_init[d.id - 1] = int_value(v, "report");
		}
	}
	return cat;
}

json to_json(const Program &p, const SecurityReport &report, const ReportContext &ctx)
{
	json cats = json::array();
	for (const auto &c : report.categories) {
		json e = {{"name", c.name}, {"low", low_store_json(p, c.low_init)}};
		std::visit(
			[&](const auto &r) {
				using T = std::decay_t<decltype(r)>;
				if constexpr (std::is_same_v<T, Secure>) {
					e["result"] = "secure";
					e["iterations"] = r.iterations;
					e["signature"] = signature_json(p, r.signature);
					e["reference"] = iteration_to_json(p, r.reference);
				} else if constexpr (std::is_same_v<T, SecureUpToBound>) {
					e["result"] = "secure-up-to-bound";
					e["iterations"] = r.iterations;
					e["abandoned"] = r.abandoned;
					if (r.signature)
						e["signature"] = signature_json(p, *r.signature);
					if (r.reference)
						e["reference"] = iteration_to_json(p, *r.reference);
				} else {
					const auto &w = r.witness;
					const auto &d = w.detail;
					e["result"] = "violation";
					e["iterations"] = r.iterations;
					e["signature"] = signature_json(p, r.signature);
					e["reference"] = iteration_to_json(p, w.reference);
					json wj = {{"reference", iteration_to_json(p, w.reference)},
						   {"violating", iteration_to_json(p, w.violating)},
						   {"kind", std::string(to_string(d.kind))}};
					wj["position"] = d.position ? json(*d.position) : json("end");
					wj["expected"] = d.expected ? record_json(p, *d.expected) : json(nullptr);
					wj["observed"] = d.observed ? change_json(p, *d.observed)
								    : json{{"count", d.observed_count}};
					e["witness"] = std::move(wj);
				}
			},
			c.result);
		e["stats"] = stats_json(c.stats);
		cats.push_back(std::move(e));
	}
	return {{"verdict", std::string(to_string(report.verdict))},
		{"run", context_json(ctx)},
		{"low_vars", low_vars_json(p)},
		{"categories", std::move(cats)},
		{"stats", stats_json(report.stats)}};
}

json to_json(const Program &p, const OracleResult &result, const ReportContext &ctx)
{
	json cats = json::array();
	for (const auto &c : result.categories) {
		json traces = json::array();
		std::uint64_t executions = 0;
		for (const auto &[trace, count] : c.traces) {
			traces.push_back({{"trace", trace}, {"count", count}});
			executions += count;
		}
		cats.push_back({{"name", c.name},
				{"secure", c.secure},
				{"executions", executions},
				{"traces", std::move(traces)}});
	}
	return {{"verdict", result.secure ? "SECURE" : "INSECURE"},
		{"run", context_json(ctx)},
		{"low_vars", low_vars_json(p)},
		{"categories", std::move(cats)}};
}

std::string format_low_store(const LowStore &s)
{
	std::ostringstream os;
	os << '(';
	for (std::size_t i = 0; i < s.size(); ++i)
		os << (i ? ", " : "") << s[i];
	os << ')';
	return os.str();
}

std::string format_trace(const LowTrace &t)
{
	std::string out;
	for (std::size_t i = 0; i < t.size(); ++i) {
		if (i)
			out += ' ';
		out += format_low_store(t[i]);
	}
	return out;
}

} // namespace odcheck
