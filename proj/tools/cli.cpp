#include "cli.hpp"

#include "odcheck/errors.hpp"
#include "odcheck/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace odcheck::cli {

namespace {

struct RunConfig {
	std::string program_path;
	std::string categories_path;
	std::size_t depth_bound = 10000;
	std::string granularity = "stmt";
	std::optional<std::size_t> fairness;
	std::string sig_dir;
	std::string report_path;
	// replay only
	std::string category;
	std::string witness = "violating";
};

struct UsageError : Error {
	using Error::Error;
};

std::string read_file(const std::string &path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw UsageError("cannot read '" + path + "'");
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

Program load_program(const std::string &path)
{
	auto text = read_file(path);
	try {
		return parse(text);
	} catch (const ParseError &e) {
		throw UsageError(path + ":" + std::to_string(e.line()) + ":" +
				 std::to_string(e.column()) + ": " + e.what());
	}
}

json load_json(const std::string &path)
{
	try {
		return json::parse(read_file(path));
	} catch (const json::parse_error &e) {
		throw UsageError(path + ": invalid JSON: " + e.what());
	}
}

std::vector<Category> load_categories(const Program &p, const RunConfig &cfg)
{
	if (cfg.categories_path.empty())
		return {default_category(p)};
	return categories_from_json(p, load_json(cfg.categories_path));
}

Granularity parse_granularity(const std::string &s)
{
	auto g = granularity_from_string(s);
	if (!g)
		throw UsageError("unknown granularity '" + s + "' (expected stmt or branch-atomic)");
	return *g;
}

ReportContext context_of(const RunConfig &cfg)
{
	return {cfg.program_path, parse_granularity(cfg.granularity), cfg.depth_bound, cfg.fairness};
}

std::string timestamp()
{
	auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
	std::tm tm{};
	gmtime_r(&now, &tm);
	std::ostringstream os;
	os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
	return os.str();
}

void write_report(const std::string &path, json j)
{
	if (path.empty())
		return;
	j["timestamp"] = timestamp();
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out)
		throw UsageError("cannot write report '" + path + "'");
	out << j.dump(2) << '\n';
}

std::string describe(const Program &p, const Iteration &it)
{
	std::ostringstream os;
	os << "iteration " << it.ordinal << ": highs {";
	bool first = true;
	for (const auto &[id, v] : it.highs) {
		os << (first ? "" : ", ") << p.decl(id).name << '=' << v;
		first = false;
	}
	os << "} schedule [";
	for (std::size_t i = 0; i < it.schedule.size(); ++i)
		os << (i ? "," : "") << it.schedule[i];
	os << ']';
	return os.str();
}

int cmd_verify(const RunConfig &cfg, std::ostream &out, std::ostream &err)
{
	auto program = load_program(cfg.program_path);
	auto categories = load_categories(program, cfg);
	auto ctx = context_of(cfg);

	VerifyOptions opts;
	opts.explore = {cfg.depth_bound, ctx.granularity, cfg.fairness};
	if (!cfg.sig_dir.empty())
		opts.signature_dir = cfg.sig_dir;

	auto report = csmc_verify(program, categories, opts);

	for (const auto &c : report.categories) {
		std::visit(
			[&](const auto &r) {
				using T = std::decay_t<decltype(r)>;
				out << "category " << c.name << ": ";
				if constexpr (std::is_same_v<T, Secure>) {
					out << "secure (" << r.iterations << " iterations, pattern "
					    << format_trace(reconstruct_pattern(r.signature, c.low_init))
					    << ")\n";
				} else if constexpr (std::is_same_v<T, SecureUpToBound>) {
					out << "secure up to bound (" << r.iterations << " iterations, "
					    << r.abandoned << " abandoned)\n";
					err << "warning: category " << c.name << ": " << r.abandoned
					    << " executions exceeded the depth bound of " << cfg.depth_bound
					    << " steps; raise --depth-bound for full coverage\n";
				} else {
					const auto &d = r.witness.detail;
					out << "violation (" << to_string(d.kind) << " at ";
					if (d.position)
						out << "change " << *d.position;
					else
						out << "end of trace";
					out << ")\n  reference " << describe(program, r.witness.reference)
					    << "\n  violating " << describe(program, r.witness.violating) << '\n';
				}
			},
			c.result);
	}
	out << "verdict: " << to_string(report.verdict) << '\n';
	write_report(cfg.report_path, to_json(program, report, ctx));

	switch (report.verdict) {
	case Verdict::Secure:
		return ExitSecure;
	case Verdict::Insecure:
		return ExitInsecure;
	case Verdict::SecureUpToBound:
		return ExitUpToBound;
	}
	return ExitError;
}

int cmd_oracle(const RunConfig &cfg, std::ostream &out)
{
	auto program = load_program(cfg.program_path);
	auto categories = load_categories(program, cfg);
	auto ctx = context_of(cfg);

	auto result = od_oracle(program, categories, cfg.depth_bound, ctx.granularity);
	for (const auto &c : result.categories) {
		std::uint64_t executions = 0;
		for (const auto &[t, n] : c.traces)
			executions += n;
		out << "category " << c.name << ": " << executions << " executions, " << c.traces.size()
		    << " distinct collapsed traces\n";
		for (const auto &[t, n] : c.traces)
			out << "  " << n << " x " << format_trace(t) << '\n';
	}
	out << "verdict: " << (result.secure ? "SECURE" : "INSECURE") << '\n';
	write_report(cfg.report_path, to_json(program, result, ctx));
	return result.secure ? ExitSecure : ExitInsecure;
}

int cmd_replay(const RunConfig &cfg, bool granularity_given, std::ostream &out)
{
	auto program = load_program(cfg.program_path);
	if (cfg.report_path.empty())
		throw UsageError("replay needs --report");
	auto report = load_json(cfg.report_path);
	if (!report.contains("categories") || !report["categories"].is_array())
		throw UsageError(cfg.report_path + ": not a verification report");

	const json *entry = nullptr;
	for (const auto &c : report["categories"]) {
		if (!cfg.category.empty() ? c.value("name", "") == cfg.category
					  : (cfg.witness == "violating" ? c.contains("witness")
									: c.contains("reference"))) {
			entry = &c;
			break;
		}
	}
	if (!entry)
		throw UsageError(cfg.report_path + ": no matching category in report");

	const json *it_json = nullptr;
	if (cfg.witness == "violating") {
		if (!entry->contains("witness"))
			throw UsageError(cfg.report_path + ": category has no violating witness");
		it_json = &(*entry)["witness"]["violating"];
	} else {
		if (!entry->contains("reference"))
			throw UsageError(cfg.report_path + ": category has no reference iteration");
		it_json = &(*entry)["reference"];
	}

	Granularity g = parse_granularity(cfg.granularity);
	if (!granularity_given && report.contains("run") && report["run"].contains("granularity"))
		g = parse_granularity(report["run"]["granularity"].get<std::string>());

	auto cat = category_from_report(program, *entry);
	auto it = iteration_from_json(program, *it_json);

	LowStoreMonitor monitor(cat.low_init);
	LowTrace trace{cat.low_init};
	std::size_t step = 0;
	out << "initial low store " << format_low_store(cat.low_init) << '\n';
	auto status = replay(program, cat, it, g, [&](const StepEvent &ev) {
		out << "step " << ++step << ": thread " << ev.tid;
		if (ev.write)
			out << " writes " << program.decl(ev.write->id).name << " := " << ev.write->new_value;
		if (monitor.observe(ev)) {
			trace.push_back(monitor.current());
			out << ", low store " << format_low_store(monitor.current());
		}
		out << '\n';
	});
	if (status != RunStatus::Completed)
		out << "(execution stops at the depth bound)\n";
	out << "low store trace: " << format_trace(trace) << '\n';
	return 0;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
	CLI::App app{"Observational-determinism checker for small concurrent programs"};
	app.require_subcommand(1);
	RunConfig cfg;

	auto add_common = [&cfg](CLI::App *sub) {
		sub->add_option("--program", cfg.program_path, "Program source (.imp)")->required();
		sub->add_option("--categories", cfg.categories_path, "Category config (JSON)");
		sub->add_option("--depth-bound", cfg.depth_bound, "Maximum steps per execution")
			->check(CLI::PositiveNumber);
		sub->add_option("--granularity", cfg.granularity, "stmt | branch-atomic");
	};

	auto *verify = app.add_subcommand("verify", "Check observational determinism");
	add_common(verify);
	verify->add_option("--fair", cfg.fairness, "Starvation bound K for fairness pruning")
		->check(CLI::PositiveNumber);
	verify->add_option("--sig-dir", cfg.sig_dir, "Directory for signature files");
	verify->add_option("--report", cfg.report_path, "Write the JSON report here");

	auto *oracle = app.add_subcommand("oracle", "Brute-force trace census");
	add_common(oracle);
	oracle->add_option("--report", cfg.report_path, "Write the JSON census here");

	auto *replay_cmd = app.add_subcommand("replay", "Replay an iteration from a report");
	replay_cmd->add_option("--program", cfg.program_path, "Program source (.imp)")->required();
	replay_cmd->add_option("--report", cfg.report_path, "Verification report (JSON)")->required();
	auto *gran_opt = replay_cmd->add_option("--granularity", cfg.granularity,
						"Overrides the report's granularity");
	replay_cmd->add_option("--category", cfg.category, "Category name");
	replay_cmd->add_option("--witness", cfg.witness, "violating | reference")
		->check(CLI::IsMember({"violating", "reference"}));

	std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
	try {
		app.parse(reversed);
	} catch (const CLI::CallForHelp &) {
		out << app.help();
		return ExitSecure;
	} catch (const CLI::ParseError &e) {
		err << "error: " << e.what() << '\n';
		return ExitError;
	}

	try {
		if (verify->parsed())
			return cmd_verify(cfg, out, err);
		if (oracle->parsed())
			return cmd_oracle(cfg, out);
		return cmd_replay(cfg, gran_opt->count() > 0, out);
	} catch (const std::exception &e) {
		err << "error: " << e.what() << '\n';
		return ExitError;
	}
}

} // namespace odcheck::cli
