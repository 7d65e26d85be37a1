#pragma once

#include "odcheck/oracle.hpp"
#include "odcheck/verifier.hpp"

#include <json.hpp>

namespace odcheck {

using json = nlohmann::json;

/// Run parameters echoed into reports so a witness can be replayed.
struct ReportContext {
	std::string program_path;
	Granularity granularity = Granularity::Stmt;
	std::size_t depth_bound = 10000;
	std::optional<std::size_t> fairness;
};

/// `{"categories":[{"name":..., "low":{"l1":0}, "high_domains":{"h":[0,1]}}]}`.
/// Omitted lows take the declared init; omitted high domains are the
/// singleton of the declared init. Throws ValidationError.
std::vector<Category> categories_from_json(const Program &p, const json &config);

json to_json(const Program &p, const SecurityReport &report, const ReportContext &ctx);
json to_json(const Program &p, const OracleResult &result, const ReportContext &ctx);

json iteration_to_json(const Program &p, const Iteration &it);
/// Throws ValidationError when the iteration names unknown or non-high
/// variables.
Iteration iteration_from_json(const Program &p, const json &j);

/// Category recorded in a verification report (name and low store; high
/// domains are not needed to replay one iteration).
Category category_from_report(const Program &p, const json &entry);

/// "(0, 0)" rendering of one low store.
std::string format_low_store(const LowStore &s);
/// Space separated low stores: "(0, 0) (1, 0)".
std::string format_trace(const LowTrace &t);

} // namespace odcheck
