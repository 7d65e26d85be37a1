#include "odcheck/verifier.hpp"

#include "odcheck/errors.hpp"

#include <set>

namespace odcheck {

std::string_view to_string(ViolationKind k)
{
	switch (k) {
	case ViolationKind::Mismatch:
		return "mismatch";
	case ViolationKind::ExcessChange:
		return "excess-change";
	case ViolationKind::CountMismatch:
		return "count-mismatch";
	}
	return "?";
}

std::string_view to_string(Verdict v)
{
	switch (v) {
	case Verdict::Secure:
		return "SECURE";
	case Verdict::Insecure:
		return "INSECURE";
	case Verdict::SecureUpToBound:
		return "SECURE_UP_TO_BOUND";
	}
	return "?";
}

Signature build_signature(SignatureStore &store, std::span<const ChangeEvent> changes)
{
	std::uint64_t lssc = 0;
	for (const auto &ev : changes) {
		++lssc;
		store.put_record(LSRecord{lssc, ev.id, ev.val});
	}
	store.set_count(lssc);
	return store.signature();
}

IterationChecker::IterationChecker(const SignatureStore &sig)
	: sig_(&sig), base_(sig.lookups())
{
	if (!sig.frozen())
		throw StoreError("cannot check against an incomplete signature");
}

void IterationChecker::reset()
{
	lssc_ = 0;
	base_ = sig_->lookups();
	consumed_ = 0;
	failed_ = false;
}

std::optional<ViolationDetail> IterationChecker::on_change(const ChangeEvent &ev)
{
	if (failed_)
		return std::nullopt;
	++consumed_;
	auto expected = sig_->get_record(lssc_ + 1);
	if (!expected) {
		failed_ = true;
		return ViolationDetail{ViolationKind::ExcessChange, lssc_ + 1, std::nullopt, ev, lssc_};
	}
	if (expected->id != ev.id || expected->val != ev.val) {
		failed_ = true;
		return ViolationDetail{ViolationKind::Mismatch, lssc_ + 1, expected, ev, lssc_};
	}
	++lssc_;
	return std::nullopt;
}

std::optional<ViolationDetail> IterationChecker::finish()
{
	if (failed_)
		return std::nullopt;
	if (lssc_ != *sig_->get_count()) {
		failed_ = true;
		return ViolationDetail{ViolationKind::CountMismatch, std::nullopt, std::nullopt,
				       std::nullopt, lssc_};
	}
	return std::nullopt;
}

CheckResult check_iteration(const SignatureStore &sig, std::span<const ChangeEvent> changes)
{
	IterationChecker checker(sig);
	CheckResult out;
	for (const auto &ev : changes) {
		out.violation = checker.on_change(ev);
		if (out.violation)
			break;
	}
	if (!out.violation)
		out.violation = checker.finish();
	out.fetches = checker.fetches();
	out.consumed = checker.consumed();
	return out;
}

LowTrace reconstruct_pattern(const Signature &sig, const LowStore &initial)
{
	LowTrace words{initial};
	LowStore cur = initial;
	for (const auto &r : sig.records) {
		if (r.id == 0 || r.id > cur.size())
			throw StoreError("signature record " + std::to_string(r.num) +
					 " names a non-low variable id " + std::to_string(r.id));
		if (cur[r.id - 1] == r.val)
			throw StoreError("signature record " + std::to_string(r.num) +
					 " does not change the low store");
		cur[r.id - 1] = r.val;
		words.push_back(cur);
	}
	return words;
}

namespace {

bool valid_category_filename(const std::string &name)
{
	if (name.empty() || name == "." || name == "..")
		return false;
	for (char c : name)
		if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
			return false;
	return true;
}

SignatureStore open_store(const Category &cat, const VerifyOptions &opts)
{
	if (!opts.signature_dir)
		return SignatureStore::in_memory(cat.name);
	if (!valid_category_filename(cat.name))
		throw ValidationError("category name '" + cat.name +
				      "' cannot be used as a signature file name");
	auto path = *opts.signature_dir / (cat.name + ".odsig");
	std::error_code ec;
	std::filesystem::create_directories(*opts.signature_dir, ec);
	// Each run derives its own signature; a stale file would be loaded frozen.
	std::filesystem::remove(path, ec);
	return SignatureStore::open(path, cat.name);
}

class SmcVisitor : public IterationVisitor {
public:
	SmcVisitor(const Category &cat, SignatureStore &store, const VerifyOptions &opts)
		: cat_(cat), store_(store), opts_(opts), monitor_(cat.low_init)
	{}

	void on_begin(const HighAssignment &, std::uint64_t) override
	{
		monitor_ = LowStoreMonitor(cat_.low_init);
		pending_.clear();
		violation_.reset();
		if (checker_)
			checker_->reset();
	}

	void on_event(const StepEvent &ev) override
	{
		auto change = monitor_.observe(ev);
		if (!change)
			return;
		if (!checker_) {
			pending_.push_back(*change);
		} else if (!violation_) {
			violation_ = checker_->on_change(*change);
		}
	}

	VisitControl on_end(const Iteration &it, IterationOutcome outcome) override
	{
		if (outcome == IterationOutcome::DepthExceeded) {
			++abandoned_;
			return VisitControl::Continue;
		}
		++checked_;
		if (!checker_) {
			signature_ = build_signature(store_, pending_);
			reference_ = it;
			checker_.emplace(store_);
			return VisitControl::Continue;
		}
		if (!violation_)
			violation_ = checker_->finish();
		if (opts_.on_check)
			opts_.on_check(CheckResult{violation_, checker_->fetches(), checker_->consumed()});
		if (violation_) {
			witness_ = ViolationWitness{cat_.name, *reference_, it, *violation_};
			return VisitControl::Abort;
		}
		return VisitControl::Continue;
	}

	const Category &cat_;
	SignatureStore &store_;
	const VerifyOptions &opts_;
	LowStoreMonitor monitor_;
	std::vector<ChangeEvent> pending_;
	std::optional<IterationChecker> checker_;
	std::optional<ViolationDetail> violation_;

	std::optional<Signature> signature_;
	std::optional<Iteration> reference_;
	std::optional<ViolationWitness> witness_;
	std::uint64_t checked_ = 0;
	std::uint64_t abandoned_ = 0;
};

} // namespace

CategoryResult smc_category(const Program &p, const Category &cat, const VerifyOptions &opts)
{
	auto store = open_store(cat, opts);
	SmcVisitor visitor(cat, store, opts);
	CategoryResult out;
	out.name = cat.name;
	out.low_init = cat.low_init;
	out.stats = explore(p, cat, opts.explore, visitor);

	if (visitor.witness_) {
		out.result = Violation{*visitor.signature_, *visitor.witness_, visitor.checked_};
	} else if (visitor.abandoned_ > 0) {
		out.result = SecureUpToBound{visitor.signature_, visitor.reference_, visitor.checked_,
					     visitor.abandoned_};
	} else if (visitor.signature_) {
		out.result = Secure{*visitor.signature_, *visitor.reference_, visitor.checked_};
	} else {
		throw Error("category '" + cat.name + "': no execution completed within the depth bound");
	}
	return out;
}

SecurityReport csmc_verify(const Program &p, std::span<const Category> categories,
			   const VerifyOptions &opts)
{
	if (categories.empty())
		throw ValidationError("at least one category is required");
	std::set<std::string> names;
	std::set<LowStore> lows;
	for (const auto &c : categories) {
		if (!names.insert(c.name).second)
			throw ValidationError("duplicate category name '" + c.name + "'");
		if (!lows.insert(c.low_init).second)
			throw ValidationError("category '" + c.name +
					      "' repeats the low store of an earlier category; merge them");
	}

	SecurityReport report;
	for (const auto &cat : categories) {
		auto r = smc_category(p, cat, opts);
		report.stats += r.stats;
		bool violated = std::holds_alternative<Violation>(r.result);
		if (violated)
			report.verdict = Verdict::Insecure;
		else if (std::holds_alternative<SecureUpToBound>(r.result))
			report.verdict = Verdict::SecureUpToBound;
		report.categories.push_back(std::move(r));
		if (violated)
			break;
	}
	return report;
}

} // namespace odcheck
