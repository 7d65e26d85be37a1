#pragma once

#include "odcheck/explorer.hpp"
#include "odcheck/lowstore.hpp"
#include "odcheck/signature_store.hpp"

#include <filesystem>
#include <functional>
#include <span>
#include <variant>

namespace odcheck {

/// Records one change event per key into `store` and freezes it.
Signature build_signature(SignatureStore &store, std::span<const ChangeEvent> changes);

enum class ViolationKind {
	Mismatch,      // k-th change differs from the k-th record
	ExcessChange,  // more changes than the signature holds
	CountMismatch, // iteration ended with fewer changes
};

std::string_view to_string(ViolationKind k);

struct ViolationDetail {
	ViolationKind kind = ViolationKind::Mismatch;
	/// Change ordinal where the traces diverged; nullopt means end of trace.
	std::optional<std::uint64_t> position;
	std::optional<LSRecord> expected;
	std::optional<ChangeEvent> observed;
	std::uint64_t observed_count = 0; // changes accepted before the verdict

	friend bool operator==(const ViolationDetail &, const ViolationDetail &) = default;
};

/// Streaming form of the per-iteration check against a frozen signature.
/// Performs exactly one record fetch per consumed change event.
class IterationChecker {
public:
	explicit IterationChecker(const SignatureStore &sig);

	/// Feeds one change. Returns a violation as soon as one is certain;
	/// afterwards the checker ignores further input.
	std::optional<ViolationDetail> on_change(const ChangeEvent &ev);
	/// Compares the accepted change count with the signature's. Makes no
	/// lookup.
	std::optional<ViolationDetail> finish();

	void reset();

	/// Signature lookups made since construction or the last reset.
	std::uint64_t fetches() const { return sig_->lookups() - base_; }
	std::uint64_t consumed() const { return consumed_; }
	bool failed() const { return failed_; }

private:
	const SignatureStore *sig_;
	std::uint64_t lssc_ = 0;
	std::uint64_t base_ = 0;
	std::uint64_t consumed_ = 0;
	bool failed_ = false;
};

struct CheckResult {
	std::optional<ViolationDetail> violation; // nullopt = conforms
	std::uint64_t fetches = 0;
	std::uint64_t consumed = 0;
};

CheckResult check_iteration(const SignatureStore &sig, std::span<const ChangeEvent> changes);

/// Low-store words A_0..A_n of the pattern A_0+ A_1+ ... A_n+ encoded by the
/// signature. Throws StoreError if a record does not change the store.
LowTrace reconstruct_pattern(const Signature &sig, const LowStore &initial);

struct ViolationWitness {
	std::string category;
	Iteration reference; // the signature's source iteration
	Iteration violating;
	ViolationDetail detail;
};

struct Secure {
	Signature signature;
	Iteration reference;
	std::uint64_t iterations = 0;
};

struct Violation {
	Signature signature; // derived from the reference iteration
	ViolationWitness witness;
	std::uint64_t iterations = 0;
};

struct SecureUpToBound {
	std::optional<Signature> signature; // absent if nothing completed
	std::optional<Iteration> reference;
	std::uint64_t iterations = 0;
	std::uint64_t abandoned = 0;
};

struct CategoryResult {
	std::string name;
	LowStore low_init;
	std::variant<Secure, Violation, SecureUpToBound> result;
	ExplorationStats stats;
};

enum class Verdict { Secure, Insecure, SecureUpToBound };

std::string_view to_string(Verdict v);

struct SecurityReport {
	std::vector<CategoryResult> categories; // in order checked
	Verdict verdict = Verdict::Secure;
	ExplorationStats stats;
};

struct VerifyOptions {
	ExploreOptions explore;
	/// When set, each category's signature is persisted as
	/// `<dir>/<category>.odsig`.
	std::optional<std::filesystem::path> signature_dir;
	/// Called after every checked iteration (instrumentation hook).
	std::function<void(const CheckResult &)> on_check;
};

/// Explores one category: the first completed iteration defines the
/// signature, every later completed iteration is checked against it.
/// Exploration stops at the first violation.
CategoryResult smc_category(const Program &p, const Category &cat, const VerifyOptions &opts);

/// Runs smc_category over each category, stopping at the first violation.
/// Throws ValidationError for an empty or duplicated category list.
SecurityReport csmc_verify(const Program &p, std::span<const Category> categories,
			   const VerifyOptions &opts);

} // namespace odcheck
