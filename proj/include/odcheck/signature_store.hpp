#pragma once

#include "odcheck/ast.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace odcheck {

/// One recorded low-store change: the num-th change set low variable id to val.
struct LSRecord {
	std::uint64_t num = 0;
	VarId id = 0;
	Value val = 0;

	friend bool operator==(const LSRecord &, const LSRecord &) = default;
};

/// Change pattern of a category's first completed iteration. records[k - 1]
/// has num == k and lssc == records.size() once frozen.
struct Signature {
	std::string category;
	std::vector<LSRecord> records;
	std::uint64_t lssc = 0;

	friend bool operator==(const Signature &, const Signature &) = default;
};

/// Serializes to the line-oriented ODSIG text format:
///
///     ODSIG 1
///     category <name>
///     lssc <N>
///     rec <num> <id> <val>      (N lines, num = 1..N)
///
/// Every line ends in '\n'.
std::string encode(const Signature &sig);

/// Inverse of encode. Throws StoreError on any deviation from the format,
/// including a missing final newline.
Signature decode(std::string_view text);

/// Keyed record store for one category's signature, optionally backed by a
/// file. Records must be added densely (1, 2, ...); set_count freezes the
/// store and, for file-backed stores, writes it out.
class SignatureStore {
public:
	/// Store that never touches the disk.
	static SignatureStore in_memory(std::string category);

	/// Loads `path` if it exists (it must hold a valid signature for
	/// `category`), otherwise starts empty. Throws StoreError.
	static SignatureStore open(const std::filesystem::path &path, std::string category);

	void put_record(const LSRecord &r);
	/// Lookup by key; nullopt once `num` exceeds the stored records.
	std::optional<LSRecord> get_record(std::uint64_t num) const;
	/// Number of get_record calls so far.
	std::uint64_t lookups() const { return lookups_; }

	/// Throws StoreError when already set or when `lssc` differs from the
	/// number of stored records.
	void set_count(std::uint64_t lssc);
	std::optional<std::uint64_t> get_count() const { return count_; }

	bool frozen() const { return count_.has_value(); }
	std::size_t size() const { return records_.size(); }
	const std::string &category() const { return category_; }
	const std::optional<std::filesystem::path> &path() const { return path_; }

	/// Writes the frozen signature to the backing file, if any.
	void save() const;

	/// Snapshot of the frozen signature. Throws StoreError when not frozen.
	Signature signature() const;

private:
	SignatureStore(std::string category, std::optional<std::filesystem::path> path)
		: category_(std::move(category)), path_(std::move(path))
	{}

	std::string category_;
	std::optional<std::filesystem::path> path_;
	std::vector<LSRecord> records_;
	std::optional<std::uint64_t> count_;
	mutable std::uint64_t lookups_ = 0;
};

} // namespace odcheck
