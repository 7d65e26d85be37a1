#include "odcheck/signature_store.hpp"

#include "odcheck/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace odcheck {

std::string encode(const Signature &sig)
{
	std::ostringstream os;
	os << "ODSIG 1\n";
	os << "category " << sig.category << '\n';
	os << "lssc " << sig.lssc << '\n';
	for (const auto &r : sig.records)
		os << "rec " << r.num << ' ' << r.id << ' ' << r.val << '\n';
	return os.str();
}

namespace {

class LineReader {
public:
	explicit LineReader(std::string_view text) : text_(text) {}

	std::string_view line()
	{
		auto nl = text_.find('\n', pos_);
		if (nl == std::string_view::npos)
			fail(pos_ == text_.size() ? "unexpected end of file" : "unterminated line");
		auto out = text_.substr(pos_, nl - pos_);
		pos_ = nl + 1;
		++lineno_;
		return out;
	}

	bool at_end() const { return pos_ == text_.size(); }

	[[noreturn]] void fail(const std::string &msg) const
	{
		throw StoreError("corrupt signature (line " + std::to_string(lineno_ + 1) + "): " + msg);
	}

private:
	std::string_view text_;
	std::size_t pos_ = 0;
	std::size_t lineno_ = 0;
};

template <typename T>
T number(LineReader &r, std::string_view &rest)
{
	auto sp = rest.find(' ');
	auto tok = rest.substr(0, sp);
	rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
	T v{};
	auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
	if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
		r.fail("malformed integer '" + std::string(tok) + "'");
	return v;
}

std::string_view field(LineReader &r, std::string_view line, std::string_view key)
{
	if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
	    line[key.size()] != ' ')
		r.fail("expected '" + std::string(key) + "'");
	return line.substr(key.size() + 1);
}

} // namespace

Signature decode(std::string_view text)
{
	LineReader r(text);
	if (r.line() != "ODSIG 1")
		r.fail("bad header");

	Signature sig;
	sig.category = std::string(field(r, r.line(), "category"));
	if (sig.category.empty())
		r.fail("empty category name");

	auto rest = field(r, r.line(), "lssc");
	sig.lssc = number<std::uint64_t>(r, rest);
	if (!rest.empty())
		r.fail("trailing data after lssc");

	for (std::uint64_t k = 1; k <= sig.lssc; ++k) {
		auto rec = field(r, r.line(), "rec");
		LSRecord lr;
		lr.num = number<std::uint64_t>(r, rec);
		lr.id = number<VarId>(r, rec);
		lr.val = number<Value>(r, rec);
		if (!rec.empty())
			r.fail("trailing data after record");
		if (lr.num != k)
			r.fail("record key " + std::to_string(lr.num) + ", expected " + std::to_string(k));
		if (lr.id == 0)
			r.fail("record with variable id 0");
		sig.records.push_back(lr);
	}
	if (!r.at_end())
		r.fail("data after the last record");
	return sig;
}

SignatureStore SignatureStore::in_memory(std::string category)
{
	return SignatureStore(std::move(category), std::nullopt);
}

SignatureStore SignatureStore::open(const std::filesystem::path &path, std::string category)
{
	SignatureStore store(std::move(category), path);
	std::error_code ec;
	if (!std::filesystem::exists(path, ec)) {
		if (ec)
			throw StoreError("cannot access '" + path.string() + "': " + ec.message());
		return store;
	}
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw StoreError("cannot read '" + path.string() + "'");
	std::ostringstream buf;
	buf << in.rdbuf();
	if (in.bad())
		throw StoreError("cannot read '" + path.string() + "'");

	Signature sig;
	try {
		sig = decode(buf.str());
	} catch (const StoreError &e) {
		throw StoreError(path.string() + ": " + e.what());
	}
	if (sig.category != store.category_)
		throw StoreError(path.string() + ": holds category '" + sig.category +
				 "', expected '" + store.category_ + "'");
	store.records_ = std::move(sig.records);
	store.count_ = sig.lssc;
	return store;
}

void SignatureStore::put_record(const LSRecord &r)
{
	if (frozen())
		throw StoreError("signature for '" + category_ + "' is frozen");
	if (r.num >= 1 && r.num <= records_.size())
		throw StoreError("duplicate record key " + std::to_string(r.num));
	if (r.num != records_.size() + 1)
		throw StoreError("non-dense record key " + std::to_string(r.num) + ", expected " +
				 std::to_string(records_.size() + 1));
	records_.push_back(r);
}

std::optional<LSRecord> SignatureStore::get_record(std::uint64_t num) const
{
	++lookups_;
	if (num == 0 || num > records_.size())
		return std::nullopt;
	return records_[num - 1];
}

void SignatureStore::set_count(std::uint64_t lssc)
{
	if (frozen())
		throw StoreError("change count for '" + category_ + "' already set");
	if (lssc != records_.size())
		throw StoreError("change count " + std::to_string(lssc) + " does not match " +
				 std::to_string(records_.size()) + " stored records");
	count_ = lssc;
	save();
}

Signature SignatureStore::signature() const
{
	if (!frozen())
		throw StoreError("signature for '" + category_ + "' is not complete");
	return Signature{category_, records_, *count_};
}

void SignatureStore::save() const
{
	if (!path_)
		return;
	auto text = encode(signature());
	std::ofstream out(*path_, std::ios::binary | std::ios::trunc);
	if (!out)
		throw StoreError("cannot write '" + path_->string() + "'");
	out << text;
	out.flush();
	if (!out)
		throw StoreError("cannot write '" + path_->string() + "'");
}

} // namespace odcheck
