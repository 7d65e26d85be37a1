#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odcheck {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Malformed program text. Line and column are 1-based.
class ParseError : public Error {
public:
	ParseError(std::size_t line, std::size_t column, const std::string &msg)
		: Error(msg), line_(line), column_(column)
	{}

	std::size_t line() const { return line_; }
	std::size_t column() const { return column_; }

private:
	std::size_t line_;
	std::size_t column_;
};

/// A program or category that breaks a structural invariant.
class ValidationError : public Error {
public:
	using Error::Error;
};

/// Runtime failure while interpreting a program (disabled thread, overflow).
class ExecutionError : public Error {
public:
	using Error::Error;
};

class OverflowError : public ExecutionError {
public:
	using ExecutionError::ExecutionError;
};

/// Signature file cannot be read, is corrupt, or an operation breaks the
/// dense-key discipline.
class StoreError : public Error {
public:
	using Error::Error;
};

/// The brute-force oracle refuses to report partial coverage.
class BoundExceededError : public Error {
public:
	using Error::Error;
};

} // namespace odcheck
