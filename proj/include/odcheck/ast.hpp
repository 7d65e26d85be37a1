#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace odcheck {

using Value = std::int64_t;
/// Declaration ordinal: lows are 1..|L|, highs follow.
using VarId = std::uint32_t;
using ThreadId = std::uint32_t;

enum class SecurityLabel { Low, High };

std::string_view to_string(SecurityLabel label);

struct VarDecl {
	std::string name;
	SecurityLabel label = SecurityLabel::Low;
	VarId id = 0;
	Value init = 0;

	friend bool operator==(const VarDecl &, const VarDecl &) = default;
};

enum class UnaryOp { Negate, Not };
enum class BinaryOp { Add, Sub, Mul, Eq, Ne, Lt, Le, And, Or };

std::string_view to_string(UnaryOp op);
std::string_view to_string(BinaryOp op);

struct Expr;
/// Expression trees are immutable once built, so subtrees may be shared.
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
	Value value = 0;
};
struct VarRef {
	VarId id = 0;
};
struct Unary {
	UnaryOp op;
	ExprPtr operand;
};
struct Binary {
	BinaryOp op;
	ExprPtr lhs;
	ExprPtr rhs;
};

struct Expr {
	std::variant<Literal, VarRef, Unary, Binary> node;
};

bool operator==(const Expr &a, const Expr &b);

ExprPtr lit(Value v);
ExprPtr var(VarId id);
ExprPtr unary(UnaryOp op, ExprPtr operand);
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

struct Stmt;
using StmtList = std::vector<Stmt>;

struct Skip {
	friend bool operator==(const Skip &, const Skip &) = default;
};
struct Assign {
	VarId target = 0;
	ExprPtr rhs;
};
struct If {
	ExprPtr guard;
	StmtList then_branch;
	StmtList else_branch;
};
struct While {
	ExprPtr guard;
	StmtList body;
};

struct Stmt {
	std::variant<Skip, Assign, If, While> node;
};

bool operator==(const Stmt &a, const Stmt &b);

struct Program {
	std::vector<VarDecl> decls; // declaration order
	std::vector<StmtList> threads;

	std::size_t var_count() const { return decls.size(); }
	std::size_t low_count() const;
	std::size_t thread_count() const { return threads.size(); }

	/// Declaration with the given id, or nullptr.
	const VarDecl *find(VarId id) const;
	const VarDecl *find(std::string_view name) const;
	/// Declaration with the given id; throws ValidationError when unknown.
	const VarDecl &decl(VarId id) const;
};

bool operator==(const Program &a, const Program &b);

/// Declared label of a variable. Throws ValidationError for unknown ids.
SecurityLabel label_of(const Program &p, VarId id);

/// Checks every structural invariant of a program: unique names, ids laid
/// out as lows 1..|L| then highs (each group in declaration order), at least
/// one thread, and every referenced variable declared.
void validate(const Program &p);

/// Assigns ids to declarations in place following the low-then-high layout.
void assign_ids(std::vector<VarDecl> &decls);

/// Canonical concrete syntax; parse(render(p)) == p.
std::string render(const Program &p);
std::string render(const Program &p, const Expr &e);

/// Parses program text. Every error, including duplicate and undeclared
/// names, is a ParseError carrying the offending position.
Program parse(std::string_view source);

} // namespace odcheck
