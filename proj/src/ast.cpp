#include "odcheck/ast.hpp"

#include "odcheck/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace odcheck {

std::string_view to_string(SecurityLabel label)
{
	return label == SecurityLabel::Low ? "low" : "high";
}

std::string_view to_string(UnaryOp op)
{
	switch (op) {
	case UnaryOp::Negate:
		return "-";
	case UnaryOp::Not:
		return "!";
	}
	return "?";
}

std::string_view to_string(BinaryOp op)
{
	switch (op) {
	case BinaryOp::Add:
		return "+";
	case BinaryOp::Sub:
		return "-";
	case BinaryOp::Mul:
		return "*";
	case BinaryOp::Eq:
		return "==";
	case BinaryOp::Ne:
		return "!=";
	case BinaryOp::Lt:
		return "<";
	case BinaryOp::Le:
		return "<=";
	case BinaryOp::And:
		return "&&";
	case BinaryOp::Or:
		return "||";
	}
	return "?";
}

namespace {

bool same_ptr(const ExprPtr &a, const ExprPtr &b)
{
	if (!a || !b)
		return a == b;
	return *a == *b;
}

bool same_list(const StmtList &a, const StmtList &b)
{
	return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

bool operator==(const Expr &a, const Expr &b)
{
	if (a.node.index() != b.node.index())
		return false;
	return std::visit(
		[&b](const auto &x) -> bool {
			using T = std::decay_t<decltype(x)>;
			const auto &y = std::get<T>(b.node);
			if constexpr (std::is_same_v<T, Literal>)
				return x.value == y.value;
			else if constexpr (std::is_same_v<T, VarRef>)
				return x.id == y.id;
			else if constexpr (std::is_same_v<T, Unary>)
				return x.op == y.op && same_ptr(x.operand, y.operand);
			else
				return x.op == y.op && same_ptr(x.lhs, y.lhs) &&
				       same_ptr(x.rhs, y.rhs);
		},
		a.node);
}

bool operator==(const Stmt &a, const Stmt &b)
{
	if (a.node.index() != b.node.index())
		return false;
	return std::visit(
		[&b](const auto &x) -> bool {
			using T = std::decay_t<decltype(x)>;
			const auto &y = std::get<T>(b.node);
			if constexpr (std::is_same_v<T, Skip>)
				return true;
			else if constexpr (std::is_same_v<T, Assign>)
				return x.target == y.target && same_ptr(x.rhs, y.rhs);
			else if constexpr (std::is_same_v<T, If>)
				return same_ptr(x.guard, y.guard) &&
				       same_list(x.then_branch, y.then_branch) &&
				       same_list(x.else_branch, y.else_branch);
			else
				return same_ptr(x.guard, y.guard) && same_list(x.body, y.body);
		},
		a.node);
}

bool operator==(const Program &a, const Program &b)
{
	if (a.decls != b.decls || a.threads.size() != b.threads.size())
		return false;
	for (std::size_t i = 0; i < a.threads.size(); ++i)
		if (!same_list(a.threads[i], b.threads[i]))
			return false;
	return true;
}

ExprPtr lit(Value v)
{
	return std::make_shared<const Expr>(Expr{Literal{v}});
}

ExprPtr var(VarId id)
{
	return std::make_shared<const Expr>(Expr{VarRef{id}});
}

ExprPtr unary(UnaryOp op, ExprPtr operand)
{
	return std::make_shared<const Expr>(Expr{Unary{op, std::move(operand)}});
}

ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs)
{
	return std::make_shared<const Expr>(Expr{Binary{op, std::move(lhs), std::move(rhs)}});
}

std::size_t Program::low_count() const
{
	return static_cast<std::size_t>(
		std::count_if(decls.begin(), decls.end(),
			      [](const VarDecl &d) { return d.label == SecurityLabel::Low; }));
}

const VarDecl *Program::find(VarId id) const
{
	auto it = std::find_if(decls.begin(), decls.end(),
			       [id](const VarDecl &d) { return d.id == id; });
	return it == decls.end() ? nullptr : &*it;
}

const VarDecl *Program::find(std::string_view name) const
{
	auto it = std::find_if(decls.begin(), decls.end(),
			       [name](const VarDecl &d) { return d.name == name; });
	return it == decls.end() ? nullptr : &*it;
}

const VarDecl &Program::decl(VarId id) const
{
	if (const auto *d = find(id))
		return *d;
	throw ValidationError("unknown variable id " + std::to_string(id));
}

SecurityLabel label_of(const Program &p, VarId id)
{
	return p.decl(id).label;
}

void assign_ids(std::vector<VarDecl> &decls)
{
	auto lows = static_cast<VarId>(
		std::count_if(decls.begin(), decls.end(),
			      [](const VarDecl &d) { return d.label == SecurityLabel::Low; }));
	VarId next_low = 1;
	VarId next_high = lows + 1;
	for (auto &d : decls)
		d.id = d.label == SecurityLabel::Low ? next_low++ : next_high++;
}

namespace {

void check_expr(const Program &p, const ExprPtr &e, std::size_t tid)
{
	if (!e)
		throw ValidationError("thread " + std::to_string(tid) + ": missing expression");
	std::visit(
		[&](const auto &x) {
			using T = std::decay_t<decltype(x)>;
			if constexpr (std::is_same_v<T, VarRef>) {
				if (!p.find(x.id))
					throw ValidationError("thread " + std::to_string(tid) +
							      ": reference to undeclared variable id " +
							      std::to_string(x.id));
			} else if constexpr (std::is_same_v<T, Unary>) {
				check_expr(p, x.operand, tid);
			} else if constexpr (std::is_same_v<T, Binary>) {
				check_expr(p, x.lhs, tid);
				check_expr(p, x.rhs, tid);
			}
		},
		e->node);
}

void check_stmts(const Program &p, const StmtList &stmts, std::size_t tid)
{
	for (const auto &s : stmts) {
		std::visit(
			[&](const auto &x) {
				using T = std::decay_t<decltype(x)>;
				if constexpr (std::is_same_v<T, Assign>) {
					if (!p.find(x.target))
						throw ValidationError(
							"thread " + std::to_string(tid) +
							": assignment to undeclared variable id " +
							std::to_string(x.target));
					check_expr(p, x.rhs, tid);
				} else if constexpr (std::is_same_v<T, If>) {
					check_expr(p, x.guard, tid);
					check_stmts(p, x.then_branch, tid);
					check_stmts(p, x.else_branch, tid);
				} else if constexpr (std::is_same_v<T, While>) {
					check_expr(p, x.guard, tid);
					check_stmts(p, x.body, tid);
				}
			},
			s.node);
	}
}

} // namespace

void validate(const Program &p)
{
	std::set<std::string_view> names;
	for (const auto &d : p.decls) {
		if (d.name.empty())
			throw ValidationError("declaration with empty name");
		if (!names.insert(d.name).second)
			throw ValidationError("duplicate declaration of '" + d.name + "'");
	}

	auto expected = p.decls;
	assign_ids(expected);
	for (std::size_t i = 0; i < p.decls.size(); ++i) {
		if (p.decls[i].id != expected[i].id)
			throw ValidationError("variable '" + p.decls[i].name + "' has id " +
					      std::to_string(p.decls[i].id) + ", expected " +
					      std::to_string(expected[i].id));
	}

	if (p.threads.empty())
		throw ValidationError("program has no threads");
	for (std::size_t t = 0; t < p.threads.size(); ++t)
		check_stmts(p, p.threads[t], t);
}

namespace {

int precedence(BinaryOp op)
{
	switch (op) {
	case BinaryOp::Or:
		return 1;
	case BinaryOp::And:
		return 2;
	case BinaryOp::Eq:
	case BinaryOp::Ne:
		return 3;
	case BinaryOp::Lt:
	case BinaryOp::Le:
		return 4;
	case BinaryOp::Add:
	case BinaryOp::Sub:
		return 5;
	case BinaryOp::Mul:
		return 6;
	}
	return 0;
}

// Binary operators are left-associative, so a right operand at the same
// precedence level needs parentheses.
void render_expr(std::ostream &os, const Program &p, const Expr &e, int min_prec)
{
	std::visit(
		[&](const auto &x) {
			using T = std::decay_t<decltype(x)>;
			if constexpr (std::is_same_v<T, Literal>) {
				if (x.value < 0)
					os << '(' << x.value << ')';
				else
					os << x.value;
			} else if constexpr (std::is_same_v<T, VarRef>) {
				const auto *d = p.find(x.id);
				os << (d ? d->name : "?" + std::to_string(x.id));
			} else if constexpr (std::is_same_v<T, Unary>) {
				os << to_string(x.op);
				render_expr(os, p, *x.operand, 7);
			} else {
				int prec = precedence(x.op);
				bool paren = prec < min_prec;
				if (paren)
					os << '(';
				render_expr(os, p, *x.lhs, prec);
				os << ' ' << to_string(x.op) << ' ';
				render_expr(os, p, *x.rhs, prec + 1);
				if (paren)
					os << ')';
			}
		},
		e.node);
}

void render_stmts(std::ostream &os, const Program &p, const StmtList &stmts, int indent);

void render_block(std::ostream &os, const Program &p, const StmtList &stmts, int indent)
{
	os << "{\n";
	render_stmts(os, p, stmts, indent + 1);
	os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << '}';
}

void render_stmts(std::ostream &os, const Program &p, const StmtList &stmts, int indent)
{
	const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
	for (const auto &s : stmts) {
		os << pad;
		std::visit(
			[&](const auto &x) {
				using T = std::decay_t<decltype(x)>;
				if constexpr (std::is_same_v<T, Skip>) {
					os << "skip;";
				} else if constexpr (std::is_same_v<T, Assign>) {
					os << p.decl(x.target).name << " := ";
					render_expr(os, p, *x.rhs, 0);
					os << ';';
				} else if constexpr (std::is_same_v<T, If>) {
					os << "if (";
					render_expr(os, p, *x.guard, 0);
					os << ") ";
					render_block(os, p, x.then_branch, indent);
					os << " else ";
					render_block(os, p, x.else_branch, indent);
				} else {
					os << "while (";
					render_expr(os, p, *x.guard, 0);
					os << ") ";
					render_block(os, p, x.body, indent);
				}
			},
			s.node);
		os << '\n';
	}
}

} // namespace

std::string render(const Program &p, const Expr &e)
{
	std::ostringstream os;
	render_expr(os, p, e, 0);
	return os.str();
}

std::string render(const Program &p)
{
	std::ostringstream os;
	for (const auto &d : p.decls)
		os << to_string(d.label) << ' ' << d.name << " = " << d.init << ";\n";
	for (const auto &t : p.threads) {
		os << "thread ";
		render_block(os, p, t, 0);
		os << '\n';
	}
	return os.str();
}

} // namespace odcheck
