#include "odcheck/ast.hpp"
#include "odcheck/errors.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace odcheck {

namespace {

enum class Tok {
	Ident,
	Int,
	LParen,
	RParen,
	LBrace,
	RBrace,
	Semi,
	Assign, // :=
	Equals, // =
	Plus,
	Minus,
	Star,
	EqEq,
	NotEq,
	Less,
	LessEq,
	AndAnd,
	OrOr,
	Bang,
	End,
};

struct Token {
	Tok kind;
	std::string_view text;
	std::size_t line;
	std::size_t column;
};

class Lexer {
public:
	explicit Lexer(std::string_view src) : src_(src) {}

	Token next()
	{
		skip_space();
		Token t{Tok::End, {}, line_, col_};
		if (pos_ >= src_.size())
			return t;

		std::size_t start = pos_;
		char c = src_[pos_];
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			while (pos_ < src_.size() &&
			       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
				advance();
			t.kind = Tok::Ident;
		} else if (std::isdigit(static_cast<unsigned char>(c))) {
			while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
				advance();
			t.kind = Tok::Int;
		} else {
			auto two = src_.substr(pos_, 2);
			auto pick2 = [&](Tok k) {
				advance();
				advance();
				t.kind = k;
			};
			auto pick1 = [&](Tok k) {
				advance();
				t.kind = k;
			};
			if (two == ":=")
				pick2(Tok::Assign);
			else if (two == "==")
				pick2(Tok::EqEq);
			else if (two == "!=")
				pick2(Tok::NotEq);
			else if (two == "<=")
				pick2(Tok::LessEq);
			else if (two == "&&")
				pick2(Tok::AndAnd);
			else if (two == "||")
				pick2(Tok::OrOr);
			else {
				switch (c) {
				case '(':
					pick1(Tok::LParen);
					break;
				case ')':
					pick1(Tok::RParen);
					break;
				case '{':
					pick1(Tok::LBrace);
					break;
				case '}':
					pick1(Tok::RBrace);
					break;
				case ';':
					pick1(Tok::Semi);
					break;
				case '=':
					pick1(Tok::Equals);
					break;
				case '+':
					pick1(Tok::Plus);
					break;
				case '-':
					pick1(Tok::Minus);
					break;
				case '*':
					pick1(Tok::Star);
					break;
				case '<':
					pick1(Tok::Less);
					break;
				case '!':
					pick1(Tok::Bang);
					break;
				default:
					throw ParseError(line_, col_,
							 std::string("unexpected character '") + c + "'");
				}
			}
		}
		t.text = src_.substr(start, pos_ - start);
		return t;
	}

private:
	void advance()
	{
		if (src_[pos_] == '\n') {
			++line_;
			col_ = 1;
		} else {
			++col_;
		}
		++pos_;
	}

	void skip_space()
	{
		while (pos_ < src_.size()) {
			char c = src_[pos_];
			if (std::isspace(static_cast<unsigned char>(c))) {
				advance();
			} else if (src_.substr(pos_, 2) == "//") {
				while (pos_ < src_.size() && src_[pos_] != '\n')
					advance();
			} else {
				break;
			}
		}
	}

	std::string_view src_;
	std::size_t pos_ = 0;
	std::size_t line_ = 1;
	std::size_t col_ = 1;
};

class Parser {
public:
	explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

	Program program()
	{
		Program p;
		while (is_keyword("low") || is_keyword("high"))
			p.decls.push_back(declaration(p));
		assign_ids(p.decls);

		while (is_keyword("thread")) {
			next();
			p.threads.push_back(block(p));
		}
		if (tok_.kind != Tok::End) {
			if (is_keyword("low") || is_keyword("high"))
				fail("declarations must precede all threads");
			fail("expected 'thread', found '" + std::string(tok_.text) + "'");
		}
		if (p.threads.empty())
			fail("program has no threads");
		return p;
	}

private:
	[[noreturn]] void fail(const std::string &msg) const { fail_at(tok_, msg); }

	[[noreturn]] static void fail_at(const Token &t, const std::string &msg)
	{
		throw ParseError(t.line, t.column, msg);
	}

	void next() { tok_ = lex_.next(); }

	bool is_keyword(std::string_view kw) const
	{
		return tok_.kind == Tok::Ident && tok_.text == kw;
	}

	static bool reserved(std::string_view s)
	{
		return s == "low" || s == "high" || s == "thread" || s == "skip" || s == "if" ||
		       s == "else" || s == "while";
	}

	void expect(Tok kind, std::string_view what)
	{
		if (tok_.kind != kind)
			fail("expected " + std::string(what) +
			     (tok_.kind == Tok::End ? ", found end of input"
						    : ", found '" + std::string(tok_.text) + "'"));
		next();
	}

	Value integer(bool negative)
	{
		if (tok_.kind != Tok::Int)
			fail("expected integer");
		std::uint64_t mag = 0;
		auto [ptr, ec] =
			std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), mag);
		constexpr auto max = static_cast<std::uint64_t>(std::numeric_limits<Value>::max());
		if (ec != std::errc() || mag > max + (negative ? 1 : 0))
			fail("integer literal out of range");
		next();
		if (negative)
			return mag == max + 1 ? std::numeric_limits<Value>::min()
					      : -static_cast<Value>(mag);
		return static_cast<Value>(mag);
	}

	VarDecl declaration(const Program &p)
	{
		VarDecl d;
		d.label = is_keyword("low") ? SecurityLabel::Low : SecurityLabel::High;
		next();
		if (tok_.kind != Tok::Ident || reserved(tok_.text))
			fail("expected variable name");
		d.name = std::string(tok_.text);
		if (p.find(d.name))
			fail("duplicate declaration of '" + d.name + "'");
		next();
		expect(Tok::Equals, "'='");
		bool negative = false;
		if (tok_.kind == Tok::Minus) {
			negative = true;
			next();
		}
		d.init = integer(negative);
		expect(Tok::Semi, "';'");
		return d;
	}

	// ';' may be omitted after the last statement of a block.
	void terminator()
	{
		if (tok_.kind != Tok::RBrace)
			expect(Tok::Semi, "';'");
	}

	StmtList block(const Program &p)
	{
		expect(Tok::LBrace, "'{'");
		StmtList out;
		while (tok_.kind != Tok::RBrace) {
			if (tok_.kind == Tok::End)
				fail("unterminated block");
			out.push_back(statement(p));
		}
		next();
		return out;
	}

	VarId resolve(const Program &p, const Token &t) const
	{
		const auto *d = p.find(t.text);
		if (!d)
			fail_at(t, "undeclared variable '" + std::string(t.text) + "'");
		return d->id;
	}

	Stmt statement(const Program &p)
	{
		if (is_keyword("skip")) {
			next();
			terminator();
			return Stmt{Skip{}};
		}
		if (is_keyword("if")) {
			next();
			expect(Tok::LParen, "'('");
			auto guard = expr(p);
			expect(Tok::RParen, "')'");
			If s{std::move(guard), block(p), {}};
			if (is_keyword("else")) {
				next();
				s.else_branch = block(p);
			}
			return Stmt{std::move(s)};
		}
		if (is_keyword("while")) {
			next();
			expect(Tok::LParen, "'('");
			auto guard = expr(p);
			expect(Tok::RParen, "')'");
			return Stmt{While{std::move(guard), block(p)}};
		}
		if (tok_.kind == Tok::Ident && !reserved(tok_.text)) {
			Token name = tok_;
			next();
			if (tok_.kind == Tok::Equals)
				fail("expected ':=' in assignment ('=' is only valid in declarations)");
			expect(Tok::Assign, "':='");
			VarId target = resolve(p, name);
			auto rhs = expr(p);
			terminator();
			return Stmt{Assign{target, std::move(rhs)}};
		}
		fail("expected statement" + (tok_.kind == Tok::End
						     ? std::string(", found end of input")
						     : ", found '" + std::string(tok_.text) + "'"));
	}

	// Precedence climbing, lowest first: || && (== !=) (< <=) (+ -) * unary.
	ExprPtr expr(const Program &p) { return binary_level(p, 1); }

	static int prec_of(Tok k, BinaryOp &op)
	{
		switch (k) {
		case Tok::OrOr:
			op = BinaryOp::Or;
			return 1;
		case Tok::AndAnd:
			op = BinaryOp::And;
			return 2;
		case Tok::EqEq:
			op = BinaryOp::Eq;
			return 3;
		case Tok::NotEq:
			op = BinaryOp::Ne;
			return 3;
		case Tok::Less:
			op = BinaryOp::Lt;
			return 4;
		case Tok::LessEq:
			op = BinaryOp::Le;
			return 4;
		case Tok::Plus:
			op = BinaryOp::Add;
			return 5;
		case Tok::Minus:
			op = BinaryOp::Sub;
			return 5;
		case Tok::Star:
			op = BinaryOp::Mul;
			return 6;
		default:
			return 0;
		}
	}

	ExprPtr binary_level(const Program &p, int min_prec)
	{
		auto lhs = unary_expr(p);
		for (;;) {
			BinaryOp op{};
			int prec = prec_of(tok_.kind, op);
			if (prec == 0 || prec < min_prec)
				return lhs;
			next();
			auto rhs = binary_level(p, prec + 1);
			lhs = binary(op, std::move(lhs), std::move(rhs));
		}
	}

	ExprPtr unary_expr(const Program &p)
	{
		if (tok_.kind == Tok::Minus) {
			next();
			return unary(UnaryOp::Negate, unary_expr(p));
		}
		if (tok_.kind == Tok::Bang) {
			next();
			return unary(UnaryOp::Not, unary_expr(p));
		}
		return primary(p);
	}

	ExprPtr primary(const Program &p)
	{
		if (tok_.kind == Tok::Int)
			return lit(integer(false));
		if (tok_.kind == Tok::LParen) {
			next();
			// A parenthesized negative literal is how negative constants render.
			if (tok_.kind == Tok::Minus) {
				Lexer probe = lex_;
				Token digits = probe.next();
				if (digits.kind == Tok::Int && probe.next().kind == Tok::RParen) {
					next();
					Value v = integer(true);
					expect(Tok::RParen, "')'");
					return lit(v);
				}
			}
			auto e = expr(p);
			expect(Tok::RParen, "')'");
			return e;
		}
		if (tok_.kind == Tok::Ident && !reserved(tok_.text)) {
			Token name = tok_;
			next();
			return var(resolve(p, name));
		}
		fail("expected expression");
	}

	Lexer lex_;
	Token tok_{};
};

} // namespace

Program parse(std::string_view source)
{
	Parser parser(source);
	return parser.program();
}

} // namespace odcheck
