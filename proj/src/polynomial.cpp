#include "momcert/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace momcert {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::unit(std::size_t nvars, std::size_t var, std::uint32_t power) {
  if (var >= nvars) throw std::out_of_range("variable index out of range");
  Monomial m(nvars);
  m.exponents_[var] = power;
  return m;
}

std::uint32_t Monomial::total_degree() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), std::uint32_t{0});
}

std::uint32_t Monomial::degree_in(std::span<const std::size_t> subset) const {
  std::uint32_t d = 0;
  for (auto i : subset) {
    if (i >= exponents_.size()) throw std::out_of_range("subset index out of range");
    d += exponents_[i];
  }
  return d;
}

bool Monomial::is_pure_power_of(std::size_t var) const {
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i == var) {
      if (exponents_[i] == 0) return false;
    } else if (exponents_[i] != 0) {
      return false;
    }
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (nvars() != other.nvars()) throw DimensionMismatch("monomial dimension mismatch");
  Monomial r(*this);
  for (std::size_t i = 0; i < exponents_.size(); ++i) r.exponents_[i] += other.exponents_[i];
  return r;
}

bool GrlexDescending::operator()(const Monomial& a, const Monomial& b) const {
  const auto da = a.total_degree();
  const auto db = b.total_degree();
  if (da != db) return da > db;
  return a.exponents() > b.exponents();
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t var) {
  return monomial(Monomial::unit(nvars, var), Rational(1));
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p(m.nvars());
  p.add_term(m, c);
  return p;
}

Polynomial Polynomial::falling_factorial(std::size_t nvars, std::size_t var, std::uint32_t order) {
  Polynomial result = constant(nvars, Rational(1));
  const Polynomial x = variable(nvars, var);
  for (std::uint32_t k = 0; k < order; ++k)
    result = result * (x - constant(nvars, Rational(static_cast<long>(k))));
  return result;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.nvars() != nvars_) throw DimensionMismatch("monomial dimension mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) {
    it->second.canonicalize();  // callers may pass e.g. 3/3 built from a raw pair
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::uint32_t Polynomial::degree() const {
  // Map is ordered by total degree, largest first.
  return terms_.empty() ? 0 : terms_.begin()->first.total_degree();
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool Polynomial::has_negative_coefficient() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second < 0; });
}

bool Polynomial::has_integer_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.second.get_den() == 1; });
}

Polynomial& Polynomial::operator+=(const Polynomial& q) {
  if (q.nvars_ != nvars_) throw DimensionMismatch("polynomial dimension mismatch");
  for (const auto& [m, c] : q.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
  if (q.nvars_ != nvars_) throw DimensionMismatch("polynomial dimension mismatch");
  for (const auto& [m, c] : q.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  if (p.nvars_ != q.nvars_) throw DimensionMismatch("polynomial dimension mismatch");
  Polynomial r(p.nvars_);
  for (const auto& [mp, cp] : p.terms_)
    for (const auto& [mq, cq] : q.terms_) r.add_term(mp * mq, cp * cq);
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Rational Polynomial::evaluate(std::span<const std::int64_t> x) const {
  if (x.size() != nvars_) throw DimensionMismatch("evaluation point has wrong dimension");
  Rational sum = 0;
  Integer power;
  for (const auto& [m, c] : terms_) {
    Integer prod = 1;
    for (std::size_t i = 0; i < nvars_ && prod != 0; ++i) {
      if (m[i] == 0) continue;
      const Integer base(static_cast<long>(x[i]));
      mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), m[i]);
      prod *= power;
    }
    sum += c * Rational(prod);
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const bool is_const = m.total_degree() == 0;
    bool wrote = false;
    if (is_const || mag != 1) {
      out << momcert::to_string(mag);
      wrote = true;
    }
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      if (m[i] == 0) continue;
      if (wrote) out << '*';
      out << 'x' << (i + 1);
      if (m[i] > 1) out << '^' << m[i];
      wrote = true;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Structural queries

namespace {

// Splits p by powers of x_var: p = sum_e coeffs[e] * x_var^e, where each
// coefficient has exponent 0 in var.
std::vector<Polynomial> split_by_power(const Polynomial& p, std::size_t var) {
  std::vector<Polynomial> coeffs(p.degree() + 1, Polynomial(p.nvars()));
  std::size_t top = 0;
  for (const auto& [m, c] : p.terms()) {
    auto exps = m.exponents();
    const auto e = exps[var];
    exps[var] = 0;
    coeffs[e] += Polynomial::monomial(Monomial(std::move(exps)), c);
    top = std::max<std::size_t>(top, e);
  }
  coeffs.resize(top + 1, Polynomial(p.nvars()));
  return coeffs;
}

}  // namespace

bool divisible_by_falling_factorial(const Polynomial& p, std::size_t var, std::uint32_t order) {
  if (var >= p.nvars()) throw std::out_of_range("variable index out of range");
  if (p.is_zero()) return true;
  auto coeffs = split_by_power(p, var);
  for (std::uint32_t k = 0; k < order; ++k) {
    // Horner/synthetic division by (x_var - k).
    const Rational root(static_cast<long>(k));
    const std::size_t d = coeffs.size() - 1;
    std::vector<Polynomial> quotient(d == 0 ? 1 : d, Polynomial(p.nvars()));
    Polynomial carry(p.nvars());
    for (std::size_t e = d + 1; e-- > 0;) {
      carry = coeffs[e] + carry * root;
      if (e > 0) quotient[e - 1] = carry;
    }
    if (!carry.is_zero()) return false;
    if (d == 0) return true;  // remainder zero on a constant means p == 0
    coeffs = std::move(quotient);
  }
  return true;
}

std::uint32_t max_degree_in(const Polynomial& p, std::span<const std::size_t> subset) {
  std::uint32_t d = 0;
  for (const auto& [m, c] : p.terms()) d = std::max(d, m.degree_in(subset));
  return d;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, std::size_t nvars, std::span<const std::string> aliases)
      : text_(text), nvars_(nvars), aliases_(aliases) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial \"" + std::string(text_) + "\": " + what + " at column " +
                                std::to_string(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expression() {
    Polynomial p(nvars_);
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    p = term();
    if (negate) p = -p;
    for (;;) {
      if (accept('+')) p += term();
      else if (accept('-')) p -= term();
      else return p;
    }
  }

  Polynomial term() {
    Polynomial p = factor();
    for (;;) {
      if (accept('*')) {
        p = p * factor();
      } else if (accept('/')) {
        Polynomial d = factor();
        if (d.degree() != 0 || d.is_zero()) fail("division only by nonzero constants");
        p *= Rational(1) / d.coefficient(Monomial(nvars_));
      } else {
        return p;
      }
    }
  }

  Polynomial factor() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_space();
      const auto start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected nonnegative integer exponent");
      const auto e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (e > 64) fail("exponent too large");
      Polynomial r = Polynomial::constant(nvars_, Rational(1));
      for (unsigned long k = 0; k < e; ++k) r = r * base;
      return r;
    }
    return base;
  }

  Polynomial primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expression();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const auto start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Polynomial::constant(nvars_, Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const auto start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < aliases_.size() && i < nvars_; ++i)
        if (aliases_[i] == name) return Polynomial::variable(nvars_, i);
      if (name.size() > 1 && name[0] == 'x' &&
          std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        const auto idx = std::stoul(name.substr(1));
        if (idx >= 1 && idx <= nvars_) return Polynomial::variable(nvars_, idx - 1);
      }
      pos_ = start;
      fail("undeclared variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t nvars_;
  std::span<const std::string> aliases_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t nvars, std::span<const std::string> aliases) {
  return PolynomialParser(text, nvars, aliases).parse();
}

}  // namespace momcert
