#include "otmr/ordinal.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <mutex>

#include "otmr/error.hpp"

namespace otmr {

struct OrdinalAccess {
  static Ordinal make(std::vector<OrdTerm> inf, uint64_t fin) {
    Ordinal o;
    o.inf_ = std::move(inf);
    o.fin_ = fin;
    return o;
  }
  static std::vector<OrdTerm>& inf(Ordinal& o) { return o.inf_; }
};

namespace {

Ordinal& bound_storage() {
  static Ordinal b = OrdinalAccess::make({OrdTerm{OrdinalAccess::make({OrdTerm{Ordinal(1), 1}}, 0), 1}}, 0);
  return b;
}

const Ordinal& checked(const Ordinal& o) {
  if (!(o < ordinal_bound()))
    throw Error("bound-overflow", o.to_string() + " is not below " + ordinal_bound().to_string());
  return o;
}

uint64_t add_u64(uint64_t a, uint64_t b) {
  if (a > std::numeric_limits<uint64_t>::max() - b)
    throw Error("bound-overflow", "coefficient overflow");
  return a + b;
}

uint64_t mul_u64(uint64_t a, uint64_t b) {
  if (a != 0 && b > std::numeric_limits<uint64_t>::max() / a)
    throw Error("bound-overflow", "coefficient overflow");
  return a * b;
}

// Uniform term view: the finite tail becomes an exponent-0 term.
std::vector<OrdTerm> all_terms(const Ordinal& o) {
  std::vector<OrdTerm> t = o.infinite_terms();
  if (o.finite_part() > 0) t.push_back(OrdTerm{Ordinal(0), o.finite_part()});
  return t;
}

Ordinal from_terms(std::vector<OrdTerm> t) {
  uint64_t fin = 0;
  if (!t.empty() && t.back().exp.is_zero()) {
    fin = t.back().coef;
    t.pop_back();
  }
  return OrdinalAccess::make(std::move(t), fin);
}

Ordinal add_unchecked(const Ordinal& a, const Ordinal& b) {
  if (b.is_finite()) {
    return OrdinalAccess::make(a.infinite_terms(), add_u64(a.finite_part(), b.finite_part()));
  }
  const std::vector<OrdTerm>& bt = b.infinite_terms();
  const Ordinal& e = bt.front().exp;
  std::vector<OrdTerm> out;
  for (const OrdTerm& t : a.infinite_terms()) {
    if (t.exp > e) {
      out.push_back(t);
    } else if (t.exp == e) {
      out.push_back(OrdTerm{t.exp, add_u64(t.coef, bt.front().coef)});
      break;
    } else {
      break;
    }
  }
  size_t start = 0;
  if (!out.empty() && out.back().exp == e) start = 1;
  for (size_t i = start; i < bt.size(); ++i) out.push_back(bt[i]);
  return OrdinalAccess::make(std::move(out), b.finite_part());
}

Ordinal mul_unchecked(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal(0);
  if (a.is_finite() && b.is_finite()) return Ordinal(mul_u64(a.finite_part(), b.finite_part()));
  Ordinal lead = a.leading_exponent();
  Ordinal result(0);
  for (const OrdTerm& t : b.infinite_terms()) {
    Ordinal e = add_unchecked(lead, t.exp);
    result = add_unchecked(result, OrdinalAccess::make({OrdTerm{e, t.coef}}, 0));
  }
  if (b.finite_part() > 0) {
    // a * n multiplies the leading coefficient and keeps the rest.
    std::vector<OrdTerm> at = all_terms(a);
    at.front().coef = mul_u64(at.front().coef, b.finite_part());
    result = add_unchecked(result, from_terms(std::move(at)));
  }
  return result;
}

}  // namespace

const Ordinal& ordinal_bound() { return bound_storage(); }

void set_ordinal_bound(const Ordinal& bound) {
  if (bound.is_zero()) throw Error("bound-overflow", "bound must be positive");
  bound_storage() = bound;
}

void set_ordinal_bound_exponent(const Ordinal& e) {
  bound_storage() = e.is_zero() ? Ordinal(1) : OrdinalAccess::make({OrdTerm{e, 1}}, 0);
}

Ordinal Ordinal::omega() { return omega_power(Ordinal(1), 1); }

Ordinal Ordinal::omega_power(const Ordinal& e, uint64_t c) {
  if (c == 0) return Ordinal(0);
  if (e.is_zero()) return checked(Ordinal(c));
  return checked(OrdinalAccess::make({OrdTerm{e, c}}, 0));
}

uint64_t Ordinal::to_finite() const {
  if (!is_finite()) throw Error("bound-overflow", to_string() + " is not finite");
  return fin_;
}

Ordinal Ordinal::limit_part() const { return OrdinalAccess::make(inf_, 0); }

uint64_t Ordinal::coefficient(const Ordinal& e) const {
  if (e.is_zero()) return fin_;
  for (const OrdTerm& t : inf_)
    if (t.exp == e) return t.coef;
  return 0;
}

Ordinal Ordinal::leading_exponent() const {
  if (inf_.empty()) return Ordinal(0);
  return inf_.front().exp;
}

Ordinal Ordinal::pred() const {
  if (fin_ == 0) throw Error("bound-overflow", to_string() + " has no predecessor");
  return OrdinalAccess::make(inf_, fin_ - 1);
}

Ordinal Ordinal::succ() const { return checked(OrdinalAccess::make(inf_, add_u64(fin_, 1))); }

std::string Ordinal::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (const OrdTerm& t : inf_) {
    if (!out.empty()) out += '+';
    out += 'w';
    if (!(t.exp == Ordinal(1))) {
      out += '^';
      if (t.exp.is_finite() || t.exp == Ordinal::omega())
        out += t.exp.to_string();
      else
        out += "(" + t.exp.to_string() + ")";
    }
    if (t.coef != 1) out += "*" + std::to_string(t.coef);
  }
  if (fin_ > 0) {
    if (!out.empty()) out += '+';
    out += std::to_string(fin_);
  }
  return out;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  size_t n = std::min(a.inf_.size(), b.inf_.size());
  for (size_t i = 0; i < n; ++i) {
    auto c = a.inf_[i].exp <=> b.inf_[i].exp;
    if (c != 0) return c;
    if (a.inf_[i].coef != b.inf_[i].coef) return a.inf_[i].coef <=> b.inf_[i].coef;
  }
  if (a.inf_.size() != b.inf_.size()) return a.inf_.size() <=> b.inf_.size();
  return a.fin_ <=> b.fin_;
}

bool operator==(const Ordinal& a, const Ordinal& b) {
  return a.fin_ == b.fin_ && a.inf_ == b.inf_;
}

namespace {

class OrdParser {
 public:
  explicit OrdParser(std::string_view s) : s_(s) {}

  Ordinal parse_all() {
    Ordinal o = sum();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return o;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  uint64_t nat() {
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a number");
    uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = add_u64(mul_u64(v, 10), static_cast<uint64_t>(s_[pos_] - '0'));
      ++pos_;
    }
    return v;
  }
  bool peek_digit() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }
  Ordinal exponent() {
    if (eat('(')) {
      Ordinal e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (eat('w')) return Ordinal::omega();
    return Ordinal(nat());
  }
  Ordinal term() {
    Ordinal base;
    if (eat('w')) {
      Ordinal e(1);
      if (eat('^')) e = exponent();
      base = e.is_zero() ? Ordinal(1) : OrdinalAccess::make({OrdTerm{e, 1}}, 0);
    } else if (peek_digit()) {
      base = Ordinal(nat());
    } else {
      fail("expected a term");
    }
    while (eat('*')) {
      if (peek_digit()) {
        base = mul_unchecked(base, Ordinal(nat()));
      } else {
        base = mul_unchecked(base, term_atom());
      }
    }
    return base;
  }
  Ordinal term_atom() {
    if (eat('(')) {
      Ordinal e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (eat('w')) {
      Ordinal e(1);
      if (eat('^')) e = exponent();
      return e.is_zero() ? Ordinal(1) : OrdinalAccess::make({OrdTerm{e, 1}}, 0);
    }
    return Ordinal(nat());
  }
  Ordinal sum() {
    Ordinal o = term();
    while (eat('+')) o = add_unchecked(o, term());
    return o;
  }
  [[noreturn]] void fail(const std::string& m) {
    throw Error("parse-error", "ordinal '" + std::string(s_) + "': " + m + " at offset " + std::to_string(pos_));
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text) {
  Ordinal o = OrdParser(text).parse_all();
  return checked(o);
}

Ordering ord_cmp(const Ordinal& a, const Ordinal& b) {
  auto c = a <=> b;
  if (c < 0) return Ordering::less;
  if (c > 0) return Ordering::greater;
  return Ordering::equal;
}

Ordinal ord_add(const Ordinal& a, const Ordinal& b) { return checked(add_unchecked(a, b)); }
Ordinal ord_mul(const Ordinal& a, const Ordinal& b) { return checked(mul_unchecked(a, b)); }
Ordinal operator+(const Ordinal& a, const Ordinal& b) { return ord_add(a, b); }
Ordinal operator*(const Ordinal& a, const Ordinal& b) { return ord_mul(a, b); }

Ordinal ord_sup(const std::set<Ordinal>& s) {
  if (s.empty()) return Ordinal(0);
  return *s.rbegin();
}

Ordinal ord_sub_left(const Ordinal& a, const Ordinal& b) {
  if (a > b) throw Error("bound-overflow", "left subtraction needs " + a.to_string() + " <= " + b.to_string());
  std::vector<OrdTerm> at = all_terms(a);
  std::vector<OrdTerm> bt = all_terms(b);
  size_t i = 0;
  for (; i < at.size(); ++i) {
    if (at[i] == bt[i]) continue;
    std::vector<OrdTerm> out;
    if (at[i].exp == bt[i].exp) {
      out.push_back(OrdTerm{bt[i].exp, bt[i].coef - at[i].coef});
      out.insert(out.end(), bt.begin() + static_cast<long>(i) + 1, bt.end());
    } else {
      out.insert(out.end(), bt.begin() + static_cast<long>(i), bt.end());
    }
    return from_terms(std::move(out));
  }
  return from_terms(std::vector<OrdTerm>(bt.begin() + static_cast<long>(i), bt.end()));
}

Ordinal ord_double(const Ordinal& a) {
  return checked(OrdinalAccess::make(a.infinite_terms(), mul_u64(a.finite_part(), 2)));
}

namespace {

void require_pairable(const Ordinal& x) {
  if (x.leading_exponent() > Ordinal(1))
    throw Error("bound-overflow", "pairing is supported for operands below w^2, got " + x.to_string());
}

}  // namespace

Ordinal pair_block_start(const Ordinal& m) {
  require_pairable(m);
  uint64_t a = m.coefficient(Ordinal(1));
  uint64_t n = m.finite_part();
  if (a == 0) return Ordinal(mul_u64(n, n));
  Ordinal w = Ordinal::omega();
  if (a == 1) return ord_add(ord_mul(w, Ordinal(add_u64(mul_u64(2, n), 1))), Ordinal(n));
  Ordinal w2 = Ordinal::omega_power(Ordinal(2));
  return ord_add(ord_add(ord_mul(w2, Ordinal(a - 1)), ord_mul(w, Ordinal(mul_u64(mul_u64(2, a), n)))), Ordinal(n));
}

Ordinal godel_pair(const Ordinal& x, const Ordinal& y) {
  require_pairable(x);
  require_pairable(y);
  if (x.is_finite() && y.is_finite()) {
    uint64_t a = x.finite_part(), b = y.finite_part();
    uint64_t m = std::max(a, b);
    uint64_t base = mul_u64(m, m);
    return checked(Ordinal(a < m ? add_u64(base, a) : add_u64(add_u64(base, m), b)));
  }
  const Ordinal& m = std::max(x, y);
  Ordinal base = pair_block_start(m);
  if (x < m) return ord_add(base, x);
  return ord_add(ord_add(base, m), y);
}

Ordinal godel_pair(const OrdPair& p) { return godel_pair(p.first, p.second); }

OrdPair godel_unpair(const Ordinal& o) {
  if (o.is_finite()) {
    uint64_t v = o.finite_part();
    auto m = static_cast<uint64_t>(std::sqrt(static_cast<long double>(v)));
    while (m * m > v) --m;
    while ((m + 1) * (m + 1) <= v) ++m;
    uint64_t r = v - m * m;
    if (r < m) return {Ordinal(r), Ordinal(m)};
    return {Ordinal(m), Ordinal(r - m)};
  }
  if (o.leading_exponent() > Ordinal(2))
    throw Error("bound-overflow", "unpairing is supported below w^3, got " + o.to_string());
  uint64_t p = o.coefficient(Ordinal(2));
  uint64_t q = o.coefficient(Ordinal(1));
  uint64_t r = o.finite_part();
  uint64_t a, n;
  if (p == 0) {
    a = 1;
    n = (q - 1) / 2;
    if (2 * n + 1 == q && n > r) --n;
  } else {
    a = add_u64(p, 1);
    uint64_t step = mul_u64(2, a);
    n = q / step;
    if (step * n == q && n > r) --n;
  }
  Ordinal m = ord_add(ord_mul(Ordinal::omega(), Ordinal(a)), Ordinal(n));
  Ordinal rem = ord_sub_left(pair_block_start(m), o);
  if (rem < m) return {rem, m};
  return {m, ord_sub_left(m, rem)};
}

}  // namespace otmr
