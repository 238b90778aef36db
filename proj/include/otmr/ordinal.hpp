#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace otmr {

struct OrdTerm;

// An ordinal in Cantor normal form. The finite tail is kept separately as a
// machine integer so that finite ordinals never allocate.
//
// Invariants: exponents in `inf_` are strictly decreasing and nonzero,
// coefficients are >= 1, and every constructed value is below
// ordinal_bound().
class Ordinal {
 public:
  Ordinal() = default;
  Ordinal(uint64_t n) : fin_(n) {}  // NOLINT: finite ordinals convert implicitly

  static Ordinal omega();
  // omega^e * c; c >= 1.
  static Ordinal omega_power(const Ordinal& e, uint64_t c = 1);
  // Parses `0`, `5`, `w`, `w+3`, `w*2`, `w^2*3+w+1`, `w^(w+1)`.
  static Ordinal parse(std::string_view text);

  bool is_zero() const { return inf_.empty() && fin_ == 0; }
  bool is_finite() const { return inf_.empty(); }
  bool is_limit() const { return !inf_.empty() && fin_ == 0; }
  bool is_successor() const { return fin_ > 0; }
  uint64_t finite_part() const { return fin_; }
  // Value of a finite ordinal; throws if infinite.
  uint64_t to_finite() const;
  // The ordinal with the finite tail removed (0 or a limit).
  Ordinal limit_part() const;
  // Coefficient of omega^e in the normal form (0 if absent).
  uint64_t coefficient(const Ordinal& e) const;
  // Exponent of the leading term; 0 for finite ordinals.
  Ordinal leading_exponent() const;
  const std::vector<OrdTerm>& infinite_terms() const { return inf_; }

  // Predecessor of a successor ordinal.
  Ordinal pred() const;
  Ordinal succ() const;

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  friend struct OrdinalAccess;
  std::vector<OrdTerm> inf_;
  uint64_t fin_ = 0;
};

struct OrdTerm {
  Ordinal exp;
  uint64_t coef = 1;
  friend bool operator==(const OrdTerm& a, const OrdTerm& b) {
    return a.coef == b.coef && a.exp == b.exp;
  }
};

// Process-wide strict upper bound on constructed ordinals (default w^w).
// Configure before sharing ordinals across threads.
const Ordinal& ordinal_bound();
void set_ordinal_bound(const Ordinal& bound);
// Sets the bound to w^e; e itself must lie below the current bound.
void set_ordinal_bound_exponent(const Ordinal& e);

enum class Ordering { less, equal, greater };

Ordering ord_cmp(const Ordinal& a, const Ordinal& b);
Ordinal ord_add(const Ordinal& a, const Ordinal& b);
Ordinal ord_mul(const Ordinal& a, const Ordinal& b);
Ordinal ord_sup(const std::set<Ordinal>& s);
// The unique g with a + g = b; requires a <= b.
Ordinal ord_sub_left(const Ordinal& a, const Ordinal& b);
// 2 * a, computed as limit_part(a) + 2 * finite_part(a).
Ordinal ord_double(const Ordinal& a);

struct OrdPair {
  Ordinal first;
  Ordinal second;
  friend bool operator==(const OrdPair&, const OrdPair&) = default;
};

// Rank of (first, second) when pairs are ordered by max, then
// lexicographically. Operands must lie below w^2; larger operands raise
// bound-overflow.
Ordinal godel_pair(const OrdPair& p);
Ordinal godel_pair(const Ordinal& a, const Ordinal& b);
// Inverse of godel_pair on values below w^3.
OrdPair godel_unpair(const Ordinal& o);
// Order type of the pairs whose maximum is below m (m < w^2).
Ordinal pair_block_start(const Ordinal& m);

Ordinal operator+(const Ordinal& a, const Ordinal& b);
Ordinal operator*(const Ordinal& a, const Ordinal& b);

}  // namespace otmr
