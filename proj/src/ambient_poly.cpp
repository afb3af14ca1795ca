#include "confsphere/ambient_poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace confsphere {

namespace {

constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

std::uint64_t field_mask(int bit) {
  std::uint64_t m = 0;
  for (int i = 0; i < Monomial::kMaxVariables; ++i) m |= std::uint64_t{1} << (Monomial::kBits * i + bit);
  return m;
}

const std::uint64_t kLowBits = field_mask(0);
const std::uint64_t kGuardBits = field_mask(5);

Integer from_int128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer out(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  out <<= 64;
  out += static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  if (neg) out = -out;
  return out;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 16;
  while (p < v) p <<= 1;
  return p;
}

inline std::size_t slot_of(std::uint64_t key, int shift) {
  return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ULL) >> shift);
}

// Open-addressing table keyed by packed monomials.
template <class V>
class MonomialTable {
 public:
  explicit MonomialTable(std::size_t expected) { reset(next_pow2(2 * expected + 1)); }

  V& at(std::uint64_t key) {
    std::size_t s = slot_of(key, shift_);
    while (true) {
      if (keys_[s] == key) return vals_[s];
      if (keys_[s] == kEmpty) {
        if (2 * (count_ + 1) > keys_.size()) {
          grow();
          return at(key);
        }
        keys_[s] = key;
        ++count_;
        return vals_[s];
      }
      s = (s + 1) & (keys_.size() - 1);
    }
  }

  template <class Fn>
  void for_each(Fn fn) const {
    for (std::size_t s = 0; s < keys_.size(); ++s) {
      if (keys_[s] != kEmpty) fn(keys_[s], vals_[s]);
    }
  }

 private:
  void reset(std::size_t cap) {
    keys_.assign(cap, kEmpty);
    vals_.assign(cap, V{});
    count_ = 0;
    int bits = 0;
    while ((std::size_t{1} << bits) < cap) ++bits;
    shift_ = 64 - bits;
  }

  void grow() {
    std::vector<std::uint64_t> old_keys;
    std::vector<V> old_vals;
    old_keys.swap(keys_);
    old_vals.swap(vals_);
    reset(old_keys.size() * 2);
    for (std::size_t s = 0; s < old_keys.size(); ++s) {
      if (old_keys[s] != kEmpty) at(old_keys[s]) = std::move(old_vals[s]);
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<V> vals_;
  std::size_t count_ = 0;
  int shift_ = 60;
};

Integer abs_sum(const AmbientPoly& p) {
  Integer s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += abs(p.numerator_at(i));
  return s;
}

bool numerators_fit_long(const AmbientPoly& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p.numerator_at(i).fits_slong_p()) return false;
  }
  return true;
}

int max_exponent(const AmbientPoly& p, int var) {
  int m = 0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, p.monomial_at(i).exponent(var));
  return m;
}

void check_product_exponents(const AmbientPoly& a, const AmbientPoly& b) {
  if (a.degree() + b.degree() <= Monomial::kMaxExponent) return;
  for (int v = 0; v < a.nvars(); ++v) {
    if (max_exponent(a, v) + max_exponent(b, v) > Monomial::kMaxExponent) {
      throw std::overflow_error("monomial exponent exceeds 31");
    }
  }
}

// Number of monomials of degree <= d in n variables, saturated.
std::size_t monomial_count_bound(int n, int d) {
  double c = 1.0;
  for (int i = 1; i <= n; ++i) c = c * (d + i) / i;
  return c > 1e8 ? std::size_t{100000000} : static_cast<std::size_t>(c);
}

}  // namespace

// ---------------------------------------------------------------- Monomial

Monomial Monomial::from_exponents(std::span<const int> exponents) {
  if (static_cast<int>(exponents.size()) > kMaxVariables) throw std::invalid_argument("too many variables");
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0 || exponents[i] > kMaxExponent) throw std::invalid_argument("exponent out of range");
    key |= static_cast<std::uint64_t>(exponents[i]) << (kBits * i);
  }
  return Monomial(key);
}

Monomial Monomial::variable(int i, int power) {
  if (i < 0 || i >= kMaxVariables) throw std::invalid_argument("variable index out of range");
  if (power < 0 || power > kMaxExponent) throw std::invalid_argument("exponent out of range");
  return Monomial(static_cast<std::uint64_t>(power) << (kBits * i));
}

int Monomial::degree() const {
  int d = 0;
  for (std::uint64_t k = key_; k != 0; k >>= kBits) d += static_cast<int>(k & 63u);
  return d;
}

bool Monomial::all_even() const { return (key_ & kLowBits) == 0; }

Monomial Monomial::operator*(Monomial other) const {
  const std::uint64_t k = key_ + other.key_;
  if (k & kGuardBits) throw std::overflow_error("monomial exponent exceeds 31");
  return Monomial(k);
}

// ------------------------------------------------------------- AmbientPoly

AmbientPoly::AmbientPoly(int nvars) : nvars_(nvars) {
  if (nvars < 1 || nvars > Monomial::kMaxVariables) throw std::invalid_argument("unsupported number of variables");
}

AmbientPoly AmbientPoly::constant(int nvars, const Rational& c) { return monomial(nvars, Monomial(), c); }

AmbientPoly AmbientPoly::coordinate(int nvars, int i) {
  if (i < 0 || i >= nvars) throw std::invalid_argument("coordinate index out of range");
  return monomial(nvars, Monomial::variable(i), 1);
}

AmbientPoly AmbientPoly::monomial(int nvars, Monomial m, const Rational& c) {
  AmbientPoly p(nvars);
  if (c == 0) return p;
  Rational q = c;
  q.canonicalize();
  p.monos_.push_back(m);
  p.nums_.push_back(q.get_num());
  p.den_ = q.get_den();
  return p;
}

AmbientPoly AmbientPoly::radius_squared(int nvars) {
  AmbientPoly p(nvars);
  for (int i = 0; i < nvars; ++i) {
    p.monos_.push_back(Monomial::variable(i, 2));
    p.nums_.push_back(1);
  }
  return p;
}

AmbientPoly AmbientPoly::from_terms(int nvars, const std::vector<std::pair<Monomial, Rational>>& terms) {
  AmbientPoly p(nvars);
  Integer l = 1;
  for (const auto& t : terms) {
    for (int v = nvars; v < Monomial::kMaxVariables; ++v) {
      if (t.first.exponent(v) != 0) throw std::invalid_argument("monomial uses a variable outside the space");
    }
    if (t.second != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.second.get_den_mpz_t());
  }
  std::vector<std::pair<std::uint64_t, Integer>> scaled;
  scaled.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.second == 0) continue;
    scaled.emplace_back(t.first.key(), t.second.get_num() * (l / t.second.get_den()));
  }
  std::sort(scaled.begin(), scaled.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < scaled.size();) {
    Integer acc = scaled[i].second;
    std::size_t j = i + 1;
    while (j < scaled.size() && scaled[j].first == scaled[i].first) acc += scaled[j++].second;
    if (acc != 0) {
      p.monos_.emplace_back(scaled[i].first);
      p.nums_.push_back(std::move(acc));
    }
    i = j;
  }
  p.den_ = l;
  p.normalize();
  return p;
}

void AmbientPoly::normalize() {
  if (monos_.empty()) {
    den_ = 1;
    return;
  }
  if (den_ == 1) return;
  Integer g = den_;
  for (const auto& v : nums_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) return;
  }
  for (auto& v : nums_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
}

void AmbientPoly::check_same_space(const AmbientPoly& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("polynomials live in different ambient spaces");
}

int AmbientPoly::degree() const {
  int d = -1;
  for (auto m : monos_) d = std::max(d, m.degree());
  return d;
}

bool AmbientPoly::is_homogeneous() const {
  if (monos_.empty()) return true;
  const int d = monos_.front().degree();
  return std::all_of(monos_.begin(), monos_.end(), [d](Monomial m) { return m.degree() == d; });
}

Rational AmbientPoly::coefficient_at(std::size_t i) const {
  Rational q(nums_[i], den_);
  q.canonicalize();
  return q;
}

Rational AmbientPoly::coefficient(Monomial m) const {
  auto it = std::lower_bound(monos_.begin(), monos_.end(), m);
  if (it == monos_.end() || !(*it == m)) return 0;
  return coefficient_at(static_cast<std::size_t>(it - monos_.begin()));
}

AmbientPoly AmbientPoly::homogeneous_part(int d) const {
  AmbientPoly out(nvars_);
  out.den_ = den_;
  for (std::size_t i = 0; i < size(); ++i) {
    if (monos_[i].degree() == d) {
      out.monos_.push_back(monos_[i]);
      out.nums_.push_back(nums_[i]);
    }
  }
  out.normalize();
  return out;
}

std::vector<AmbientPoly> AmbientPoly::homogeneous_parts() const {
  const int deg = degree();
  std::vector<AmbientPoly> parts(static_cast<std::size_t>(deg + 1), AmbientPoly(nvars_));
  for (auto& p : parts) p.den_ = den_;
  for (std::size_t i = 0; i < size(); ++i) {
    auto& p = parts[static_cast<std::size_t>(monos_[i].degree())];
    p.monos_.push_back(monos_[i]);
    p.nums_.push_back(nums_[i]);
  }
  for (auto& p : parts) p.normalize();
  return parts;
}

AmbientPoly AmbientPoly::partial(int i) const {
  if (i < 0 || i >= nvars_) throw std::invalid_argument("coordinate index out of range");
  AmbientPoly out(nvars_);
  out.den_ = den_;
  const std::uint64_t unit = std::uint64_t{1} << (Monomial::kBits * i);
  for (std::size_t t = 0; t < size(); ++t) {
    const int e = monos_[t].exponent(i);
    if (e == 0) continue;
    // Subtracting the same unit from every surviving key keeps the order.
    out.monos_.emplace_back(monos_[t].key() - unit);
    out.nums_.push_back(nums_[t] * e);
  }
  out.normalize();
  return out;
}

AmbientPoly AmbientPoly::times_coordinate(int i) const {
  if (i < 0 || i >= nvars_) throw std::invalid_argument("coordinate index out of range");
  AmbientPoly out(*this);
  const Monomial unit = Monomial::variable(i);
  for (auto& m : out.monos_) m = m * unit;
  return out;
}

AmbientPoly AmbientPoly::euler() const {
  return scale_by_degree([](int d) { return d; });
}

AmbientPoly AmbientPoly::operator-() const {
  AmbientPoly out(*this);
  for (auto& v : out.nums_) v = -v;
  return out;
}

AmbientPoly& AmbientPoly::operator+=(const AmbientPoly& o) {
  check_same_space(o);
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  Integer l;
  mpz_lcm(l.get_mpz_t(), den_.get_mpz_t(), o.den_.get_mpz_t());
  const Integer fa = l / den_;
  const Integer fb = l / o.den_;
  std::vector<Monomial> monos;
  std::vector<Integer> nums;
  monos.reserve(size() + o.size());
  nums.reserve(size() + o.size());
  std::size_t i = 0, j = 0;
  while (i < size() || j < o.size()) {
    if (j == o.size() || (i < size() && monos_[i] < o.monos_[j])) {
      monos.push_back(monos_[i]);
      nums.push_back(fa == 1 ? nums_[i] : Integer(nums_[i] * fa));
      ++i;
    } else if (i == size() || o.monos_[j] < monos_[i]) {
      monos.push_back(o.monos_[j]);
      nums.push_back(fb == 1 ? o.nums_[j] : Integer(o.nums_[j] * fb));
      ++j;
    } else {
      Integer v = nums_[i] * fa + o.nums_[j] * fb;
      if (v != 0) {
        monos.push_back(monos_[i]);
        nums.push_back(std::move(v));
      }
      ++i;
      ++j;
    }
  }
  monos_ = std::move(monos);
  nums_ = std::move(nums);
  den_ = l;
  normalize();
  return *this;
}

AmbientPoly& AmbientPoly::operator-=(const AmbientPoly& o) { return *this += -o; }

AmbientPoly& AmbientPoly::operator*=(const Rational& c) {
  if (c == 0) {
    monos_.clear();
    nums_.clear();
    den_ = 1;
    return *this;
  }
  if (c == 1) return *this;
  Rational q = c;
  q.canonicalize();
  if (q.get_num() != 1) {
    for (auto& v : nums_) v *= q.get_num();
  }
  den_ *= q.get_den();
  normalize();
  return *this;
}

AmbientPoly operator*(const AmbientPoly& a, const AmbientPoly& b) {
  ProductAccumulator acc(a.nvars());
  acc.add(a, b);
  return acc.result();
}

bool operator==(const AmbientPoly& a, const AmbientPoly& b) {
  return a.nvars_ == b.nvars_ && a.monos_ == b.monos_ && a.den_ == b.den_ && a.nums_ == b.nums_;
}

double AmbientPoly::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
  const double inv_den = 1.0 / den_.get_d();
  double total = 0.0;
  for (std::size_t t = 0; t < size(); ++t) {
    double term = nums_[t].get_d() * inv_den;
    for (int i = 0; i < nvars_; ++i) {
      for (int e = monos_[t].exponent(i); e > 0; --e) term *= x[static_cast<std::size_t>(i)];
    }
    total += term;
  }
  return total;
}

Rational AmbientPoly::evaluate(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
  Rational total = 0;
  for (std::size_t t = 0; t < size(); ++t) {
    Rational term(nums_[t]);
    for (int i = 0; i < nvars_; ++i) {
      for (int e = monos_[t].exponent(i); e > 0; --e) term *= x[static_cast<std::size_t>(i)];
    }
    total += term;
  }
  total /= Rational(den_);
  return total;
}

std::string AmbientPoly::to_string() const {
  if (is_zero()) return "0";
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    const int da = monos_[a].degree(), db = monos_[b].degree();
    if (da != db) return da > db;
    return monos_[b] < monos_[a];
  });
  std::string out;
  bool first = true;
  for (std::size_t idx : order) {
    Rational c = coefficient_at(idx);
    if (first) {
      out += confsphere::to_string(c);
    } else {
      out += c < 0 ? " - " : " + ";
      out += confsphere::to_string(abs(c));
    }
    first = false;
    if (monos_[idx].degree() == 0) continue;
    out += " *";
    for (int i = 0; i < nvars_; ++i) {
      const int e = monos_[idx].exponent(i);
      if (e == 0) continue;
      out += " x" + std::to_string(i);
      if (e > 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(int nvars, std::string_view text) : nvars_(nvars), text_(text) {}

  AmbientPoly run() {
    std::vector<std::pair<Monomial, Rational>> terms;
    skip();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      terms.push_back(term(sign));
      skip();
    }
    return AmbientPoly::from_terms(nvars_, terms);
  }

 private:
  std::pair<Monomial, Rational> term(int sign) {
    Rational coef = 1;
    bool have_coef = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      const std::size_t start = pos_;
      while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/')) ++pos_;
      coef = parse_rational(text_.substr(start, pos_ - start));
      have_coef = true;
      skip();
      if (peek() == '*') {
        ++pos_;
        skip();
      }
    }
    std::vector<int> exps(static_cast<std::size_t>(nvars_), 0);
    bool have_factor = false;
    while (peek() == 'x') {
      ++pos_;
      const int var = integer();
      if (var >= nvars_) fail("variable index out of range");
      int e = 1;
      skip();
      if (peek() == '^') {
        ++pos_;
        skip();
        e = integer();
      }
      exps[static_cast<std::size_t>(var)] += e;
      have_factor = true;
      skip();
      if (peek() == '*') {
        ++pos_;
        skip();
      }
    }
    if (!have_coef && !have_factor) fail("expected a term");
    return {Monomial::from_exponents(exps), sign < 0 ? Rational(-coef) : coef};
  }

  int integer() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_ || pos_ - start > 4) fail("expected a small integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  int nvars_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

AmbientPoly AmbientPoly::parse(int nvars, std::string_view text) {
  AmbientPoly probe(nvars);  // validates nvars
  return PolyParser(nvars, text).run();
}

// ------------------------------------------------------ ProductAccumulator

void ProductAccumulator::add(const AmbientPoly& a, const AmbientPoly& b, const Rational& weight) {
  if (a.nvars() != nvars_ || b.nvars() != nvars_) throw std::invalid_argument("polynomials live in different ambient spaces");
  if (a.is_zero() || b.is_zero() || weight == 0) return;
  check_product_exponents(a, b);
  items_.push_back({&a, &b, weight});
}

AmbientPoly ProductAccumulator::result() const {
  AmbientPoly out(nvars_);
  if (items_.empty()) return out;

  // Bring every item to the common denominator l; item k then contributes
  // mult_k * numA * numB.
  std::vector<Integer> dens(items_.size());
  Integer l = 1;
  for (std::size_t k = 0; k < items_.size(); ++k) {
    Rational w = items_[k].weight;
    w.canonicalize();
    dens[k] = items_[k].a->den_ * items_[k].b->den_ * w.get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), dens[k].get_mpz_t());
  }
  std::vector<Integer> mult(items_.size());
  Integer bound = 0;
  bool small = true;
  std::size_t expected = 0;
  int max_deg = 0;
  for (std::size_t k = 0; k < items_.size(); ++k) {
    Rational w = items_[k].weight;
    w.canonicalize();
    mult[k] = w.get_num() * (l / dens[k]);
    bound += abs(mult[k]) * abs_sum(*items_[k].a) * abs_sum(*items_[k].b);
    small = small && mult[k].fits_slong_p() && numerators_fit_long(*items_[k].a) && numerators_fit_long(*items_[k].b);
    expected += items_[k].a->size() * items_[k].b->size();
    max_deg = std::max(max_deg, items_[k].a->degree() + items_[k].b->degree());
  }
  expected = std::min(expected, monomial_count_bound(nvars_, max_deg));
  small = small && mpz_sizeinbase(bound.get_mpz_t(), 2) <= 125;

  std::vector<std::pair<std::uint64_t, Integer>> collected;
  if (small) {
    MonomialTable<__int128> table(expected);
    std::vector<std::uint64_t> bkeys;
    std::vector<long> bvals;
    for (std::size_t k = 0; k < items_.size(); ++k) {
      const AmbientPoly& a = *items_[k].a;
      const AmbientPoly& b = *items_[k].b;
      const long m = mult[k].get_si();
      bkeys.resize(b.size());
      bvals.resize(b.size());
      for (std::size_t j = 0; j < b.size(); ++j) {
        bkeys[j] = b.monos_[j].key();
        bvals[j] = b.nums_[j].get_si();
      }
      for (std::size_t i = 0; i < a.size(); ++i) {
        const __int128 ai = static_cast<__int128>(a.nums_[i].get_si()) * m;
        const std::uint64_t ka = a.monos_[i].key();
        for (std::size_t j = 0; j < bkeys.size(); ++j) table.at(ka + bkeys[j]) += ai * bvals[j];
      }
    }
    table.for_each([&](std::uint64_t key, const __int128& v) {
      if (v != 0) collected.emplace_back(key, from_int128(v));
    });
  } else {
    MonomialTable<Integer> table(expected);
    Integer ai;
    for (std::size_t k = 0; k < items_.size(); ++k) {
      const AmbientPoly& a = *items_[k].a;
      const AmbientPoly& b = *items_[k].b;
      for (std::size_t i = 0; i < a.size(); ++i) {
        ai = a.nums_[i] * mult[k];
        const std::uint64_t ka = a.monos_[i].key();
        for (std::size_t j = 0; j < b.size(); ++j) {
          Integer& slot = table.at(ka + b.monos_[j].key());
          mpz_addmul(slot.get_mpz_t(), ai.get_mpz_t(), b.nums_[j].get_mpz_t());
        }
      }
    }
    table.for_each([&](std::uint64_t key, const Integer& v) {
      if (v != 0) collected.emplace_back(key, v);
    });
  }
  std::sort(collected.begin(), collected.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  out.monos_.reserve(collected.size());
  out.nums_.reserve(collected.size());
  for (auto& [key, v] : collected) {
    out.monos_.emplace_back(key);
    out.nums_.push_back(std::move(v));
  }
  out.den_ = l;
  out.normalize();
  return out;
}

// ------------------------------------------------------------ free helpers

AmbientPoly add(const AmbientPoly& a, const AmbientPoly& b) { return a + b; }

AmbientPoly mul(const AmbientPoly& a, const AmbientPoly& b) { return a * b; }

std::vector<AmbientPoly> ambient_gradient(const AmbientPoly& p) {
  std::vector<AmbientPoly> g;
  g.reserve(static_cast<std::size_t>(p.nvars()));
  for (int i = 0; i < p.nvars(); ++i) g.push_back(p.partial(i));
  return g;
}

AmbientPoly ambient_laplacian(const AmbientPoly& p) {
  AmbientPoly out(p.nvars());
  for (int i = 0; i < p.nvars(); ++i) out += p.partial(i).partial(i);
  return out;
}

}  // namespace confsphere
