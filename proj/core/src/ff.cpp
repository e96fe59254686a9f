#include "hecke/ff.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "hecke/error.hpp"
#include "hecke/poly.hpp"

namespace hecke::ff {

using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 m) {
  i64 t = 0, nt = 1;
  i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
  while (nr != 0) {
    i64 q = r / nr;
    i64 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) raise(Errc::InvalidArgument, "invmod: not a unit");
  return reduce(t, m);
}

u64 reduce(i64 a, u64 m) {
  i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

u64 mult_order(u64 a, u64 m) {
  if (m == 1) return 1;
  u64 x = a % m;
  for (u64 k = 1; k <= m; ++k) {
    if (x == 1) return k;
    x = mulmod(x, a, m);
  }
  raise(Errc::InvalidArgument, "mult_order: not a unit");
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Polynomials over F_p as raw coefficient vectors, lowest degree first.
namespace fp {

using Vec = std::vector<u64>;

void trim(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Vec mul(const Vec& a, const Vec& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u128> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<u128>(a[i]) * b[j];
  }
  Vec r(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<u64>(acc[i] % p);
  trim(r);
  return r;
}

// Remainder modulo a nonzero polynomial m.
Vec rem(Vec a, const Vec& m, u64 p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 inv_lead = invmod(m.back(), p);
  while (a.size() > dm) {
    const std::size_t shift = a.size() - 1 - dm;
    const u64 c = mulmod(a.back(), inv_lead, p);
    for (std::size_t j = 0; j <= dm; ++j) {
      a[shift + j] = (a[shift + j] + p - mulmod(c, m[j], p)) % p;
    }
    trim(a);
  }
  return a;
}

Vec sub(Vec a, const Vec& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

Vec gcd(Vec a, Vec b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Vec r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Vec powmod(Vec base, u64 e, const Vec& m, u64 p) {
  Vec r{1};
  base = rem(base, m, p);
  while (e) {
    if (e & 1) r = rem(mul(r, base, p), m, p);
    base = rem(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

// Rabin irreducibility test for a monic polynomial of degree k.
bool irreducible(const Vec& f, u64 p) {
  const int k = static_cast<int>(f.size()) - 1;
  std::vector<Vec> frob(static_cast<std::size_t>(k) + 1);
  frob[0] = rem(Vec{0, 1}, f, p);
  for (int i = 1; i <= k; ++i) frob[i] = powmod(frob[i - 1], p, f, p);
  Vec x = rem(Vec{0, 1}, f, p);
  if (sub(frob[k], x, p) != Vec{}) return false;
  for (int q = 2; q <= k; ++q) {
    if (k % q != 0) continue;
    bool prime = true;
    for (int r = 2; r * r <= q; ++r) prime = prime && (q % r != 0);
    if (!prime) continue;
    Vec g = gcd(f, sub(frob[k / q], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

// Inverse of a modulo m via the extended Euclidean algorithm.
Vec inverse(const Vec& a, const Vec& m, u64 p) {
  Vec r0 = m, r1 = a;
  trim(r1);
  Vec s0{}, s1{1};
  while (!r1.empty()) {
    Vec q;
    Vec r = r0;
    {
      const std::size_t db = r1.size() - 1;
      const u64 inv_lead = invmod(r1.back(), p);
      q.assign(r.size() >= r1.size() ? r.size() - db : 0, 0);
      while (r.size() > db) {
        const std::size_t shift = r.size() - 1 - db;
        const u64 c = mulmod(r.back(), inv_lead, p);
        q[shift] = c;
        for (std::size_t j = 0; j <= db; ++j) r[shift + j] = (r[shift + j] + p - mulmod(c, r1[j], p)) % p;
        trim(r);
      }
    }
    trim(q);
    Vec s = sub(s0, mul(q, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.size() != 1) raise(Errc::InvalidArgument, "element is not invertible");
  const u64 c = invmod(r0[0], p);
  for (auto& v : s0) v = mulmod(v, c, p);
  return s0;
}

}  // namespace fp

struct FieldData {
  u64 p = 0;
  int k = 0;
  std::vector<u64> modulus;
  mpz_class order;
  Elem nonresidue;
};

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<u64, int>, std::unique_ptr<FieldData>>& registry() {
  static std::map<std::pair<u64, int>, std::unique_ptr<FieldData>> r;
  return r;
}

std::vector<u64> smallest_irreducible(u64 p, int k) {
  if (k == 1) return {0, 1};
  std::vector<u64> f(static_cast<std::size_t>(k) + 1, 0);
  f[static_cast<std::size_t>(k)] = 1;
  // Count through the lower coefficients in base p, constant term fastest.
  while (true) {
    if (f[0] != 0 && fp::irreducible(f, p)) return f;
    int i = 0;
    while (i < k) {
      if (++f[static_cast<std::size_t>(i)] < p) break;
      f[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == k) raise(Errc::InvalidArgument, "no irreducible polynomial found");
  }
}

void check_same(const Field& a, const Field& b) {
  if (!(a == b)) raise(Errc::InvalidArgument, "field mismatch: " + a.describe() + " vs " + b.describe());
}

}  // namespace

Field make_field(u64 p, int k) {
  if (k < 1) raise(Errc::DegreeZero, "extension degree must be at least 1");
  if (p >= (1ULL << 31)) raise(Errc::InvalidArgument, "characteristic must be below 2^31");
  if (!is_prime(p)) raise(Errc::NonPrime, std::to_string(p) + " is not prime");
  std::lock_guard lock(registry_mutex());
  auto& reg = registry();
  auto it = reg.find({p, k});
  if (it != reg.end()) return Field(it->second.get());
  auto data = std::make_unique<FieldData>();
  data->p = p;
  data->k = k;
  data->modulus = smallest_irreducible(p, k);
  mpz_ui_pow_ui(data->order.get_mpz_t(), p, static_cast<unsigned long>(k));
  Field f(data.get());
  if (p != 2) {
    const mpz_class half = (data->order - 1) / 2;
    for (mpz_class idx = 2;; ++idx) {
      Elem c = f.decode(idx);
      if (!c.pow(half).is_one()) {
        data->nonresidue = c;
        break;
      }
    }
  }
  reg.emplace(std::make_pair(p, k), std::move(data));
  return f;
}

u64 Field::p() const { return data_->p; }
int Field::degree() const { return data_->k; }
const std::vector<u64>& Field::modulus() const { return data_->modulus; }
const mpz_class& Field::order() const { return data_->order; }
const Elem& Field::nonresidue() const {
  if (data_->p == 2) raise(Errc::UnsupportedCharacteristic, "no quadratic non-residue in characteristic 2");
  return data_->nonresidue;
}

Elem Field::zero() const { return Elem(*this, std::vector<u64>(static_cast<std::size_t>(degree()), 0)); }

Elem Field::one() const { return from_int(1); }

Elem Field::from_int(i64 v) const {
  std::vector<u64> c(static_cast<std::size_t>(degree()), 0);
  c[0] = reduce(v, p());
  return Elem(*this, std::move(c));
}

Elem Field::from_coeffs(std::vector<u64> coeffs) const {
  coeffs.resize(static_cast<std::size_t>(degree()), 0);
  for (auto& v : coeffs) v %= p();
  return Elem(*this, std::move(coeffs));
}

Elem Field::gen() const {
  if (degree() == 1) return zero();
  std::vector<u64> c(static_cast<std::size_t>(degree()), 0);
  c[1] = 1;
  return Elem(*this, std::move(c));
}

Elem Field::decode(const mpz_class& index) const {
  std::vector<u64> c(static_cast<std::size_t>(degree()), 0);
  mpz_class n = index;
  const mpz_class pp(static_cast<unsigned long>(p()));
  for (auto& v : c) {
    mpz_class r = n % pp;
    v = r.get_ui();
    n /= pp;
  }
  return Elem(*this, std::move(c));
}

Elem Field::random(std::mt19937_64& rng) const {
  std::uniform_int_distribution<u64> dist(0, p() - 1);
  std::vector<u64> c(static_cast<std::size_t>(degree()));
  for (auto& v : c) v = dist(rng);
  return Elem(*this, std::move(c));
}

std::string Field::describe() const {
  if (!data_) return "F_?";
  return "F_" + std::to_string(p()) + "^" + std::to_string(degree());
}

Elem::Elem(Field f, std::vector<u64> coeffs) : field_(f), c_(std::move(coeffs)) {}

bool Elem::is_zero() const {
  for (u64 v : c_) {
    if (v) return false;
  }
  return true;
}

bool Elem::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (c_[i]) return false;
  }
  return true;
}

bool Elem::in_prime_field() const {
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (c_[i]) return false;
  }
  return true;
}

Elem Elem::operator-() const {
  Elem r = *this;
  const u64 p = field_.p();
  for (auto& v : r.c_) v = v ? p - v : 0;
  return r;
}

Elem& Elem::operator+=(const Elem& o) {
  check_same(field_, o.field_);
  const u64 p = field_.p();
  for (std::size_t i = 0; i < c_.size(); ++i) {
    u64 s = c_[i] + o.c_[i];
    c_[i] = s >= p ? s - p : s;
  }
  return *this;
}

Elem& Elem::operator-=(const Elem& o) {
  check_same(field_, o.field_);
  const u64 p = field_.p();
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] >= o.c_[i] ? c_[i] - o.c_[i] : c_[i] + p - o.c_[i];
  return *this;
}

Elem& Elem::operator*=(const Elem& o) {
  check_same(field_, o.field_);
  const u64 p = field_.p();
  const std::size_t k = c_.size();
  if (k == 1) {
    c_[0] = mulmod(c_[0], o.c_[0], p);
    return *this;
  }
  std::vector<u128> acc(2 * k - 1, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) acc[i + j] += static_cast<u128>(c_[i]) * o.c_[j];
  }
  std::vector<u64> r(2 * k - 1);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<u64>(acc[i] % p);
  const auto& m = field_.modulus();
  for (std::size_t i = 2 * k - 2; i >= k; --i) {
    const u64 c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j < k; ++j) r[i - k + j] = (r[i - k + j] + mulmod(p - m[j], c, p)) % p;
  }
  r.resize(k);
  c_ = std::move(r);
  return *this;
}

Elem Elem::scaled(u64 s) const {
  Elem r = *this;
  const u64 p = field_.p();
  s %= p;
  for (auto& v : r.c_) v = mulmod(v, s, p);
  return r;
}

Elem Elem::inv() const {
  if (is_zero()) raise(Errc::InvalidArgument, "inverse of zero");
  const u64 p = field_.p();
  if (c_.size() == 1) return field_.from_int(static_cast<i64>(invmod(c_[0], p)));
  std::vector<u64> r = fp::inverse(c_, field_.modulus(), p);
  return field_.from_coeffs(std::move(r));
}

Elem Elem::pow(const mpz_class& e) const {
  if (e < 0) return inv().pow(mpz_class(-e));
  Elem r = field_.one();
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = r * r;
    if (mpz_tstbit(e.get_mpz_t(), i)) r *= *this;
  }
  return r;
}

Elem Elem::pow(u64 e) const {
  Elem r = field_.one();
  Elem b = *this;
  while (e) {
    if (e & 1) r *= b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

bool Elem::is_square() const {
  if (is_zero() || field_.p() == 2) return true;
  return pow(mpz_class((field_.order() - 1) / 2)).is_one();
}

std::optional<Elem> Elem::sqrt() const {
  if (is_zero()) return *this;
  const mpz_class q = field_.order();
  if (field_.p() == 2) return pow(mpz_class(q / 2));
  if (!is_square()) return std::nullopt;
  mpz_class odd = q - 1;
  int s = 0;
  while (mpz_even_p(odd.get_mpz_t())) {
    odd /= 2;
    ++s;
  }
  Elem z = field_.nonresidue().pow(odd);
  Elem x = pow(mpz_class((odd + 1) / 2));
  Elem t = pow(odd);
  int m = s;
  while (!t.is_one()) {
    int i = 0;
    Elem t2 = t;
    while (!t2.is_one()) {
      t2 = t2 * t2;
      ++i;
    }
    Elem b = z;
    for (int j = 0; j < m - i - 1; ++j) b = b * b;
    x *= b;
    z = b * b;
    t *= z;
    m = i;
  }
  Elem y = -x;
  return y < x ? y : x;
}

mpz_class Elem::encode() const {
  mpz_class n = 0;
  const mpz_class pp(static_cast<unsigned long>(field_.p()));
  for (std::size_t i = c_.size(); i-- > 0;) n = n * pp + mpz_class(static_cast<unsigned long>(c_[i]));
  return n;
}

std::string Elem::str() const {
  if (c_.size() == 1) return std::to_string(c_[0]);
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || c_[i] != 1) os << c_[i];
    if (i >= 1) os << (i == 0 || c_[i] != 1 ? "*" : "") << "z";
    if (i >= 2) os << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

std::strong_ordering operator<=>(const Elem& a, const Elem& b) {
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
  }
  return std::strong_ordering::equal;
}

struct Embedding::Data {
  std::vector<Elem> powers;  // images of gen^i, i < degree of the source
};

namespace {

std::shared_mutex& embed_mutex() {
  static std::shared_mutex m;
  return m;
}

std::map<std::pair<const FieldData*, const FieldData*>, std::unique_ptr<Embedding::Data>>& embed_cache() {
  static std::map<std::pair<const FieldData*, const FieldData*>, std::unique_ptr<Embedding::Data>> c;
  return c;
}

}  // namespace

Embedding::Embedding(Field small, Field big) : small_(small), big_(big) {
  if (small.p() != big.p() || big.degree() % small.degree() != 0) {
    raise(Errc::InvalidArgument, "no embedding " + small.describe() + " -> " + big.describe());
  }
  const auto key = std::make_pair(small.data(), big.data());
  {
    std::shared_lock lock(embed_mutex());
    auto it = embed_cache().find(key);
    if (it != embed_cache().end()) {
      data_ = it->second.get();
      return;
    }
  }
  auto d = std::make_unique<Data>();
  const int a = small.degree();
  if (a == 1) {
    d->powers = {big.one()};
  } else {
    std::vector<Elem> mc;
    for (u64 v : small.modulus()) mc.push_back(big.from_int(static_cast<i64>(v)));
    auto roots = poly_roots(Poly(big, mc));
    Elem theta = roots.front();
    Elem acc = big.one();
    for (int i = 0; i < a; ++i) {
      d->powers.push_back(acc);
      acc *= theta;
    }
  }
  std::unique_lock lock(embed_mutex());
  auto [it, inserted] = embed_cache().emplace(key, std::move(d));
  data_ = it->second.get();
}

Elem Embedding::operator()(const Elem& x) const {
  check_same(x.field(), small_);
  if (small_ == big_) return x;
  Elem r = big_.zero();
  for (std::size_t i = 0; i < data_->powers.size(); ++i) {
    if (x.coeff(static_cast<int>(i))) r += data_->powers[i].scaled(x.coeff(static_cast<int>(i)));
  }
  return r;
}

std::optional<Elem> Embedding::descend(const Elem& y) const {
  check_same(y.field(), big_);
  if (small_ == big_) return y;
  const u64 p = big_.p();
  const std::size_t a = data_->powers.size();
  const std::size_t b = static_cast<std::size_t>(big_.degree());
  // Solve sum_i c_i * powers[i] = y over F_p by Gaussian elimination.
  std::vector<std::vector<u64>> rows(b, std::vector<u64>(a + 1));
  for (std::size_t r = 0; r < b; ++r) {
    for (std::size_t c = 0; c < a; ++c) rows[r][c] = data_->powers[c].coeff(static_cast<int>(r));
    rows[r][a] = y.coeff(static_cast<int>(r));
  }
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < a && rank < b; ++c) {
    std::size_t piv = rank;
    while (piv < b && rows[piv][c] == 0) ++piv;
    if (piv == b) continue;
    std::swap(rows[piv], rows[rank]);
    const u64 inv = invmod(rows[rank][c], p);
    for (auto& v : rows[rank]) v = mulmod(v, inv, p);
    for (std::size_t r = 0; r < b; ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const u64 f = rows[r][c];
      for (std::size_t cc = 0; cc <= a; ++cc) rows[r][cc] = (rows[r][cc] + p - mulmod(f, rows[rank][cc], p)) % p;
    }
    pivot_col.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < b; ++r) {
    if (rows[r][a] != 0) return std::nullopt;
  }
  std::vector<u64> c(a, 0);
  for (std::size_t r = 0; r < rank; ++r) c[pivot_col[r]] = rows[r][a];
  return small_.from_coeffs(std::move(c));
}

}  // namespace hecke::ff
