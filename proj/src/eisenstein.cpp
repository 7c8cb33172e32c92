#include "borcherds/eisenstein.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace borcherds {

using nlohmann::json;

Rational good_prime_factor(int m, const BigInt& det, const Rational& t, std::int64_t p) {
  const BigInt P(p);
  const BigInt num = numerator(t), den = denominator(t);
  const int a = ord_p(num, P);
  if (a == kInfiniteValuation) throw std::invalid_argument("good_prime_factor: t must be nonzero");
  const BigInt u = num / pow(P, static_cast<unsigned>(a)) * den;
  const Rational pr(p);
  if (m % 2 == 0) {
    const int k = m / 2;
    const int eps = kronecker((k % 2 ? -det : det), P);
    Rational total = 1;
    for (int r = 1; r <= a + 1; ++r) {
      const Rational c = r <= a ? pow(pr, r) - pow(pr, r - 1) : -pow(pr, a);
      const int sign = (r % 2 == 0) ? 1 : eps;
      total += sign * c * pow(pr, -r * k);
    }
    return total;
  }
  Rational total = 1;
  for (int j = 1; j <= a / 2; ++j) total += (pow(pr, 2 * j) - pow(pr, 2 * j - 1)) * pow(pr, -j * m);
  if ((a + 1) % 2 == 0) {
    total -= pow(pr, a) * pow(pr, -(a + 1) * m / 2);
  } else {
    const int s = (m - 1) / 2;
    const int chi = kronecker((s % 2 ? -2 : 2) * det * u, P);
    total += chi * pow(pr, (2 * a + 1 - (a + 1) * m) / 2);
  }
  return total;
}

// ---------------------------------------------------------------------------

EisensteinSeries::EisensteinSeries(const LatticeSpec& spec, CountBudget budget)
    : EisensteinSeries(spec.id, spec.gram, budget) {}

EisensteinSeries::EisensteinSeries(std::string id, const GramMatrix& gram, CountBudget budget)
    : id_(std::move(id)), gram_(gram), group_(gram), budget_(budget) {
  const auto sig = gram.signature();
  if (sig.positive != 2) throw std::invalid_argument("EisensteinSeries: signature must be (2, n)");
  if (gram.rank() < 3) throw UnsupportedRank("EisensteinSeries: rank must be at least 3");
  for (const auto& p : prime_divisors(2 * gram.determinant())) bad_primes_.push_back(static_cast<std::int64_t>(p));
}

DensityEngine& EisensteinSeries::engine(std::int64_t p) {
  auto it = engines_.find(p);
  if (it == engines_.end()) it = engines_.emplace(p, std::make_unique<DensityEngine>(gram_, p, budget_)).first;
  return *it->second;
}

SymbolicConstant EisensteinSeries::l_value(int s, const BigInt& D) {
  auto key = std::make_pair(s, D);
  auto it = l_cache_.find(key);
  if (it == l_cache_.end()) it = l_cache_.emplace(key, l_value_exact(s, QuadChar(D))).first;
  return it->second;
}

SymbolicConstant EisensteinSeries::coefficient_symbolic(const FqmElement& gamma, const Rational& n) {
  if (n < 0) throw std::invalid_argument("coefficient: n must be nonnegative");
  if (denominator(n + gamma.qval) != 1) return SymbolicConstant(0);
  if (n == 0) return SymbolicConstant(gamma.order == 1 ? 1 : 0);

  const int m = static_cast<int>(gram_.rank());
  const BigInt& det = gram_.determinant();
  const BigInt d = abs(det);
  const Rational t = -n;
  const auto lift = group_.lift(gamma);

  std::vector<BigInt> primes;
  for (auto p : bad_primes_) primes.emplace_back(p);
  for (const auto& p : prime_divisors(numerator(n * Rational(d * d))))
    if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
  std::sort(primes.begin(), primes.end());

  Rational local = 1;
  for (const auto& P : primes) {
    const auto p = static_cast<std::int64_t>(P);
    const bool bad = std::find(bad_primes_.begin(), bad_primes_.end(), p) != bad_primes_.end();
    local *= bad ? engine(p).density(lift, n) : good_prime_factor(m, det, t, p);
    if (local == 0) return SymbolicConstant(0);
  }

  const Rational k = weight();
  // (-1)^{b+/2} 2^k pi^k n^{k-1} / (sqrt(d) Gamma(k)) with b+ = 2
  SymbolicConstant prefactor(-1);
  if (m % 2 == 0) {
    const int kk = m / 2;
    prefactor = prefactor * SymbolicConstant(pow(Rational(2), kk) * pow(n, kk - 1), 2 * kk);
  } else {
    const int s = (m - 1) / 2;
    prefactor = prefactor * SymbolicConstant(pow(Rational(2), s) * pow(n, s - 1), m, 2) * SymbolicConstant::sqrt_of(n);
  }
  prefactor = prefactor / SymbolicConstant::sqrt_of(Rational(d)) / gamma_exact(k);

  SymbolicConstant global(1);
  if (m % 2 == 0) {
    const int kk = m / 2;
    const BigInt D = field_discriminant(kk % 2 ? -det : det);
    const QuadChar chi(D);
    global = SymbolicConstant(1) / l_value(kk, D);
    Rational euler = 1;
    for (const auto& p : primes) euler /= 1 - chi(p) * pow(Rational(p), -kk);
    global = global * SymbolicConstant(euler);
  } else {
    const int s = (m - 1) / 2;
    const Rational c0 = Rational(s % 2 ? -2 : 2) * Rational(det) * t * Rational(d * d);
    if (denominator(c0) != 1) throw std::logic_error("coefficient: non-integral discriminant argument");
    const BigInt D = field_discriminant(numerator(c0));
    const QuadChar chi(D);
    global = l_value(s, D) / zeta_exact_even(2 * s);
    Rational euler = 1;
    for (const auto& p : primes)
      euler *= (1 - chi(p) * pow(Rational(p), -s)) / (1 - pow(Rational(p), -2 * s));
    global = global * SymbolicConstant(euler);
  }
  return prefactor * global * SymbolicConstant(local);
}

Rational EisensteinSeries::coefficient(const FqmElement& gamma, const Rational& n) {
  auto key = std::make_pair(gamma.coords, n);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  // a_E(gamma, n) = a_E(-gamma, n)
  if (cache_) {
    if (auto hit = cache_->find(id_, gamma.coords, n)) return memo_.emplace(key, *hit).first->second;
  }
  Rational r;
  auto nit = memo_.find(std::make_pair(group_.negate(gamma).coords, n));
  if (nit != memo_.end()) {
    r = nit->second;
  } else {
    const SymbolicConstant value = coefficient_symbolic(gamma, n);
    if (!value.is_rational())
      throw NonCancellation("coefficient " + id_ + " " + to_string(gamma) + " n = " + to_string(n) + ": " +
                            value.to_string());
    r = value.to_rational();
  }
  if (cache_) cache_->store(id_, gamma.coords, n, r);
  return memo_.emplace(key, r).first->second;
}

// ---------------------------------------------------------------------------
// Tables

std::optional<Rational> EisensteinTable::lookup(const FqmElement& gamma, const Rational& n) const {
  auto it = coefficients.find(gamma.coords);
  if (it == coefficients.end()) return std::nullopt;
  for (const auto& [e, v] : it->second)
    if (e == n) return v;
  return std::nullopt;
}

std::vector<Rational> exponents_up_to(const Rational& qval, const Rational& cap) {
  std::vector<Rational> out;
  Rational n = frac(-qval);
  if (n == 0) n = 1;
  for (; floor(n) <= floor(cap); n += 1) out.push_back(n);
  return out;
}

EisensteinTable expansion_table(EisensteinSeries& series, const Rational& cap) {
  if (cap < 1) throw std::invalid_argument("expansion_table: cap must be at least 1");
  EisensteinTable table;
  table.id = series.id();
  table.cap = cap;
  table.elements = series.group().elements();
  for (const auto& g : table.elements) {
    auto& row = table.coefficients[g.coords];
    for (const auto& n : exponents_up_to(g.qval, cap)) row.emplace_back(n, series.coefficient(g, n));
  }
  // group by (order, expansion); elements are already in lexicographic order
  std::map<std::pair<std::int64_t, std::vector<std::pair<Rational, Rational>>>, std::size_t> index;
  for (const auto& g : table.elements) {
    auto key = std::make_pair(g.order, table.coefficients[g.coords]);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, table.groups.size());
      table.groups.push_back(ExpansionGroup{g, {g}, key.second});
    } else {
      table.groups[it->second].members.push_back(g);
    }
  }
  return table;
}

namespace {

std::string coords_string(const std::vector<std::int64_t>& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

}  // namespace

std::string table_to_csv(const EisensteinTable& table) {
  std::ostringstream out;
  out << "gamma,n,coefficient\n";
  for (const auto& [coords, row] : table.coefficients)
    for (const auto& [n, v] : row) out << '"' << coords_string(coords) << "\"," << to_string(n) << ',' << to_string(v) << '\n';
  return out.str();
}

std::string table_to_json(const EisensteinTable& table) {
  json rows = json::array();
  for (const auto& [coords, row] : table.coefficients)
    for (const auto& [n, v] : row) rows.push_back({{"gamma", coords}, {"n", to_string(n)}, {"coefficient", to_string(v)}});
  json out = {{"id", table.id}, {"cap", to_string(table.cap)}, {"coefficients", rows}};
  return out.dump(2) + "\n";
}

std::string groups_to_json(const EisensteinTable& table) {
  json groups = json::array();
  for (const auto& g : table.groups) {
    json expansion = json::array();
    for (const auto& [n, v] : g.expansion)
      if (v != 0) expansion.push_back({{"n", to_string(n)}, {"coefficient", to_string(v)}});
    groups.push_back({{"representative", g.representative.coords},
                      {"order", g.representative.order},
                      {"q_value", to_string(g.representative.qval)},
                      {"size", g.size()},
                      {"expansion", expansion}});
  }
  json out = {{"id", table.id}, {"cap", to_string(table.cap)}, {"groups", groups}};
  return out.dump(2) + "\n";
}

std::string format_expansion(const std::vector<std::pair<Rational, Rational>>& expansion) {
  std::string s;
  for (const auto& [n, v] : expansion) {
    if (v == 0) continue;
    if (s.empty())
      s += v < 0 ? "-" : "";
    else
      s += v < 0 ? " - " : " + ";
    s += to_string(abs(v)) + " q^" + to_string(n);
  }
  return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------
// Cache

CoefficientCache::CoefficientCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      Key key{j.at("id").get<std::string>(), j.at("gamma").get<std::vector<std::int64_t>>(),
              parse_rational(j.at("n").get<std::string>())};
      entries_[key] = parse_rational(j.at("value").get<std::string>());
    } catch (const std::exception& e) {
      throw std::runtime_error(path_ + ":" + std::to_string(lineno) + ": invalid cache line: " + e.what());
    }
  }
}

std::optional<Rational> CoefficientCache::find(const std::string& id, const std::vector<std::int64_t>& coords,
                                               const Rational& n) const {
  auto it = entries_.find(Key{id, coords, n});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CoefficientCache::store(const std::string& id, const std::vector<std::int64_t>& coords, const Rational& n,
                             const Rational& value) {
  Key key{id, coords, n};
  if (entries_.count(key)) return;
  entries_[key] = value;
  std::ofstream out(path_, std::ios::app);
  out << json{{"id", id}, {"gamma", coords}, {"n", to_string(n)}, {"value", to_string(value)}}.dump() << '\n';
}

}  // namespace borcherds
