#include "borcherds/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace borcherds {

// ---------------------------------------------------------------------------
// GramMatrix

BigInt determinant(const Matrix<BigInt>& m) {
  // Bareiss fraction-free elimination.
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Matrix<BigInt> a = m;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      a.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

GramMatrix::GramMatrix(Matrix<BigInt> entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw std::invalid_argument("Gram matrix must be square");
  for (std::size_t i = 0; i < rank(); ++i) {
    if (entries_(i, i) % 2 != 0) throw std::invalid_argument("Gram matrix must have even diagonal");
    for (std::size_t j = 0; j < i; ++j)
      if (entries_(i, j) != entries_(j, i)) throw std::invalid_argument("Gram matrix must be symmetric");
  }
  det_ = borcherds::determinant(entries_);
  if (det_ == 0) throw std::invalid_argument("Gram matrix must be nondegenerate");
}

GramMatrix GramMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  Matrix<BigInt> m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("Gram matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return GramMatrix(std::move(m));
}

Signature GramMatrix::signature() const {
  const std::size_t n = rank();
  Matrix<Rational> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = Rational(entries_(i, j));
  Signature sig;
  // Symmetric elimination; a zero pivot is repaired by e_i +/- e_j.
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t j = k + 1;
      while (j < n && a(k, j) == 0) ++j;
      if (j == n) throw std::logic_error("signature: degenerate form");
      Rational s = a(k, k) + 2 * a(k, j) + a(j, j) != 0 ? Rational(1) : Rational(-1);
      for (std::size_t c = 0; c < n; ++c) a(k, c) += s * a(j, c);
      for (std::size_t r = 0; r < n; ++r) a(r, k) += s * a(r, j);
    }
    const Rational pivot = a(k, k);
    (pivot > 0 ? sig.positive : sig.negative)++;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= a(i, k) * a(k, j) / pivot;
  }
  return sig;
}

Rational GramMatrix::norm(const std::vector<Rational>& x) const {
  Rational total = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (x[i] == 0) continue;
    total += Rational(entries_(i, i)) * x[i] * x[i] / 2;
    for (std::size_t j = i + 1; j < rank(); ++j) total += Rational(entries_(i, j)) * x[i] * x[j];
  }
  return total;
}

std::vector<Rational> GramMatrix::apply(const std::vector<Rational>& x) const {
  std::vector<Rational> out(rank(), Rational(0));
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j)
      if (entries_(i, j) != 0 && x[j] != 0) out[i] += Rational(entries_(i, j)) * x[j];
  return out;
}

GramMatrix GramMatrix::scaled(long factor) const {
  Matrix<BigInt> m = entries_;
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j) m(i, j) *= factor;
  return GramMatrix(std::move(m));
}

GramMatrix GramMatrix::direct_sum(const std::vector<GramMatrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rank();
  Matrix<BigInt> m(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rank(); ++i)
      for (std::size_t j = 0; j < b.rank(); ++j) m(off + i, off + j) = b(i, j);
    off += b.rank();
  }
  return GramMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// DiscriminantGroup

std::string to_string(const FqmElement& g) {
  std::string s = "(";
  for (std::size_t i = 0; i < g.coords.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(g.coords[i]);
  }
  return s + ")";
}

DiscriminantGroup::DiscriminantGroup(const GramMatrix& gram) : gram_(gram) {
  const std::size_t m = gram.rank();
  Matrix<BigInt> a = gram.entries();
  Matrix<BigInt> v = Matrix<BigInt>::identity(m);
  Matrix<BigInt> vinv = Matrix<BigInt>::identity(m);

  auto col_sub = [&](std::size_t j, std::size_t t, const BigInt& q) {  // col_j -= q col_t
    for (std::size_t i = 0; i < m; ++i) {
      a(i, j) -= q * a(i, t);
      v(i, j) -= q * v(i, t);
    }
    for (std::size_t c = 0; c < m; ++c) vinv(t, c) += q * vinv(j, c);
  };
  auto row_sub = [&](std::size_t i, std::size_t t, const BigInt& q) {  // row_i -= q row_t
    for (std::size_t c = 0; c < m; ++c) a(i, c) -= q * a(t, c);
  };

  for (std::size_t t = 0; t < m; ++t) {
    while (true) {
      std::size_t pi = m, pj = m;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < m; ++j)
          if (a(i, j) != 0 && (pi == m || abs(a(i, j)) < abs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == m) throw std::logic_error("discriminant_group: singular Gram matrix");
      a.swap_rows(t, pi);
      if (pj != t) {
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        vinv.swap_rows(t, pj);
      }
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        row_sub(i, t, a(i, t) / a(t, t));
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < m; ++j) {
        if (a(t, j) == 0) continue;
        col_sub(j, t, a(t, j) / a(t, t));
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      bool divisible = true;
      for (std::size_t i = t + 1; i < m && divisible; ++i)
        for (std::size_t j = t + 1; j < m; ++j)
          if (a(i, j) % a(t, t) != 0) {
            for (std::size_t c = 0; c < m; ++c) a(t, c) += a(i, c);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (a(t, t) < 0)
      for (std::size_t c = 0; c < m; ++c) a(t, c) = -a(t, c);
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (a(i, i) == 1) continue;
    const auto d = static_cast<std::int64_t>(a(i, i));
    invariants_.push_back(d);
    kept_rows_.push_back(i);
    std::vector<Rational> lift(m);
    for (std::size_t r = 0; r < m; ++r) lift[r] = Rational(v(r, i), BigInt(d));
    lifts_.push_back(std::move(lift));
    size_ *= static_cast<std::size_t>(d);
    exponent_ = std::lcm(exponent_, d);
  }
  right_inverse_ = vinv;
}

Rational DiscriminantGroup::compute_q(const std::vector<std::int64_t>& coords) const {
  return frac(gram_.norm(lift(FqmElement{coords, 1, 0})));
}

std::int64_t DiscriminantGroup::compute_order(const std::vector<std::int64_t>& coords) const {
  std::int64_t order = 1;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const std::int64_t d = invariants_[i];
    order = std::lcm(order, d / std::gcd(d, coords[i]));
  }
  return order;
}

FqmElement DiscriminantGroup::element(std::vector<std::int64_t> coords) const {
  if (coords.size() != invariants_.size()) throw std::invalid_argument("element: wrong coordinate count");
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = ((coords[i] % invariants_[i]) + invariants_[i]) % invariants_[i];
  FqmElement g;
  g.order = compute_order(coords);
  g.qval = compute_q(coords);
  g.coords = std::move(coords);
  return g;
}

FqmElement DiscriminantGroup::zero() const { return element(std::vector<std::int64_t>(invariants_.size(), 0)); }

std::vector<FqmElement> DiscriminantGroup::elements() const {
  std::vector<FqmElement> out;
  out.reserve(size_);
  std::vector<std::int64_t> c(invariants_.size(), 0);
  while (true) {
    out.push_back(element(c));
    std::size_t i = c.size();
    while (i > 0) {
      --i;
      if (++c[i] < invariants_[i]) break;
      c[i] = 0;
      if (i == 0) return out;
    }
    if (c.empty()) return out;
  }
}

std::vector<Rational> DiscriminantGroup::lift(const FqmElement& g) const {
  std::vector<Rational> x(gram_.rank(), Rational(0));
  for (std::size_t i = 0; i < g.coords.size(); ++i) {
    if (g.coords[i] == 0) continue;
    for (std::size_t r = 0; r < x.size(); ++r) x[r] += lifts_[i][r] * g.coords[i];
  }
  return x;
}

FqmElement DiscriminantGroup::reduce(const std::vector<Rational>& x) const {
  if (x.size() != gram_.rank()) throw std::invalid_argument("reduce: wrong dimension");
  for (const auto& s : gram_.apply(x))
    if (denominator(s) != 1) throw std::invalid_argument("reduce: vector not in the dual lattice");
  std::vector<std::int64_t> coords;
  for (std::size_t k = 0; k < kept_rows_.size(); ++k) {
    Rational c = 0;
    for (std::size_t j = 0; j < x.size(); ++j) c += Rational(right_inverse_(kept_rows_[k], j)) * x[j];
    c *= invariants_[k];
    if (denominator(c) != 1) throw std::logic_error("reduce: non-integral coordinate");
    coords.push_back(static_cast<std::int64_t>(mod(numerator(c), BigInt(invariants_[k]))));
  }
  return element(std::move(coords));
}

FqmElement DiscriminantGroup::add(const FqmElement& a, const FqmElement& b) const {
  std::vector<std::int64_t> c(a.coords.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] + b.coords[i];
  return element(std::move(c));
}

FqmElement DiscriminantGroup::negate(const FqmElement& a) const { return scale(a, -1); }

FqmElement DiscriminantGroup::scale(const FqmElement& a, std::int64_t t) const {
  std::vector<std::int64_t> c(a.coords.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] * t;
  return element(std::move(c));
}

// ---------------------------------------------------------------------------
// Root lattices and the catalog

namespace {

GramMatrix from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<long>> rows(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i) rows[i][i] = 2;
  for (auto [i, j] : edges) rows[i][j] = rows[j][i] = -1;
  return GramMatrix::from_rows(rows);
}

std::vector<std::pair<int, int>> chain(int len) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < len; ++i) e.emplace_back(i, i + 1);
  return e;
}

}  // namespace

GramMatrix root_lattice_A(int n) { return from_edges(n, chain(n)); }

GramMatrix root_lattice_D(int n) {
  if (n < 4) throw std::invalid_argument("D_n needs n >= 4");
  auto e = chain(n - 1);
  e.emplace_back(n - 3, n - 1);
  return from_edges(n, e);
}

GramMatrix root_lattice_E(int n) {
  if (n < 6 || n > 8) throw std::invalid_argument("E_n needs 6 <= n <= 8");
  auto e = chain(n - 1);
  e.emplace_back(2, n - 1);
  return from_edges(n, e);
}

GramMatrix hyperbolic_plane(long N) { return GramMatrix::from_rows({{0, N}, {N, 0}}); }

GramMatrix lattice_S8() { return GramMatrix::from_rows({{-8, -4, 0}, {-4, -2, -1}, {0, -1, -2}}); }

std::string catalog_id(int n, const std::string& genus_symbol) {
  // Symbol grammar: (q [_t] ^{+-r})+ with q, t, r decimal.
  std::string out = "n" + std::to_string(n);
  std::size_t i = 0;
  const std::string& s = genus_symbol;
  auto digits = [&]() {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) throw std::invalid_argument("malformed genus symbol: " + s);
    return s.substr(start, i - start);
  };
  while (i < s.size()) {
    out += "_" + digits();
    if (i < s.size() && s[i] == '_') {
      ++i;
      out += "_" + digits();
    }
    if (s.compare(i, 2, "^{") != 0 || i + 2 >= s.size()) throw std::invalid_argument("malformed genus symbol: " + s);
    i += 2;
    out += s[i] == '+' ? "p" : "m";
    ++i;
    out += digits();
    if (i >= s.size() || s[i] != '}') throw std::invalid_argument("malformed genus symbol: " + s);
    ++i;
  }
  return out;
}

namespace {

struct CatalogRow {
  int n;
  const char* genus;
  const char* construction;
  std::int64_t expected_d;
};

// Construction grammar: "+"-separated summands, each one of
//   A<r>(<c>), D<r>(<c>), E<r>(<c>), kE8(-1), S8, U, U(<N>)
GramMatrix build_summand(const std::string& token, std::int64_t& split_N) {
  if (token == "U") {
    split_N = std::min<std::int64_t>(split_N, 1);
    return hyperbolic_plane(1);
  }
  if (token.rfind("U(", 0) == 0) {
    long N = std::stol(token.substr(2, token.size() - 3));
    split_N = std::min<std::int64_t>(split_N, N);
    return hyperbolic_plane(N);
  }
  if (token == "S8") return lattice_S8();
  std::size_t pos = 0;
  long copies = 1;
  if (std::isdigit(static_cast<unsigned char>(token[0]))) {
    copies = token[0] - '0';
    pos = 1;
  }
  const char family = token[pos];
  const auto open = token.find('(', pos);
  const int r = std::stoi(token.substr(pos + 1, open - pos - 1));
  const long scale = std::stol(token.substr(open + 1, token.size() - open - 2));
  GramMatrix root = family == 'A' ? root_lattice_A(r) : family == 'D' ? root_lattice_D(r) : root_lattice_E(r);
  if (family == 'A' && r == 1) {
    return GramMatrix::from_rows({{2 * scale}});
  }
  std::vector<GramMatrix> parts(static_cast<std::size_t>(copies), root.scaled(scale));
  return GramMatrix::direct_sum(parts);
}

std::vector<LatticeSpec> build_catalog() {
  static const CatalogRow rows[] = {
      {3, "2_7^{+1}", "A1(-1)+U+U", 2},
      {3, "2_7^{+3}", "A1(-1)+U(2)+U", 8},
      {3, "2_7^{+1}4^{+2}", "A1(-1)+U(4)+U", 32},
      {3, "2_7^{+5}", "A1(-1)+U(2)+U(2)", 32},
      {3, "2_7^{+3}4^{+2}", "A1(-1)+U(2)+U(4)", 128},
      {3, "2_7^{+1}4^{+4}", "A1(-1)+U(4)+U(4)", 512},
      {3, "4_7^{+1}", "A1(-2)+U+U", 4},
      {3, "2^{+2}4_7^{+1}", "A1(-2)+U(2)+U", 16},
      {3, "2^{+4}4_7^{+1}", "A1(-2)+U(2)+U(2)", 64},
      {3, "2_1^{+1}3^{+1}", "A1(-3)+U+U", 6},
      {3, "2_7^{+1}3^{-2}", "A1(-1)+U(3)+U", 18},
      {3, "2_7^{+1}3^{+4}", "A1(-1)+U(3)+U(3)", 162},
      {3, "8_7^{+1}", "A1(-4)+U+U", 8},
      {3, "8_3^{-1}", "S8+U", 8},
      {3, "2^{+2}8_3^{-1}", "S8+U(2)", 32},
      {4, "3^{+1}", "A2(-1)+U+U", 3},
      {4, "3^{-3}", "A2(-1)+U(3)+U", 27},
      {4, "3^{+5}", "A2(-1)+U(3)+U(3)", 243},
      {4, "2^{+2}3^{+1}", "A2(-1)+U(2)+U", 12},
      {4, "2^{+4}3^{+1}", "A2(-1)+U(2)+U(2)", 48},
      {5, "4_5^{-1}", "A3(-1)+U+U", 4},
      {5, "2^{+2}4_5^{-1}", "A3(-1)+U(2)+U", 16},
      {5, "2^{+4}4_5^{-1}", "A3(-1)+U(2)+U(2)", 64},
      {6, "2^{-2}", "D4(-1)+U+U", 4},
      {6, "2^{-4}", "D4(-1)+U(2)+U", 16},
      {6, "2^{-6}", "D4(-1)+U(2)+U(2)", 64},
      {6, "5^{+1}", "A4(-1)+U+U", 5},
      {7, "4_3^{-1}", "D5(-1)+U+U", 4},
      {7, "2_1^{+1}3^{-1}", "A5(-1)+U+U", 6},
      {8, "3^{-1}", "E6(-1)+U+U", 3},
      {8, "2_2^{+2}", "D6(-1)+U+U", 4},
      {8, "7^{+1}", "A6(-1)+U+U", 7},
      {9, "2_1^{+1}", "E7(-1)+U+U", 2},
      {9, "4_1^{+1}", "D7(-1)+U+U", 4},
      {9, "8_1^{+1}", "A7(-1)+U+U", 8},
      {10, "1^{+1}", "E8(-1)+U+U", 1},
      {10, "2^{+2}", "E8(-1)+U(2)+U", 4},
      {18, "1^{+1}", "2E8(-1)+U+U", 1},
      {26, "1^{+1}", "3E8(-1)+U+U", 1},
  };
  std::vector<LatticeSpec> out;
  for (const auto& row : rows) {
    LatticeSpec spec;
    spec.n = row.n;
    spec.genus_symbol = row.genus;
    spec.construction = row.construction;
    spec.id = catalog_id(row.n, row.genus);
    spec.expected_d = row.expected_d;
    spec.split_N = std::numeric_limits<std::int64_t>::max();
    std::vector<GramMatrix> blocks;
    std::string text = row.construction;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto plus = text.find('+', start);
      if (plus == std::string::npos) plus = text.size();
      blocks.push_back(build_summand(text.substr(start, plus - start), spec.split_N));
      start = plus + 1;
    }
    spec.gram = GramMatrix::direct_sum(blocks);
    if (abs(spec.gram.determinant()) != spec.expected_d)
      throw IntegrityError("catalog entry " + spec.id + ": |det| = " + spec.gram.determinant().str() +
                           ", expected " + std::to_string(spec.expected_d));
    if (spec.gram.rank() != static_cast<std::size_t>(spec.n + 2) || !(spec.gram.signature() == spec.signature()))
      throw IntegrityError("catalog entry " + spec.id + ": signature mismatch");
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace

const std::vector<LatticeSpec>& catalog() {
  static const std::vector<LatticeSpec> entries = build_catalog();
  return entries;
}

std::optional<LatticeSpec> find_lattice(const std::string& id) {
  for (const auto& spec : catalog())
    if (spec.id == id) return spec;
  return std::nullopt;
}

}  // namespace borcherds
