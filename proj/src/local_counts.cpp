#include "borcherds/local_counts.hpp"

#include <algorithm>
#include <cmath>

namespace borcherds {

namespace {

std::int64_t checked_power(std::int64_t p, int e, std::uint64_t limit, const char* what) {
  BigInt value = pow(BigInt(p), static_cast<unsigned>(e));
  if (value > BigInt(limit)) throw BudgetExceeded(std::string(what) + ": " + value.str() + " exceeds budget");
  return static_cast<std::int64_t>(value);
}

std::int64_t reduce_int(const BigInt& x, std::int64_t M) { return static_cast<std::int64_t>(mod(x, BigInt(M))); }

std::vector<BigInt> integral_linear_term(const GramMatrix& gram, const std::vector<Rational>& gamma) {
  if (gamma.size() != gram.rank()) throw std::invalid_argument("gamma has the wrong dimension");
  std::vector<BigInt> out;
  for (const auto& v : gram.apply(gamma)) {
    if (denominator(v) != 1) throw std::invalid_argument("gamma is not in the dual lattice");
    out.push_back(numerator(v));
  }
  return out;
}

// Cyclic convolution of nonnegative count vectors, accumulated in T.
template <class T>
std::vector<BigInt> convolve_typed(const std::vector<const std::vector<std::int64_t>*>& parts, std::int64_t M) {
  std::vector<T> acc(static_cast<std::size_t>(M), T(0));
  acc[0] = T(1);
  std::vector<std::pair<std::int64_t, T>> support;
  for (const auto* part : parts) {
    support.clear();
    for (std::int64_t j = 0; j < M; ++j)
      if ((*part)[j] != 0) support.emplace_back(j, T((*part)[j]));
    std::vector<T> next(static_cast<std::size_t>(M), T(0));
    for (std::int64_t i = 0; i < M; ++i) {
      if (acc[i] == 0) continue;
      const T a = acc[i];
      for (const auto& [j, c] : support) {
        std::int64_t k = i + j;
        if (k >= M) k -= M;
        next[k] += a * c;
      }
    }
    acc.swap(next);
  }
  std::vector<BigInt> out(static_cast<std::size_t>(M));
  for (std::int64_t i = 0; i < M; ++i) {
    if constexpr (std::is_same_v<T, __int128>) {
      // cpp_int has no __int128 constructor on every platform; split.
      const __int128 v = acc[i];
      out[i] = (BigInt(static_cast<std::uint64_t>(v >> 64)) << 64) + BigInt(static_cast<std::uint64_t>(v));
    } else {
      out[i] = BigInt(acc[i]);
    }
  }
  return out;
}

std::vector<BigInt> convolve_parts(const std::vector<const std::vector<std::int64_t>*>& parts, std::int64_t M,
                                   double total_bits) {
  if (total_bits <= 62) return convolve_typed<std::int64_t>(parts, M);
  if (total_bits <= 126) return convolve_typed<__int128>(parts, M);
  return convolve_typed<BigInt>(parts, M);
}

double total_bits(std::int64_t p, int nu, std::size_t rank) {
  return std::log2(static_cast<double>(p)) * nu * static_cast<double>(rank) + 1;
}

// Counts of A x^2 - l1 x mod M, or A x^2 + B x y + C y^2 - l1 x - l2 y mod M.
// Inputs already reduced into [0, M).
std::vector<std::int64_t> block_counts(const std::vector<std::int64_t>& key, std::int64_t M) {
  // key = {size, A, B, C, l1, l2}
  std::vector<std::int64_t> counts(static_cast<std::size_t>(M), 0);
  const std::int64_t A = key[1], B = key[2], C = key[3], l1 = key[4], l2 = key[5];
  auto step = [M](std::int64_t& v, std::int64_t d) {
    v += d;
    if (v >= M) v -= M;
  };
  if (key[0] == 1) {
    // f(x+1) - f(x) = A(2x+1) - l1
    std::int64_t v = 0, d = (A + M - l1) % M;
    const std::int64_t twoA = (2 * A) % M;
    for (std::int64_t x = 0; x < M; ++x) {
      ++counts[v];
      step(v, d);
      step(d, twoA);
    }
    return counts;
  }
  const std::int64_t twoC = (2 * C) % M;
  std::int64_t base = 0, dbase = (A + M - l1) % M;  // A x^2 - l1 x and its forward difference
  const std::int64_t twoA = (2 * A) % M;
  std::int64_t coef = (M - l2) % M;  // B x - l2
  for (std::int64_t x = 0; x < M; ++x) {
    std::int64_t v = base, d = (coef + C) % M;
    for (std::int64_t y = 0; y < M; ++y) {
      ++counts[v];
      step(v, d);
      step(d, twoC);
    }
    step(base, dbase);
    step(dbase, twoA);
    step(coef, B);
  }
  return counts;
}

std::vector<std::int64_t> block_key(const JordanBlock& block, const std::vector<Rational>& lambda, std::int64_t M) {
  const auto& g = block.gram;
  std::vector<std::int64_t> key{static_cast<std::int64_t>(block.size), reduce_mod(g(0, 0) / 2, M), 0, 0,
                                reduce_mod(lambda[block.offset], M), 0};
  if (block.size == 2) {
    key[2] = reduce_mod(g(0, 1), M);
    key[3] = reduce_mod(g(1, 1) / 2, M);
    key[5] = reduce_mod(lambda[block.offset + 1], M);
  }
  return key;
}

std::int64_t checked_modulus(std::int64_t p, int nu, const CountBudget& budget) {
  const std::int64_t M = checked_power(p, nu, budget.distribution_length, "distribution length");
  if (nu > 0) {
    const BigInt square = BigInt(M) * M;
    if (square > BigInt(budget.block_points))
      throw BudgetExceeded("binary block enumeration: " + square.str() + " exceeds budget");
  }
  return M;
}

}  // namespace

// ---------------------------------------------------------------------------

BigInt ValueDistribution::total() const {
  BigInt t = 0;
  for (const auto& c : counts) t += c;
  return t;
}

const BigInt& ValueDistribution::at(const BigInt& value) const {
  return counts[static_cast<std::size_t>(mod(value, BigInt(modulus())))];
}

ValueDistribution convolve(const ValueDistribution& a, const ValueDistribution& b) {
  if (a.counts.size() != b.counts.size()) throw std::invalid_argument("convolve: modulus mismatch");
  const std::size_t M = a.counts.size();
  ValueDistribution out{a.p, a.nu, std::vector<BigInt>(M, BigInt(0))};
  for (std::size_t i = 0; i < M; ++i) {
    if (a.counts[i] == 0) continue;
    for (std::size_t j = 0; j < M; ++j) {
      if (b.counts[j] == 0) continue;
      out.counts[(i + j) % M] += a.counts[i] * b.counts[j];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute force

ValueDistribution naive_distribution(const GramMatrix& gram, const std::vector<Rational>& gamma, std::int64_t p, int nu,
                                     const CountBudget& budget) {
  const std::size_t m = gram.rank();
  const auto ell = integral_linear_term(gram, gamma);
  const std::int64_t M = checked_power(p, nu, budget.distribution_length, "distribution length");
  checked_power(p, nu * static_cast<int>(m), budget.naive_points, "naive enumeration");

  std::vector<std::int64_t> S(m * m), step(m), grad(m, 0), r(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) S[i * m + j] = reduce_int(gram(i, j), M);
    step[i] = mod(gram(i, i) / 2 - ell[i], BigInt(M)).convert_to<std::int64_t>();
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(M), 0);
  std::int64_t w = 0;
  // Odometer; r_i -> r_i + 1 mod M changes W by grad_i + S_ii/2 - ell_i (mod M)
  // even on wrap-around, because W(r + M e_i) = W(r) mod M.
  while (true) {
    ++counts[w];
    std::size_t i = 0;
    for (; i < m; ++i) {
      w = (w + grad[i] + step[i]) % M;
      for (std::size_t j = 0; j < m; ++j) {
        grad[j] += S[j * m + i];
        if (grad[j] >= M) grad[j] -= M;
      }
      if (++r[i] < M) break;
      r[i] = 0;
    }
    if (i == m) break;
  }
  ValueDistribution out{p, nu, {}};
  out.counts.reserve(counts.size());
  for (auto c : counts) out.counts.emplace_back(c);
  return out;
}

ValueDistribution naive_distribution_by_components(const GramMatrix& gram, const std::vector<Rational>& gamma,
                                                   std::int64_t p, int nu, const CountBudget& budget) {
  const std::size_t m = gram.rank();
  if (gamma.size() != m) throw std::invalid_argument("gamma has the wrong dimension");
  std::vector<int> component(m, -1);
  int count = 0;
  for (std::size_t s = 0; s < m; ++s) {
    if (component[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    component[s] = count;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < m; ++j)
        if (component[j] < 0 && gram(i, j) != 0) {
          component[j] = count;
          stack.push_back(j);
        }
    }
    ++count;
  }
  const std::int64_t M = checked_power(p, nu, budget.distribution_length, "distribution length");
  ValueDistribution total{p, nu, std::vector<BigInt>(static_cast<std::size_t>(M), BigInt(0))};
  total.counts[0] = 1;
  for (int c = 0; c < count; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i)
      if (component[i] == c) idx.push_back(i);
    Matrix<BigInt> sub(idx.size(), idx.size());
    std::vector<Rational> sub_gamma;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      sub_gamma.push_back(gamma[idx[a]]);
      for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = gram(idx[a], idx[b]);
    }
    total = convolve(total, naive_distribution(GramMatrix(std::move(sub)), sub_gamma, p, nu, budget));
  }
  return total;
}

BigInt rep_count_naive(const GramMatrix& gram, const std::vector<Rational>& gamma, const Rational& n, std::int64_t p,
                       int nu, const CountBudget& budget) {
  const Rational shift = n + gram.norm(gamma);
  if (denominator(shift) != 1) throw std::invalid_argument("n + Q(gamma) must be integral");
  return naive_distribution(gram, gamma, p, nu, budget).at(-numerator(shift));
}

// ---------------------------------------------------------------------------
// Hyperbolic planes

namespace {

BigInt rep_count_U1_by_order(int ord, std::int64_t p, int nu) {
  const BigInt pnu = pow(BigInt(p), static_cast<unsigned>(nu));
  if (ord < nu) return BigInt(ord + 1) * (p - 1) * pnu / p;
  return BigInt(nu) * (p - 1) * pnu / p + pnu;
}

}  // namespace

BigInt rep_count_U1(const BigInt& n, std::int64_t p, int nu) {
  if (nu < 0) throw std::invalid_argument("rep_count_U1: negative exponent");
  return rep_count_U1_by_order(ord_p(n, BigInt(p)), p, nu);
}

BigInt rep_count_UN(const BigInt& g1, const BigInt& g2, const Rational& n, std::int64_t N, std::int64_t p, int nu) {
  if (N <= 0 || nu < 0) throw std::invalid_argument("rep_count_UN: bad arguments");
  const Rational ell = n + Rational(g1 * g2, N);
  if (denominator(ell) != 1) throw std::invalid_argument("rep_count_UN: n + g1 g2 / N must be integral");
  const BigInt P(p);
  const int nu_N = ord_p(BigInt(N), P);
  const int nu_gamma = std::min(ord_p(g1, P), ord_p(g2, P));
  const int nu_min = std::min({nu, nu_gamma, nu_N});
  if (numerator(ell) % pow(P, static_cast<unsigned>(nu_min)) != 0) return 0;
  if (nu_N <= std::min(nu, nu_gamma)) {
    const Rational n_tilde = Rational(N) * n / Rational(pow(P, static_cast<unsigned>(2 * nu_N)));
    return pow(P, static_cast<unsigned>(2 * nu_N)) * rep_count_U1_by_order(ord_p(n_tilde, P), p, nu - nu_N);
  }
  return pow(P, static_cast<unsigned>(nu + std::min(nu, nu_gamma)));
}

// ---------------------------------------------------------------------------
// Jordan splitting

std::string to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Unary: return "unary";
    case BlockKind::UnaryDyadic: return "unary-dyadic";
    case BlockKind::BinaryU: return "binary-U";
    case BlockKind::BinaryV: return "binary-V";
  }
  return "?";
}

int BlockChain::max_scale() const {
  int e = 0;
  for (const auto& b : blocks) e = std::max(e, b.scale);
  return e;
}

BlockChain block_decompose(const GramMatrix& gram, std::int64_t p) {
  const std::size_t m = gram.rank();
  const BigInt P(p);
  Matrix<Rational> a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = Rational(gram(i, j));
  Matrix<Rational> basis = Matrix<Rational>::identity(m);

  // Basis change e_i <- e_i + f e_j, applied as a congruence.
  auto add_multiple = [&](std::size_t i, std::size_t j, const Rational& f) {
    for (std::size_t c = 0; c < m; ++c) a(i, c) += f * a(j, c);
    for (std::size_t r = 0; r < m; ++r) a(r, i) += f * a(r, j);
    for (std::size_t r = 0; r < m; ++r) basis(r, i) += f * basis(r, j);
  };
  auto swap_coords = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    a.swap_rows(i, j);
    a.swap_cols(i, j);
    basis.swap_cols(i, j);
  };

  BlockChain chain;
  chain.p = p;
  std::size_t t = 0;
  while (t < m) {
    int best = kInfiniteValuation;
    std::size_t bi = t, bj = t;
    bool diagonal = false;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        const int v = ord_p(a(i, j), P);
        // prefer diagonal pivots on ties
        if (v < best || (v == best && i == j && !diagonal)) {
          best = v;
          bi = i;
          bj = j;
          diagonal = (i == j);
        }
      }
    if (best == kInfiniteValuation) throw std::logic_error("block_decompose: degenerate form");

    if (!diagonal && p != 2) {
      add_multiple(bi, bj, 1);  // a_ii + 2 a_ij + a_jj keeps the minimal valuation
      diagonal = true;
      bj = bi;
    }
    if (diagonal) {
      swap_coords(t, bi);
      for (std::size_t i = t + 1; i < m; ++i)
        if (a(i, t) != 0) add_multiple(i, t, -a(i, t) / a(t, t));
      JordanBlock block;
      block.scale = ord_p(a(t, t), P) - (p == 2 ? 1 : 0);
      block.kind = p == 2 ? BlockKind::UnaryDyadic : BlockKind::Unary;
      block.offset = t;
      block.size = 1;
      block.gram = Matrix<Rational>(1, 1, a(t, t));
      chain.blocks.push_back(std::move(block));
      t += 1;
      continue;
    }
    swap_coords(t, bi);
    swap_coords(t + 1, bj == t ? bi : bj);
    const Rational A = a(t, t), B = a(t, t + 1), C = a(t + 1, t + 1);
    const Rational det = A * C - B * B;
    for (std::size_t i = t + 2; i < m; ++i) {
      const Rational u = a(t, i), v = a(t + 1, i);
      if (u == 0 && v == 0) continue;
      // solve [[A,B],[B,C]] x = (u, v)
      const Rational x0 = (C * u - B * v) / det;
      const Rational x1 = (A * v - B * u) / det;
      add_multiple(i, t, -x0);
      add_multiple(i, t + 1, -x1);
    }
    JordanBlock block;
    block.scale = ord_p(B, P);
    const std::int64_t scaled_det = reduce_mod(det / Rational(pow(P, static_cast<unsigned>(2 * block.scale))), 8);
    if (scaled_det == 7)
      block.kind = BlockKind::BinaryU;
    else if (scaled_det == 3)
      block.kind = BlockKind::BinaryV;
    else
      throw std::logic_error("block_decompose: unexpected dyadic binary block");
    block.offset = t;
    block.size = 2;
    block.gram = Matrix<Rational>(2, 2);
    block.gram(0, 0) = A;
    block.gram(0, 1) = block.gram(1, 0) = B;
    block.gram(1, 1) = C;
    chain.blocks.push_back(std::move(block));
    t += 2;
  }
  chain.basis = std::move(basis);
  return chain;
}

std::vector<Rational> block_linear_term(const GramMatrix& gram, const BlockChain& chain,
                                        const std::vector<Rational>& gamma) {
  const auto ell = integral_linear_term(gram, gamma);
  const std::size_t m = gram.rank();
  std::vector<Rational> out(m, Rational(0));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i)
      if (ell[i] != 0 && chain.basis(i, j) != 0) out[j] += chain.basis(i, j) * Rational(ell[i]);
  return out;
}

ValueDistribution value_distribution(const BlockChain& chain, const std::vector<Rational>& lambda, int nu,
                                     const CountBudget& budget) {
  const std::int64_t M = checked_modulus(chain.p, nu, budget);
  std::vector<std::vector<std::int64_t>> parts;
  for (const auto& block : chain.blocks) parts.push_back(block_counts(block_key(block, lambda, M), M));
  std::vector<const std::vector<std::int64_t>*> ptrs;
  for (const auto& part : parts) ptrs.push_back(&part);
  return ValueDistribution{chain.p, nu, convolve_parts(ptrs, M, total_bits(chain.p, nu, chain.rank()))};
}

BigInt rep_count(const GramMatrix& gram, const std::vector<Rational>& gamma, const Rational& n, std::int64_t p, int nu,
                 const CountBudget& budget) {
  DensityEngine engine(gram, p, budget);
  return engine.count(gamma, n, nu);
}

// ---------------------------------------------------------------------------
// DensityEngine

DensityEngine::DensityEngine(const GramMatrix& gram, std::int64_t p, CountBudget budget)
    : gram_(gram), p_(p), budget_(budget), chain_(block_decompose(gram, p)) {}

const ValueDistribution& DensityEngine::distribution(const std::vector<Rational>& gamma, int nu) {
  const std::int64_t M = checked_modulus(p_, nu, budget_);
  const auto lambda = block_linear_term(gram_, chain_, gamma);
  std::vector<std::int64_t> reduced;
  for (const auto& block : chain_.blocks) {
    reduced.push_back(reduce_mod(lambda[block.offset], M));
    if (block.size == 2) reduced.push_back(reduce_mod(lambda[block.offset + 1], M));
  }
  auto key = std::make_pair(reduced, nu);
  auto it = dist_cache_.find(key);
  if (it != dist_cache_.end()) return it->second;

  std::vector<const std::vector<std::int64_t>*> parts;
  for (const auto& block : chain_.blocks) {
    auto bkey = block_key(block, lambda, M);
    bkey.push_back(nu);
    auto bit = block_cache_.find(bkey);
    if (bit == block_cache_.end()) {
      std::vector<std::int64_t> short_key(bkey.begin(), bkey.end() - 1);
      bit = block_cache_.emplace(bkey, block_counts(short_key, M)).first;
    }
    parts.push_back(&bit->second);
  }
  ValueDistribution dist{p_, nu, convolve_parts(parts, M, total_bits(p_, nu, chain_.rank()))};
  return dist_cache_.emplace(key, std::move(dist)).first->second;
}

BigInt DensityEngine::count(const std::vector<Rational>& gamma, const Rational& n, int nu) {
  const Rational shift = n + gram_.norm(gamma);
  if (denominator(shift) != 1) throw std::invalid_argument("n + Q(gamma) must be integral");
  return distribution(gamma, nu).at(-numerator(shift));
}

int DensityEngine::start_exponent(const Rational& n) const {
  const int ord = n == 0 ? 0 : std::max(0, ord_p(n, BigInt(p_)));
  return chain_.max_scale() + ord + 1 + (p_ == 2 ? 2 : 0);
}

Rational DensityEngine::density(const std::vector<Rational>& gamma, const Rational& n) {
  if (n <= 0) throw std::invalid_argument("density: n must be positive");
  const int nu0 = start_exponent(n);
  const int m = static_cast<int>(gram_.rank());
  std::vector<Rational> values;
  for (int nu = nu0; nu <= nu0 + 8; ++nu) {
    values.push_back(Rational(count(gamma, n, nu)) * pow(Rational(p_), nu * (1 - m)));
    const std::size_t s = values.size();
    if (s >= 3 && values[s - 1] == values[s - 2] && values[s - 2] == values[s - 3]) return values.back();
  }
  throw StabilizationFailure("local density at p = " + std::to_string(p_) + " did not stabilize for n = " +
                             to_string(n));
}

Rational local_density(const GramMatrix& gram, const std::vector<Rational>& gamma, const Rational& n, std::int64_t p,
                       const CountBudget& budget) {
  DensityEngine engine(gram, p, budget);
  return engine.density(gamma, n);
}

}  // namespace borcherds
