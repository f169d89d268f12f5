#include "shorres/numtheory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shorres {

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    const u64 rem = a % b;
    a = b;
    b = rem;
  }
  return a;
}

u64 mod_pow(u64 x, u64 e, u64 N) {
  if (N < 2) throw std::domain_error("mod_pow: modulus must be >= 2");
  using u128 = unsigned __int128;
  u64 base = x % N;
  u64 result = 1;
  while (e > 0) {
    if (e & 1) result = static_cast<u64>(u128{result} * base % N);
    base = static_cast<u64>(u128{base} * base % N);
    e >>= 1;
  }
  return result;
}

u64 find_order_bruteforce(u64 x, u64 N) {
  if (N < 3) throw std::domain_error("find_order_bruteforce: modulus must be >= 3");
  if (N > kMaxModulus) throw std::domain_error("find_order_bruteforce: modulus too large");
  if (gcd(x % N, N) != 1) throw std::domain_error("find_order_bruteforce: gcd(x, N) != 1");
  const u64 base = x % N;
  u64 power = base;
  u64 r = 1;
  while (power != 1) {
    power = power * base % N;
    ++r;
  }
  return r;
}

int register_b_qubits(u64 N) {
  int L = 0;
  while ((u64{1} << L) < N + 1) ++L;
  return L;
}

bool within_square_window(u64 N, u64 Q) {
  const u64 n2 = N * N;
  return n2 <= Q && Q < 2 * n2;
}

RegisterSizes register_sizes(u64 N, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("register_sizes: epsilon must lie in (0, 1)");
  if (N < 3 || N > kMaxModulus) throw std::domain_error("register_sizes: N out of range");
  RegisterSizes out;
  out.L = register_b_qubits(N);
  // log2(4) and friends are exact; the slack only guards against 1 ulp above an integer.
  const double extra = std::ceil(std::log2(2.0 + 1.0 / (2.0 * epsilon)) - 1e-12);
  out.t = 2 * out.L + 1 + static_cast<int>(extra);
  if (out.t >= 63) throw std::domain_error("register_sizes: register A too large");
  out.Q = u64{1} << out.t;
  out.within_square_window = within_square_window(N, out.Q);
  return out;
}

std::vector<Convergent> continued_fraction_convergents(u64 k, u64 Q) {
  if (Q == 0) throw std::domain_error("continued_fraction_convergents: Q must be positive");
  if (k >= Q) throw std::domain_error("continued_fraction_convergents: k must be < Q");
  std::vector<Convergent> out;
  // h_{-1}=1, h_{-2}=0, k_{-1}=0, k_{-2}=1
  u64 h_prev = 1, h_prev2 = 0;
  u64 q_prev = 0, q_prev2 = 1;
  u64 num = k, den = Q;
  while (den != 0) {
    const u64 a = num / den;
    const u64 rem = num % den;
    const u64 h = a * h_prev + h_prev2;
    const u64 q = a * q_prev + q_prev2;
    out.push_back({h, q});
    h_prev2 = h_prev;
    h_prev = h;
    q_prev2 = q_prev;
    q_prev = q;
    num = den;
    den = rem;
  }
  return out;
}

std::optional<u64> recover_order(u64 k, const ShorInstance& instance) {
  if (k >= instance.Q) throw std::domain_error("recover_order: k must be < Q");
  const u64 N = instance.N;
  std::optional<u64> best;
  for (const Convergent& c : continued_fraction_convergents(k, instance.Q)) {
    if (c.numerator == 0) continue;
    const u64 q = c.denominator;
    if (q >= N) break;
    for (u64 mult = 1; mult <= N / q; ++mult) {
      const u64 candidate = q * mult;
      if (best && candidate >= *best) break;
      if (mod_pow(instance.x, candidate, N) == 1) {
        best = candidate;
        break;
      }
    }
  }
  return best;
}

std::optional<std::pair<u64, u64>> extract_factors(u64 x, u64 r, u64 N) {
  if (r == 0 || mod_pow(x, r, N) != 1)
    throw std::domain_error("extract_factors: x^r != 1 (mod N)");
  if (r % 2 != 0) return std::nullopt;
  const u64 half = mod_pow(x, r / 2, N);
  if (half == 1 || half == N - 1) return std::nullopt;
  return std::make_pair(gcd(half - 1, N), gcd(half + 1, N));
}

bool is_odd_composite(u64 N) {
  if (N < 9 || N % 2 == 0) return false;
  for (u64 d = 3; d * d <= N; d += 2)
    if (N % d == 0) return true;
  return false;
}

ShorInstance make_instance(u64 N, u64 x, int t, int L) {
  if (N < 3 || N > kMaxModulus) throw std::domain_error("N must lie in [3, 2^31]");
  if (N % 2 == 0) throw std::domain_error("N must be odd");
  // x = 1 is accepted: trivial order.
  if (x == 0 || x >= N) throw std::domain_error("x must satisfy 0 < x < N");
  if (gcd(x, N) != 1)
    throw std::domain_error("gcd(x, N) = " + std::to_string(gcd(x, N)) + " != 1");
  const int minimal_L = register_b_qubits(N);
  if (L == 0) L = minimal_L;
  if (L < minimal_L) throw std::domain_error("register B too small to hold N");
  if (t < 1 || t >= 62) throw std::domain_error("t must lie in [1, 61]");

  ShorInstance inst;
  inst.N = N;
  inst.x = x;
  inst.t = t;
  inst.L = L;
  inst.Q = u64{1} << t;
  inst.r = find_order_bruteforce(x, N);
  if (inst.Q % *inst.r == 0) inst.m = inst.Q / *inst.r;
  return inst;
}

}  // namespace shorres
