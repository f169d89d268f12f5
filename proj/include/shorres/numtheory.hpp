#pragma once

// Exact integer arithmetic for the classical side of order finding:
// modular exponentiation, the brute-force order oracle, register sizing,
// continued fractions and factor extraction.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace shorres {

using u64 = std::uint64_t;

/// Largest modulus accepted anywhere in the library; keeps N^2 inside 64 bits.
inline constexpr u64 kMaxModulus = u64{1} << 31;

/// Problem tuple of one order-finding run. Built through make_instance so the
/// invariants (gcd(x,N)=1, Q=2^t, 2^L >= N+1, x^r = 1) always hold.
struct ShorInstance {
  u64 N = 0;
  u64 x = 0;
  int t = 0;
  int L = 0;
  u64 Q = 0;
  std::optional<u64> r;
  std::optional<u64> m;  // Q / r, present only when r divides Q

  int total_qubits() const { return t + L; }
  bool order_divides_register() const { return m.has_value(); }
};

struct Convergent {
  u64 numerator = 0;
  u64 denominator = 1;

  friend bool operator==(const Convergent&, const Convergent&) = default;
};

struct RegisterSizes {
  int t = 0;
  int L = 0;
  u64 Q = 0;
  /// N^2 <= Q < 2 N^2. Reported, not enforced.
  bool within_square_window = false;
};

u64 gcd(u64 a, u64 b);

/// x^e mod N by square-and-multiply with 128-bit intermediates.
u64 mod_pow(u64 x, u64 e, u64 N);

/// Smallest r > 0 with x^r = 1 (mod N), by iterating successive powers.
u64 find_order_bruteforce(u64 x, u64 N);

/// Minimal L with 2^L >= N + 1, i.e. ceil(log2(N + 1)).
int register_b_qubits(u64 N);

/// t = 2L + 1 + ceil(log2(2 + 1/(2 epsilon))), Q = 2^t.
RegisterSizes register_sizes(u64 N, double epsilon);

bool within_square_window(u64 N, u64 Q);

/// Convergents of k/Q in lowest terms, ending at k/Q itself.
std::vector<Convergent> continued_fraction_convergents(u64 k, u64 Q);

/// Scans the convergents of k/Q with denominator < N and returns the smallest
/// verified order candidate. Multiples of each denominator (up to N/q) are
/// tried as well since gcd(s, r) may exceed 1.
std::optional<u64> recover_order(u64 k, const ShorInstance& instance);

/// (gcd(x^{r/2} - 1, N), gcd(x^{r/2} + 1, N)) when r is even and
/// x^{r/2} != +-1 (mod N).
std::optional<std::pair<u64, u64>> extract_factors(u64 x, u64 r, u64 N);

/// Trial division; only used to validate user input.
bool is_odd_composite(u64 N);

/// Validates the tuple and fills L (minimal when 0 is passed), Q, r and m.
/// Throws std::domain_error on invalid N, x or t.
ShorInstance make_instance(u64 N, u64 x, int t, int L = 0);

}  // namespace shorres
