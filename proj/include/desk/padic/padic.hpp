#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace desk {

struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using u128 = unsigned __int128;

// An element of Z_p known modulo p^K. The residue is kept as one machine word,
// so p^K must not exceed 2^64 (K = 64 for p = 2).
class PadicTrunc {
 public:
  PadicTrunc() = default;
  PadicTrunc(std::uint64_t p, int K, u128 value = 0);

  static PadicTrunc from_int(std::uint64_t p, int K, std::int64_t x);
  static PadicTrunc from_digits(std::uint64_t p, const std::vector<int>& digits);

  std::uint64_t p() const { return p_; }
  int precision() const { return K_; }
  std::uint64_t residue() const { return static_cast<std::uint64_t>(v_); }
  u128 modulus() const { return mod_; }
  std::vector<int> digits() const;

  bool is_zero() const { return v_ == 0; }
  bool is_unit() const { return v_ % p_ != 0; }
  // Exact valuation; empty when the residue is 0 (valuation >= K, unknown).
  std::optional<int> valuation() const;

  PadicTrunc operator+(const PadicTrunc& o) const;
  PadicTrunc operator-(const PadicTrunc& o) const;
  PadicTrunc operator*(const PadicTrunc& o) const;
  PadicTrunc operator-() const;
  // Reduce to precision k <= K.
  PadicTrunc truncate(int k) const;
  // x / p^k when p^k divides the residue; the result is known mod p^(K-k).
  PadicTrunc shift_down(int k) const;
  PadicTrunc shift_up(int k) const;

  bool operator==(const PadicTrunc& o) const { return p_ == o.p_ && K_ == o.K_ && v_ == o.v_; }
  bool operator!=(const PadicTrunc& o) const { return !(*this == o); }

 private:
  void check_compatible(const PadicTrunc& o) const;

  std::uint64_t p_ = 2;
  int K_ = 0;
  u128 mod_ = 1;
  u128 v_ = 0;
};

u128 ipow(std::uint64_t p, int k);
bool is_prime(std::uint64_t p);

}  // namespace desk
