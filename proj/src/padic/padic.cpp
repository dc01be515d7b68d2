#include "desk/padic/padic.hpp"

#include <string>

namespace desk {

u128 ipow(std::uint64_t p, int k) {
  u128 r = 1;
  const u128 limit = u128(1) << 64;
  for (int i = 0; i < k; ++i) {
    r *= p;
    if (r > limit) throw std::invalid_argument("p^K exceeds 2^64");
  }
  return r;
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

PadicTrunc::PadicTrunc(std::uint64_t p, int K, u128 value) : p_(p), K_(K) {
  if (!is_prime(p)) throw std::invalid_argument("PadicTrunc: p must be prime");
  if (K < 0) throw std::invalid_argument("PadicTrunc: negative precision");
  mod_ = ipow(p, K);
  v_ = value % mod_;
}

PadicTrunc PadicTrunc::from_int(std::uint64_t p, int K, std::int64_t x) {
  PadicTrunc t(p, K);
  if (x >= 0) {
    t.v_ = u128(static_cast<std::uint64_t>(x)) % t.mod_;
  } else {
    u128 a = u128(static_cast<std::uint64_t>(-(x + 1)) + 1) % t.mod_;
    t.v_ = (t.mod_ - a) % t.mod_;
  }
  return t;
}

PadicTrunc PadicTrunc::from_digits(std::uint64_t p, const std::vector<int>& digits) {
  PadicTrunc t(p, static_cast<int>(digits.size()));
  u128 v = 0;
  for (size_t i = digits.size(); i-- > 0;) {
    if (digits[i] < 0 || static_cast<std::uint64_t>(digits[i]) >= p)
      throw std::invalid_argument("from_digits: digit out of range");
    v = v * p + static_cast<unsigned>(digits[i]);
  }
  t.v_ = v;
  return t;
}

std::vector<int> PadicTrunc::digits() const {
  std::vector<int> d(K_);
  u128 v = v_;
  for (int i = 0; i < K_; ++i) {
    d[i] = static_cast<int>(v % p_);
    v /= p_;
  }
  return d;
}

std::optional<int> PadicTrunc::valuation() const {
  if (v_ == 0) return std::nullopt;
  int k = 0;
  u128 v = v_;
  while (v % p_ == 0) {
    v /= p_;
    ++k;
  }
  return k;
}

void PadicTrunc::check_compatible(const PadicTrunc& o) const {
  if (p_ != o.p_ || K_ != o.K_) throw std::invalid_argument("PadicTrunc: mismatched p or precision");
}

PadicTrunc PadicTrunc::operator+(const PadicTrunc& o) const {
  check_compatible(o);
  PadicTrunc r = *this;
  r.v_ = (v_ + o.v_) % mod_;
  return r;
}

PadicTrunc PadicTrunc::operator-() const {
  PadicTrunc r = *this;
  r.v_ = (mod_ - v_) % mod_;
  return r;
}

PadicTrunc PadicTrunc::operator-(const PadicTrunc& o) const { return *this + (-o); }

PadicTrunc PadicTrunc::operator*(const PadicTrunc& o) const {
  check_compatible(o);
  PadicTrunc r = *this;
  // Both residues are below 2^64, so the product fits in 128 bits.
  r.v_ = (v_ * o.v_) % mod_;
  return r;
}

PadicTrunc PadicTrunc::truncate(int k) const {
  if (k > K_) throw std::invalid_argument("truncate: cannot raise precision");
  return PadicTrunc(p_, k, v_);
}

PadicTrunc PadicTrunc::shift_down(int k) const {
  if (k > K_) throw PrecisionExhausted("shift_down past precision");
  u128 pk = ipow(p_, k);
  if (v_ % pk != 0) throw std::invalid_argument("shift_down: not divisible by p^" + std::to_string(k));
  return PadicTrunc(p_, K_ - k, v_ / pk);
}

PadicTrunc PadicTrunc::shift_up(int k) const {
  PadicTrunc r = *this;
  r.v_ = k >= K_ ? 0 : (v_ * ipow(p_, k)) % mod_;
  return r;
}

}  // namespace desk
