#include "diagtor/modp.hpp"

#include "diagtor/errors.hpp"

#include <algorithm>
#include <functional>

namespace diagtor {

std::uint32_t modp_inverse(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw InvalidArgument("zero has no inverse modulo p");
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

ModpEchelon::ModpEchelon(std::uint32_t p, std::uint32_t dim, std::uint32_t tag_dim)
    : p_(p),
      dim_(dim),
      tag_dim_(tag_dim),
      pivots_(dim),
      tags_(tag_dim ? dim : 0),
      acc_(dim, 0),
      queued_(dim, 0),
      tag_acc_(tag_dim, 0),
      tag_mark_(tag_dim, 0) {}

ModpVector ModpEchelon::run(const ModpVector& v, ModpVector* tag, bool stop_at_free) const {
  const std::uint64_t p = p_;
  auto cmp = std::greater<std::uint32_t>();
  heap_.clear();
  for (const auto& [i, x] : v) {
    if (i >= dim_) throw DimensionMismatch("vector index out of range for echelon");
    acc_[i] = x % p;
    queued_[i] = 1;
    heap_.push_back(i);
  }
  std::make_heap(heap_.begin(), heap_.end(), cmp);

  const bool tagged = tag != nullptr && tag_dim_ != 0;
  if (tagged) {
    for (const auto& [i, x] : *tag) {
      tag_acc_[i] = x % p;
      tag_mark_[i] = 1;
      tag_touched_.push_back(i);
    }
  }

  ModpVector residual;
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    std::uint32_t i = heap_.back();
    heap_.pop_back();
    queued_[i] = 0;
    std::uint64_t c = acc_[i] % p;
    acc_[i] = 0;
    if (c == 0) continue;
    const ModpVector& piv = pivots_[i];
    if (piv.empty()) {
      residual.emplace_back(i, static_cast<std::uint32_t>(c));
      if (stop_at_free) break;
      continue;
    }
    std::uint64_t f = p - c;
    for (std::size_t k = 1; k < piv.size(); ++k) {
      auto [r, x] = piv[k];
      acc_[r] = (acc_[r] + f * x) % p;
      if (!queued_[r]) {
        queued_[r] = 1;
        heap_.push_back(r);
        std::push_heap(heap_.begin(), heap_.end(), cmp);
      }
    }
    if (tagged) {
      for (const auto& [r, x] : tags_[i]) {
        tag_acc_[r] = (tag_acc_[r] + f * x) % p;
        if (!tag_mark_[r]) {
          tag_mark_[r] = 1;
          tag_touched_.push_back(r);
        }
      }
    }
  }
  for (auto i : heap_) {
    acc_[i] = 0;
    queued_[i] = 0;
  }
  heap_.clear();

  if (tagged) {
    std::sort(tag_touched_.begin(), tag_touched_.end());
    ModpVector out;
    for (auto r : tag_touched_) {
      std::uint64_t x = tag_acc_[r] % p;
      if (x != 0) out.emplace_back(r, static_cast<std::uint32_t>(x));
      tag_acc_[r] = 0;
      tag_mark_[r] = 0;
    }
    tag_touched_.clear();
    *tag = std::move(out);
  }
  return residual;
}

ModpVector ModpEchelon::reduce(const ModpVector& v) const { return run(v, nullptr, false); }

ModpVector ModpEchelon::reduce_tagged(const ModpVector& v, ModpVector& tag) const {
  return run(v, &tag, false);
}

bool ModpEchelon::contains(const ModpVector& v) const { return run(v, nullptr, true).empty(); }

bool ModpEchelon::insert(const ModpVector& v) {
  ModpVector r = run(v, nullptr, false);
  if (r.empty()) return false;
  std::uint64_t inv = modp_inverse(r.front().second, p_);
  for (auto& e : r) e.second = static_cast<std::uint32_t>(e.second * inv % p_);
  std::uint32_t lead = r.front().first;
  pivots_[lead] = std::move(r);
  ++rank_;
  return true;
}

ModpEchelon::Insertion ModpEchelon::insert_tagged(const ModpVector& v, const ModpVector& tag) {
  if (tag_dim_ == 0) throw InvalidArgument("echelon was built without tags");
  ModpVector t = tag;
  ModpVector r = run(v, &t, false);
  if (r.empty()) return {false, std::move(t)};
  std::uint64_t inv = modp_inverse(r.front().second, p_);
  for (auto& e : r) e.second = static_cast<std::uint32_t>(e.second * inv % p_);
  for (auto& e : t) e.second = static_cast<std::uint32_t>(e.second * inv % p_);
  std::uint32_t lead = r.front().first;
  pivots_[lead] = std::move(r);
  tags_[lead] = std::move(t);
  ++rank_;
  return {true, {}};
}

}  // namespace diagtor
