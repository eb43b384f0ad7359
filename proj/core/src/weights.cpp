#include "crossfeat/weights.hpp"

#include <cmath>

#include "crossfeat/error.hpp"
#include "crossfeat/hashing.hpp"

namespace crossfeat {

namespace {
constexpr std::size_t kInitialTable = 16;
}

FieldWeights::FieldWeights(std::uint32_t bucket_count) : bucket_count_(bucket_count) {
  table_.resize(kInitialTable);
}

std::size_t FieldWeights::probe(std::uint32_t bucket) const {
  const std::size_t mask = table_.size() - 1;
  std::size_t i = static_cast<std::size_t>(mix64(bucket)) & mask;
  while (true) {
    const Cell& c = table_[i];
    if (c.key_plus_one == 0 || c.key_plus_one == bucket + 1) return i;
    i = (i + 1) & mask;
  }
}

void FieldWeights::grow() {
  std::vector<Cell> old = std::move(table_);
  table_.assign(old.size() * 2, Cell{});
  const std::size_t mask = table_.size() - 1;
  for (const Cell& c : old) {
    if (c.key_plus_one == 0) continue;
    std::size_t i = static_cast<std::size_t>(mix64(c.key_plus_one - 1)) & mask;
    while (table_[i].key_plus_one != 0) i = (i + 1) & mask;
    table_[i] = c;
  }
}

FieldWeights::Slot& FieldWeights::slot(std::uint32_t bucket) {
  if (table_.empty()) table_.resize(kInitialTable);
  std::size_t i = probe(bucket);
  if (table_[i].key_plus_one == 0) {
    if ((slots_.size() + 1) * 10 >= table_.size() * 7) {
      grow();
      i = probe(bucket);
    }
    table_[i].key_plus_one = bucket + 1;
    table_[i].slot_index = static_cast<std::uint32_t>(slots_.size());
    slots_.push_back(Slot{});
    live_.push_back(bucket);
  }
  return slots_[table_[i].slot_index];
}

const FieldWeights::Slot* FieldWeights::find(std::uint32_t bucket) const {
  if (table_.empty()) return nullptr;
  std::size_t i = probe(bucket);
  if (table_[i].key_plus_one == 0) return nullptr;
  return &slots_[table_[i].slot_index];
}

double FieldWeights::get(std::uint32_t bucket) const {
  const Slot* s = find(bucket);
  return s ? s->w : 0.0;
}

void FieldWeights::set(std::uint32_t bucket, double w) { slot(bucket).w = w; }

std::vector<float> FieldWeights::to_dense_f32() const {
  std::vector<float> dense(bucket_count_, 0.0f);
  for (std::uint32_t b : live_) dense[b] = static_cast<float>(get(b));
  return dense;
}

double FieldWeights::max_abs() const {
  double m = 0.0;
  for (std::uint32_t b : live_) m = std::max(m, std::fabs(get(b)));
  return m;
}

double FieldWeights::l2_norm() const {
  double s = 0.0;
  for (std::uint32_t b : live_) {
    double w = get(b);
    s += w * w;
  }
  return std::sqrt(s);
}

bool FieldWeights::operator==(const FieldWeights& other) const {
  if (bucket_count_ != other.bucket_count_) return false;
  // Compare as logical dense vectors; zero-valued slots count as absent.
  for (std::uint32_t b : live_) {
    if (get(b) != other.get(b)) return false;
  }
  for (std::uint32_t b : other.live_) {
    if (get(b) != other.get(b)) return false;
  }
  return true;
}

}  // namespace crossfeat
