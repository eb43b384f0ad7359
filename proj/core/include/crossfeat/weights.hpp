#pragma once

#include <cstdint>
#include <vector>

namespace crossfeat {

// Weight subvector of one feature over its hash buckets. Logically a dense
// vector of length bucket_count; stored as an open-addressing map because an
// arm only ever touches the buckets its rows hit. Absent buckets are exactly
// zero. Slots also carry the lazy-regularization step stamp used by the SGD
// kernel (a weight is current as of `last_step` completed mini-batches).
class FieldWeights {
 public:
  FieldWeights() = default;
  explicit FieldWeights(std::uint32_t bucket_count);

  std::uint32_t bucket_count() const { return bucket_count_; }
  std::size_t nonzero_slots() const { return live_.size(); }
  bool empty() const { return live_.empty(); }

  double get(std::uint32_t bucket) const;

  struct Slot {
    double w = 0.0;
    std::uint32_t last_step = 0;
  };
  // Finds or inserts the slot for `bucket` (inserted at w=0, last_step=0).
  Slot& slot(std::uint32_t bucket);
  const Slot* find(std::uint32_t bucket) const;

  // Buckets in first-insertion order; stable and deterministic.
  const std::vector<std::uint32_t>& live_buckets() const { return live_; }

  void set(std::uint32_t bucket, double w);  // test/build convenience

  std::vector<float> to_dense_f32() const;
  double max_abs() const;
  double l2_norm() const;

  bool operator==(const FieldWeights& other) const;

 private:
  void grow();
  std::size_t probe(std::uint32_t bucket) const;  // slot index in table_

  struct Cell {
    std::uint32_t key_plus_one = 0;  // 0 = empty
    std::uint32_t slot_index = 0;
  };

  std::uint32_t bucket_count_ = 0;
  std::vector<Cell> table_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> live_;
};

}  // namespace crossfeat
