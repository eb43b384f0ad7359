#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "crossfeat/als.hpp"

namespace crossfeat {

enum class CinMode { representable, adversarial, random_c };

const char* cin_mode_name(CinMode m);
CinMode cin_mode_from_name(const std::string& name);

struct CinExperiment {
  std::size_t d_rows = 4;
  std::size_t m = 3;
  std::size_t n = 3;
  CinMode mode = CinMode::adversarial;
  std::uint64_t seed = 0;
  std::size_t restarts = 20;
};

// Witness that C admits no entry-wise-product factorization: an embedding row
// and indices (i,j,k,l) where c_ik/c_jk and c_il/c_jl disagree by >= gap.
struct CinCertificate {
  std::size_t dim = 0, i = 0, j = 0, k = 0, l = 0;
  double gap = 0.0;
};

struct CinBuild {
  Matrix c;
  std::optional<CinCertificate> certificate;
  bool forced_representable = false;  // m = n = 1 admits every C
};

// representable: c_ik = a_i o b_k from random A, B.
// adversarial: Gaussian C resampled until a ratio certificate with gap >= 0.1
//   exists (scale widens after 100 tries).
// random: unconditioned Gaussian entries.
CinBuild build_c(const CinExperiment& exp);

struct CinRun {
  CinExperiment exp;
  double min_residual = 0.0;
  std::optional<CinCertificate> certificate;
  bool forced_representable = false;
};

CinRun run_cin_experiment(const CinExperiment& exp);

std::string cin_tsv_header();
std::string cin_tsv_row(const CinRun& run);

}  // namespace crossfeat
