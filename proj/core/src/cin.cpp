#include "crossfeat/cin.hpp"

#include <cmath>
#include <cstdio>

#include "crossfeat/error.hpp"
#include "crossfeat/rng.hpp"

namespace crossfeat {

const char* cin_mode_name(CinMode m) {
  switch (m) {
    case CinMode::representable: return "representable";
    case CinMode::adversarial: return "adversarial";
    case CinMode::random_c: return "random";
  }
  return "?";
}

CinMode cin_mode_from_name(const std::string& name) {
  if (name == "representable") return CinMode::representable;
  if (name == "adversarial") return CinMode::adversarial;
  if (name == "random") return CinMode::random_c;
  throw Error(Errc::bad_argument, "unknown cin mode '" + name + "'");
}

namespace {

constexpr double kCertGap = 0.1;
constexpr double kCertDenominator = 1e-3;

std::optional<CinCertificate> find_certificate(const Matrix& c, std::size_t m, std::size_t n) {
  CinCertificate best;
  bool found = false;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
          for (std::size_t d = 0; d < c.rows; ++d) {
            const double cik = c.at(d, i * n + k), cjk = c.at(d, j * n + k);
            const double cil = c.at(d, i * n + l), cjl = c.at(d, j * n + l);
            if (std::fabs(cjk) < kCertDenominator || std::fabs(cjl) < kCertDenominator) continue;
            const double gap = std::fabs(cik / cjk - cil / cjl);
            if (gap >= kCertGap && (!found || gap > best.gap)) {
              best = {d, i, j, k, l, gap};
              found = true;
            }
          }
        }
      }
    }
  }
  if (!found) return std::nullopt;
  return best;
}

}  // namespace

CinBuild build_c(const CinExperiment& exp) {
  if (exp.d_rows < 1 || exp.m < 1 || exp.n < 1) {
    throw Error(Errc::bad_argument, "cin experiment needs dims >= 1");
  }
  CinBuild out;
  SplitMix64 rng(derive_seed(exp.seed, "cin-build"));

  CinMode mode = exp.mode;
  if (mode == CinMode::adversarial && (exp.m < 2 || exp.n < 2)) {
    // With a single column on either side, A or B can always absorb C
    // (e.g. a_1 = 1, b_k = c_1k), so no ratio witness exists. Flag and fall
    // back instead of looping forever on the resampler.
    out.forced_representable = true;
    mode = CinMode::representable;
  }

  if (mode == CinMode::representable) {
    Matrix a(exp.d_rows, exp.m), b(exp.d_rows, exp.n);
    for (auto& v : a.data) v = rng.next_gaussian();
    for (auto& v : b.data) v = rng.next_gaussian();
    out.c = Matrix(exp.d_rows, exp.m * exp.n);
    for (std::size_t d = 0; d < exp.d_rows; ++d) {
      for (std::size_t i = 0; i < exp.m; ++i) {
        for (std::size_t k = 0; k < exp.n; ++k) {
          out.c.at(d, i * exp.n + k) = a.at(d, i) * b.at(d, k);
        }
      }
    }
    return out;
  }

  double scale = 1.0;
  for (std::size_t attempt = 0;; ++attempt) {
    out.c = Matrix(exp.d_rows, exp.m * exp.n);
    for (auto& v : out.c.data) v = scale * rng.next_gaussian();
    if (mode == CinMode::random_c) return out;
    out.certificate = find_certificate(out.c, exp.m, exp.n);
    if (out.certificate) return out;
    if (attempt > 0 && attempt % 100 == 0) scale *= 2.0;  // widen until a witness appears
  }
}

CinRun run_cin_experiment(const CinExperiment& exp) {
  CinBuild build = build_c(exp);
  CinRun run;
  run.exp = exp;
  run.certificate = build.certificate;
  run.forced_representable = build.forced_representable;
  run.min_residual =
      cin_residual(build.c, exp.m, exp.n, exp.restarts, derive_seed(exp.seed, "cin-restarts"));
  return run;
}

std::string cin_tsv_header() { return "mode\tD\tm\tn\tseed\trestarts\tmin_residual\tcertificate"; }

std::string cin_tsv_row(const CinRun& run) {
  char buf[256];
  std::string cert = "-";
  if (run.certificate) {
    const auto& c = *run.certificate;
    std::snprintf(buf, sizeof(buf), "d=%zu;i=%zu;j=%zu;k=%zu;l=%zu;gap=%.4f", c.dim, c.i, c.j,
                  c.k, c.l, c.gap);
    cert = buf;
  } else if (run.forced_representable) {
    cert = "forced-representable";
  }
  std::snprintf(buf, sizeof(buf), "%s\t%zu\t%zu\t%zu\t%llu\t%zu\t%.3e\t%s",
                cin_mode_name(run.exp.mode), run.exp.d_rows, run.exp.m, run.exp.n,
                static_cast<unsigned long long>(run.exp.seed), run.exp.restarts,
                run.min_residual, cert.c_str());
  return buf;
}

}  // namespace crossfeat
