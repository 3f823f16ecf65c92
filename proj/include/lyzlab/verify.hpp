#pragma once

#include "lyzlab/common.hpp"
#include "lyzlab/gamma2.hpp"
#include "lyzlab/log_concave.hpp"
#include "lyzlab/polytope.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lyzlab::verify {

/// One inequality check. `pass` means ratio >= 1 - tolerance; equality-case
/// assertions compare |ratio - 1| on top of this. A ratio of +infinity is
/// legal only together with the `infinite_t` flag.
struct VerificationReport {
    std::string id;
    std::string kind;
    int n = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double tolerance = 0.0;
    std::string backend = "analytic";
    double error_bound = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> flags;
    bool pass = false;

    bool has_flag(const std::string& f) const;
};

/// Right side of the polar inequality: (n+1)^{(n+1)/2} omega_n / (n! n^{n/2}).
double lyz_polar_constant(int n);

/// Right side of the functional inequality:
/// 8^{n/2} (n+1)^{(n+1)/2} Gamma(n/2+1) omega_n / (n! n^n).
double main_constant(int n);

struct NegLogT {
    double value = 0.0;  // +infinity allowed
    bool unbounded_near_origin = false;
};

/// -log t = sup { phi*(y / phi*(y)) : y in supp mu_f }. Analytic for the
/// closed-form families; otherwise sampled from the surface measure and
/// polished by coordinate-wise golden sections around the top candidates.
NegLogT neg_log_t(const logconcave::LogConcaveFn& f, lyz::Backend backend = lyz::Backend::analytic,
                  int resolution = 0, std::uint64_t seed = 0);

/// |K_t(g)| for t in (0,1]; throws InvalidLevel outside that range.
double level_set_volume(const logconcave::LogConcaveFn& g, double t);

struct CheckOptions {
    lyz::Backend backend = lyz::Backend::analytic;
    int resolution = 0;
    std::uint64_t seed = 0;
    int threads = 0;
    double tolerance = 0.0;  // 0: 1e-6 analytic / 3e-3 numeric
};

/// |K_t(f-dual)| J(Gamma_{-2}f) against the sharp constant. An infinite
/// -log t sets the `infinite_t` flag and passes strictly.
VerificationReport main_check(const logconcave::LogConcaveFn& f, const CheckOptions& opts = {});

/// |K-polar| |Gamma_{-2}K| against its sharp constant; exact facet sums.
VerificationReport lyz_polar_check(const bodies::Polytope& p);

/// |K||K-polar| for origin-symmetric K; throws NotSymmetric.
double mahler_product(const bodies::Polytope& p);
VerificationReport mahler_check(const bodies::Polytope& p);

/// Lemma-style containment:  int x phi*(x)^{-1} dnu  in  r K_t(f-dual),
/// verified through the membership criterion phi*(x0/r) <= -log t.
VerificationReport containment_check(const logconcave::LogConcaveFn& f,
                                     const logconcave::DiscreteMeasure& nu);

struct ConeDiagnostic {
    bool is_cone = false;
    double c = 0.0;
    double max_residual = 0.0;
    std::optional<bodies::Polytope> body_estimate;
};

/// Detects gauge-minus-constant structure on a sampled potential: c is the
/// median of x.grad phi - phi over interior cells, is_cone holds when the
/// residual stays below eps_cone (default 10 * max spacing).
ConeDiagnostic cone_form_diagnostic(const logconcave::LogConcaveFn& f, double eps_cone = 0.0);

enum class SweepKind { main, lyz_polar, mahler, ball_barthe };

const char* to_string(SweepKind k);

struct SweepResult {
    std::vector<VerificationReport> reports;
    double min_ratio = 0.0;
    bool all_pass = true;
    /// serialized offending instances for replay, one JSON object per failure
    std::vector<std::string> failure_dumps;
};

/// Deterministic randomized sweep; instance i derives its stream from
/// (seed, i) so single instances can be replayed from the dumps.
SweepResult sweep(SweepKind kind, int count, std::uint64_t seed, int n,
                  const CheckOptions& opts = {});

}  // namespace lyzlab::verify
