#ifndef MODQEC_VERIFY_HPP
#define MODQEC_VERIFY_HPP

#include "modqec/instances.hpp"
#include "modqec/modular.hpp"

#include <optional>
#include <string>
#include <vector>

namespace modqec {

struct RunConfig {
    double tolerance = 1e-6;
    int samples = 20;
    std::vector<double> t_grid{-2.0, -1.0, -0.3, 0.0, 0.3, 1.0, 2.0};
    std::uint64_t seed = 1;
    int jobs = 0; // 0 = hardware concurrency
    bool check_support = true;
    bool check_lemma = false;
};

struct ConditionRecord {
    std::string name;
    double deviation = 0.0;
    bool pass = false;
    int samples_used = 0;
    std::string note;
};

struct VerificationReport {
    std::string instance_id;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::vector<ConditionRecord> conditions; // the first three drive the verdict
    std::string verdict;                     // ALL_PASS | ALL_FAIL | INCONSISTENT
    double elapsed_seconds = 0.0;
    std::string generated_at;
};

struct SequenceConditionReport {
    std::string name;
    std::vector<double> deviations; // delta_n, one per instance
    double fitted_exponent = 0.0;   // slope of log delta vs log n
    bool all_zero = false;          // every deviation under the zero floor
    bool monotone_decreasing = false;
    std::string note;
};

struct SequenceReport {
    std::vector<int> n_values;
    std::vector<SequenceConditionReport> conditions; // recovery, cocycle_flow, commutation
    bool implication_ordering_ok = false;
    std::string ordering_note;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    double elapsed_seconds = 0.0;
    std::string generated_at;
};

/// Default state sample: `config.samples` Haar vectors plus four structured
/// ones (Omega itself, a product vector, a rank-deficient vector, a near-Omega
/// perturbation), exercising faithful, non-faithful and near-degenerate
/// branches.
std::vector<Vector> sample_states(const EncodingInstance& instance, const RunConfig& config);

/// Theorem-1 condition (1): correctability of B and B' for the two
/// complementary restrictions of V*(.)V, via the privacy duality.
ConditionRecord check_recovery(const EncodingInstance& instance, double tol);

/// Theorem-1 condition (2): max over states and flow times of
/// || V [D omega_Omega : D omega_psi]_t - [D omega_{V Omega} : D omega_{V psi}]_t V ||_F
/// on both the algebra and its commutant.
ConditionRecord check_cocycle_flow(const EncodingInstance& instance,
                                   const std::vector<Vector>& states,
                                   const std::vector<double>& t_grid, double tol, int jobs = 0);

/// Theorem-1 condition (3): max over states of |S_A - S_B| on both layers;
/// symmetric infinities count as zero deviation, mixed ones as +inf.
ConditionRecord check_entropy(const EncodingInstance& instance,
                              const std::vector<Vector>& states, double tol, int jobs = 0);

/// Support identity || V s(omega_psi) - s(omega_{V psi}) V ||_F, both layers.
ConditionRecord check_support_intertwining(const EncodingInstance& instance,
                                           const std::vector<Vector>& states, double tol,
                                           int jobs = 0);

/// Lemma-style check that the cocycles of sampled cyclic-separating states
/// against omega regenerate the algebra; insufficient sampling (fewer than
/// two states or two distinct nonzero flow times) is reported as
/// SAMPLE_POOR rather than a violation.
ConditionRecord check_lemma_cocycle_generation(const VonNeumannAlgebra& m,
                                               const Vector& omega_vec,
                                               const RunConfig& config, int n_states = 8,
                                               std::vector<double> times = {0.7, 1.3});

/// Runs conditions (1)-(3) plus the auxiliary support and recovery
/// homomorphism checks; the verdict is ALL_PASS / ALL_FAIL when the three
/// main flags agree and INCONSISTENT otherwise (never silently resolved).
VerificationReport verify_theorem1(const EncodingInstance& instance, const RunConfig& config);

/// Theorem-2 sequence diagnostics.  Per n: (1) weak reconstruction deviation
/// of the Petz candidate recovery (and the homomorphism candidate when it
/// exists), (2) strong-operator cocycle intertwining deviation, (3) weak
/// commutation of recovered boundary observables against the opposite bulk
/// algebra; all rendered against a finite test dictionary.  Fits log-log
/// decay exponents and checks the (1) => (2) => (3) ordering.
/// Throws SequenceTooShort for fewer than 3 instances.
SequenceReport verify_theorem2(const std::vector<EncodingInstance>& sequence,
                               const RunConfig& config);

/// Report serialization (schema modular-qec/report/v1).  The volatile
/// "timestamp" object (wall-clock time and elapsed seconds) is the only
/// field excluded from the determinism contract.  Infinite deviations are
/// encoded as the string "+inf".
std::string report_to_json(const VerificationReport& report, const RunConfig& config);
std::string report_to_text(const VerificationReport& report);
std::string sequence_report_to_json(const SequenceReport& report, const RunConfig& config);
std::string sequence_report_to_text(const SequenceReport& report);

/// Exit code contract shared with the CLI: 0 ALL_PASS, 1 ALL_FAIL,
/// 3 INCONSISTENT.
int verdict_exit_code(const std::string& verdict);

} // namespace modqec

#endif
