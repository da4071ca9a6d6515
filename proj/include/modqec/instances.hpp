#ifndef MODQEC_INSTANCES_HPP
#define MODQEC_INSTANCES_HPP

#include "modqec/qec.hpp"

#include <array>
#include <string>
#include <vector>

namespace modqec {

/// Declarative description of a generated instance family.
struct InstanceSpec {
    enum class Kind { identity, subsystem, block_sum, perturbed, random };

    Kind kind = Kind::subsystem;
    std::vector<Index> dims;        // per kind, see the generators below
    std::vector<double> weights;    // block_sum only
    double epsilon = 0.0;           // perturbed only
    std::uint64_t seed = 0;
    std::string base_path;          // perturbed only: instance file to perturb
};

/// Exact subsystem code.  H = C^b (x) C^b', K = C^{a1 a2}; B = M_b (x) 1.
/// Requires b' = b (no vector is cyclic and separating for M_b (x) 1_{b'}
/// otherwise) and b^2 | a1 a2.  For a1 a2 = b^2 the code is the Haar tensor
/// unitary case with A = M_{a1} (x) 1; for a1 a2 > b^2 the boundary algebra
/// is a Haar-conjugated copy of M_b (x) 1_b (x) D with D diagonal on the
/// extra factor, which keeps V Omega cyclic and separating while making A a
/// proper (center-carrying) subalgebra.  Throws InvalidDims when the
/// hypotheses cannot be met.
EncodingInstance make_subsystem_code(Index b, Index bp, Index a1, Index a2, std::uint64_t seed);

/// Trivial encoding: V = 1 on C^{b^2} with A = B = M_b (x) 1_b.
EncodingInstance make_identity_code(Index b, std::uint64_t seed);

/// Same algebras and reference vector as the subsystem code but an
/// independent Haar isometry: satisfies the standing hypotheses while
/// breaking complementary recovery (a structural negative control).
EncodingInstance make_random_code(Index b, Index a1, Index a2, std::uint64_t seed);

/// Direct sum of subsystem codes with strictly positive weights on the
/// reference vector; the summands make both algebras center-carrying.
EncodingInstance make_block_sum(const std::vector<std::array<Index, 4>>& specs,
                                const std::vector<double>& weights, std::uint64_t seed);

/// V <- polar(V + epsilon G) with a seeded Gaussian G; algebras and omega
/// unchanged.  Reseeds G up to 10 times if the cyclic/separating hypothesis
/// is lost, then throws HypothesisLost.  epsilon = 0 returns the instance
/// unchanged.
EncodingInstance perturb(const EncodingInstance& instance, double epsilon, std::uint64_t seed);

enum class DecayLaw { one_over_n, one_over_n_squared, constant };

/// Sequence sharing H, B, Omega: the n-th element perturbs the base with
/// epsilon_n = epsilon * decay(n).
std::vector<EncodingInstance> make_sequence(const EncodingInstance& base, int n_max,
                                            DecayLaw decay, double epsilon, std::uint64_t seed);

/// Materialize an InstanceSpec (dispatch over kinds).
EncodingInstance make_instance(const InstanceSpec& spec);

/// Instance file format modular-qec/instance/v1: complex matrices as nested
/// row-major arrays of [re, im] pairs.  Round trips are exact in floating
/// point and byte-stable.  Throws ParseError / SchemaVersionMismatch.
std::string instance_to_json(const EncodingInstance& instance);
EncodingInstance instance_from_json(const std::string& text);
void save_instance(const EncodingInstance& instance, const std::string& path);
EncodingInstance load_instance(const std::string& path);

/// Content hash (FNV-1a over the canonical serialization), used as the
/// instance id in reports.
std::string instance_content_hash(const EncodingInstance& instance);

} // namespace modqec

#endif
