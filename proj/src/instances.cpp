#include "modqec/instances.hpp"

#include "modqec/errors.hpp"
#include "modqec/rng.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace modqec {

using nlohmann::json;

namespace {

constexpr char kInstanceSchema[] = "modular-qec/instance/v1";

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    return x;
}

Vector full_support_vector(Rng& rng, Index r) {
    RealVector w(r);
    double total = 0.0;
    for (Index l = 0; l < r; ++l) {
        w(l) = 0.5 / static_cast<double>(r) + rng.uniform();
        total += w(l);
    }
    Vector v(r);
    for (Index l = 0; l < r; ++l) {
        const double theta = 2.0 * M_PI * rng.uniform();
        v(l) = std::sqrt(w(l) / total) * Complex(std::cos(theta), std::sin(theta));
    }
    return v;
}

} // namespace

EncodingInstance make_subsystem_code(Index b, Index bp, Index a1, Index a2,
                                     std::uint64_t seed) {
    if (b < 1 || bp < 1 || a1 < b || a2 < bp)
        throw InvalidDims("subsystem code needs 1 <= b <= a1 and 1 <= b' <= a2");
    if (bp != b)
        throw InvalidDims("bulk legs must match (b' = b): M_b (x) 1_b' admits no cyclic and "
                          "separating vector otherwise");
    const Index h = b * bp;
    const Index k = a1 * a2;
    if (k % (b * b) != 0)
        throw InvalidDims("boundary dimension a1*a2 must be a multiple of b^2 for an exact "
                          "code with cyclic and separating V Omega");
    const Index r = k / (b * b);

    Rng rng(seed);
    const VonNeumannAlgebra b_algebra = VonNeumannAlgebra::tensor_factor(b, b);
    for (int attempt = 0; attempt < 10; ++attempt) {
        const Vector omega = rng.full_schmidt_vector(b);
        Matrix v;
        std::vector<AlgebraBlock> a_blocks;
        if (r == 1) {
            // Haar tensor unitary case: A = M_{a1} (x) 1.
            v = kron(rng.haar_isometry(b, b), rng.haar_isometry(b, b));
            a_blocks.push_back({a1, a2, Matrix::Identity(k, k)});
        } else {
            // K = C^b (x) C^b (x) C^r up to a Haar unitary; the isometry
            // plants the auxiliary leg in a fixed full-support vector and A
            // carries a diagonal algebra there.
            const Matrix u = rng.haar_isometry(k, k);
            const Vector aux = full_support_vector(rng, r);
            v = u * kron(Matrix::Identity(h, h), Matrix(aux));
            for (Index l = 0; l < r; ++l) {
                Matrix e_l = Matrix::Zero(r, 1);
                e_l(l, 0) = 1.0;
                a_blocks.push_back({b, b, u * kron(Matrix::Identity(h, h), e_l)});
            }
        }
        EncodingInstance instance{h,
                                  k,
                                  std::move(v),
                                  VonNeumannAlgebra::from_block_data(std::move(a_blocks), k),
                                  b_algebra,
                                  omega,
                                  "subsystem",
                                  seed,
                                  0.0};
        try {
            instance.validate();
            return instance;
        } catch (const Error&) {
            continue;
        }
    }
    throw InvalidDims("cyclic/separating verification failed after 10 reseeds");
}

EncodingInstance make_identity_code(Index b, std::uint64_t seed) {
    if (b < 1) throw InvalidDims("identity code needs b >= 1");
    Rng rng(seed);
    const Index h = b * b;
    const VonNeumannAlgebra alg = VonNeumannAlgebra::tensor_factor(b, b);
    for (int attempt = 0; attempt < 10; ++attempt) {
        EncodingInstance instance{h,   h,   Matrix::Identity(h, h), alg, alg,
                                  rng.full_schmidt_vector(b), "identity", seed, 0.0};
        try {
            instance.validate();
            return instance;
        } catch (const Error&) {
            continue;
        }
    }
    throw InvalidDims("identity code failed validation");
}

EncodingInstance make_random_code(Index b, Index a1, Index a2, std::uint64_t seed) {
    EncodingInstance instance = make_subsystem_code(b, b, a1, a2, mix_seed(seed, 17));
    Rng rng(seed);
    for (int attempt = 0; attempt < 10; ++attempt) {
        EncodingInstance candidate = instance;
        candidate.V = rng.haar_isometry(instance.k_dim, instance.h_dim);
        candidate.kind = "random";
        candidate.seed = seed;
        try {
            candidate.validate();
            return candidate;
        } catch (const Error&) {
            continue;
        }
    }
    throw InvalidDims("random code failed the cyclic/separating hypothesis after 10 reseeds");
}

EncodingInstance make_block_sum(const std::vector<std::array<Index, 4>>& specs,
                                const std::vector<double>& weights, std::uint64_t seed) {
    if (specs.empty()) throw InvalidDims("block sum needs at least one block");
    if (weights.size() != specs.size())
        throw InvalidDims("block sum needs one weight per block");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0))
            throw InvalidDims("block weights must be strictly positive "
                              "(a vanishing weight makes Omega non-separating)");
        total += w;
    }

    std::vector<EncodingInstance> parts;
    for (std::size_t i = 0; i < specs.size(); ++i)
        parts.push_back(make_subsystem_code(specs[i][0], specs[i][1], specs[i][2], specs[i][3],
                                            mix_seed(seed, i)));
    if (parts.size() == 1) return parts.front();

    Index h = 0, k = 0;
    std::vector<VonNeumannAlgebra> a_parts, b_parts;
    for (const auto& part : parts) {
        h += part.h_dim;
        k += part.k_dim;
        a_parts.push_back(part.A);
        b_parts.push_back(part.B);
    }
    Matrix v = Matrix::Zero(k, h);
    Vector omega = Vector::Zero(h);
    Index ho = 0, ko = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        v.block(ko, ho, parts[i].k_dim, parts[i].h_dim) = parts[i].V;
        omega.segment(ho, parts[i].h_dim) = std::sqrt(weights[i] / total) * parts[i].omega;
        ho += parts[i].h_dim;
        ko += parts[i].k_dim;
    }

    EncodingInstance instance{h,
                              k,
                              std::move(v),
                              VonNeumannAlgebra::direct_sum(a_parts),
                              VonNeumannAlgebra::direct_sum(b_parts),
                              std::move(omega),
                              "block_sum",
                              seed,
                              0.0};
    instance.validate();
    return instance;
}

EncodingInstance perturb(const EncodingInstance& instance, double epsilon, std::uint64_t seed) {
    if (epsilon == 0.0) return instance;
    if (epsilon < 0.0) throw InvalidDims("perturbation strength must be >= 0");

    Rng rng(seed);
    for (int attempt = 0; attempt < 10; ++attempt) {
        const Matrix g = rng.gaussian(instance.k_dim, instance.h_dim);
        Eigen::JacobiSVD<Matrix> svd(instance.V + epsilon * g,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
        EncodingInstance candidate = instance;
        candidate.V = svd.matrixU() * svd.matrixV().adjoint();
        candidate.kind = "perturbed";
        candidate.seed = seed;
        candidate.epsilon = epsilon;
        try {
            candidate.validate();
            return candidate;
        } catch (const Error&) {
            continue;
        }
    }
    throw HypothesisLost("perturbation destroyed the cyclic/separating hypothesis "
                         "in 10 reseeds");
}

std::vector<EncodingInstance> make_sequence(const EncodingInstance& base, int n_max,
                                            DecayLaw decay, double epsilon,
                                            std::uint64_t seed) {
    if (n_max < 1) throw InvalidDims("sequence length must be >= 1");
    // One Gaussian direction shared across n: the family converges to the
    // base along a fixed ray, so deviations track the decay law instead of
    // per-n draw noise.
    std::vector<EncodingInstance> out;
    for (int n = 1; n <= n_max; ++n) {
        double eps_n = epsilon;
        if (decay == DecayLaw::one_over_n) eps_n = epsilon / n;
        if (decay == DecayLaw::one_over_n_squared) eps_n = epsilon / (n * n);
        out.push_back(perturb(base, eps_n, seed));
    }
    return out;
}

EncodingInstance make_instance(const InstanceSpec& spec) {
    if (spec.kind != InstanceSpec::Kind::perturbed && spec.epsilon != 0.0)
        throw InvalidDims("epsilon is only meaningful for the perturbed kind");
    switch (spec.kind) {
    case InstanceSpec::Kind::identity:
        if (spec.dims.size() != 1) throw InvalidDims("identity kind takes dims = b");
        return make_identity_code(spec.dims[0], spec.seed);
    case InstanceSpec::Kind::subsystem:
        if (spec.dims.size() != 4)
            throw InvalidDims("subsystem kind takes dims = b,b',a1,a2");
        return make_subsystem_code(spec.dims[0], spec.dims[1], spec.dims[2], spec.dims[3],
                                   spec.seed);
    case InstanceSpec::Kind::random:
        if (spec.dims.size() != 3) throw InvalidDims("random kind takes dims = b,a1,a2");
        return make_random_code(spec.dims[0], spec.dims[1], spec.dims[2], spec.seed);
    case InstanceSpec::Kind::block_sum: {
        if (spec.dims.empty() || spec.dims.size() % 4 != 0)
            throw InvalidDims("block_sum kind takes dims as 4-tuples per block");
        std::vector<std::array<Index, 4>> blocks;
        for (std::size_t i = 0; i + 3 < spec.dims.size(); i += 4)
            blocks.push_back({spec.dims[i], spec.dims[i + 1], spec.dims[i + 2],
                              spec.dims[i + 3]});
        std::vector<double> weights = spec.weights;
        if (weights.empty()) weights.assign(blocks.size(), 1.0);
        return make_block_sum(blocks, weights, spec.seed);
    }
    case InstanceSpec::Kind::perturbed: {
        if (spec.base_path.empty())
            throw InvalidDims("perturbed kind needs a base instance file");
        return perturb(load_instance(spec.base_path), spec.epsilon, spec.seed);
    }
    }
    throw InvalidDims("unknown instance kind");
}

// --- serialization -----------------------------------------------------------

namespace {

json matrix_to_json_value(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json_value(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(json::array({v(i).real(), v(i).imag()}));
    return out;
}

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex entries are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json_value(const json& j, Index rows, Index cols, const std::string& field) {
    if (!j.is_array() || static_cast<Index>(j.size()) != rows)
        throw ParseError(field + ": expected " + std::to_string(rows) + " rows");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw ParseError(field + ": row " + std::to_string(i) + " has wrong length");
        for (Index c = 0; c < cols; ++c)
            m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

Vector vector_from_json_value(const json& j, Index dim, const std::string& field) {
    if (!j.is_array() || static_cast<Index>(j.size()) != dim)
        throw ParseError(field + ": expected " + std::to_string(dim) + " entries");
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = complex_from_json(j[static_cast<std::size_t>(i)]);
    return v;
}

const json& require_field(const json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
    return *it;
}

std::vector<Matrix> basis_from_json(const json& j, Index dim, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ParseError(field + ": expected a basis array");
    std::vector<Matrix> basis;
    for (std::size_t i = 0; i < j.size(); ++i)
        basis.push_back(matrix_from_json_value(j[i], dim, dim,
                                               field + "[" + std::to_string(i) + "]"));
    return basis;
}

} // namespace

std::string instance_to_json(const EncodingInstance& instance) {
    json j;
    j["schema"] = kInstanceSchema;
    j["h_dim"] = instance.h_dim;
    j["k_dim"] = instance.k_dim;
    j["V"] = matrix_to_json_value(instance.V);
    json a_basis = json::array();
    for (const Matrix& b : instance.A.basis()) a_basis.push_back(matrix_to_json_value(b));
    j["A_basis"] = std::move(a_basis);
    json b_basis = json::array();
    for (const Matrix& b : instance.B.basis()) b_basis.push_back(matrix_to_json_value(b));
    j["B_basis"] = std::move(b_basis);
    j["omega"] = vector_to_json_value(instance.omega);
    j["meta"] = {{"kind", instance.kind},
                 {"seed", instance.seed},
                 {"epsilon", instance.epsilon}};
    return j.dump();
}

EncodingInstance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    try {
        const std::string schema = require_field(j, "schema").get<std::string>();
        if (schema != kInstanceSchema)
            throw SchemaVersionMismatch("got '" + schema + "', expected '" + kInstanceSchema +
                                        "'");
        const Index h = require_field(j, "h_dim").get<Index>();
        const Index k = require_field(j, "k_dim").get<Index>();
        if (h < 1 || k < h) throw ParseError("inconsistent dimensions");

        EncodingInstance instance{
            h,
            k,
            matrix_from_json_value(require_field(j, "V"), k, h, "V"),
            VonNeumannAlgebra::from_orthonormal_basis(
                basis_from_json(require_field(j, "A_basis"), k, "A_basis"), k),
            VonNeumannAlgebra::from_orthonormal_basis(
                basis_from_json(require_field(j, "B_basis"), h, "B_basis"), h),
            vector_from_json_value(require_field(j, "omega"), h, "omega"),
            "custom",
            0,
            0.0};
        if (j.contains("meta")) {
            const json& meta = j["meta"];
            if (meta.contains("kind")) instance.kind = meta["kind"].get<std::string>();
            if (meta.contains("seed")) instance.seed = meta["seed"].get<std::uint64_t>();
            if (meta.contains("epsilon")) instance.epsilon = meta["epsilon"].get<double>();
        }
        instance.validate();
        return instance;
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

void save_instance(const EncodingInstance& instance, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << instance_to_json(instance) << '\n';
}

EncodingInstance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return instance_from_json(buffer.str());
}

std::string instance_content_hash(const EncodingInstance& instance) {
    const std::string text = instance_to_json(instance);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << hash;
    return out.str();
}

} // namespace modqec
