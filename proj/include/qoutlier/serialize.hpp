#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "qoutlier/qmat.hpp"

namespace qoutlier {

using Json = nlohmann::json;

// Canonical serialization ⟨X⟩: key-sorted, no whitespace, reals printed with
// up to 17 significant decimal digits (round-trip exact). Its bit length is
// the code-length surrogate used wherever a description length is needed.

std::string canonical_real(double x);

std::string canonical_state_json(const PureState& psi);
std::string canonical_op_json(const std::string& kind, const Matrix& entries);

inline std::string canonical_hermitian_json(const HermitianOp& h) {
    return canonical_op_json("hermitian", h.entries());
}
inline std::string canonical_density_json(const DensityMatrix& d) {
    return canonical_op_json("density", d.entries());
}
inline std::string canonical_projector_json(const Projector& p) {
    return canonical_op_json("projector", p.entries());
}

// ℓ(X) = 8 × byte length of the canonical serialization.
inline long code_length_bits(const std::string& canonical) {
    return 8L * static_cast<long>(canonical.size());
}

// ℓ(k) for a bare integer parameter: 8 × decimal digit count.
long code_length_bits(long value);

// Stable content hash (FNV-1a 64, hex) of canonical bytes.
std::string content_hash(const std::string& canonical);

PureState parse_state(const Json& j);
HermitianOp parse_hermitian(const Json& j);
DensityMatrix parse_density(const Json& j);
Projector parse_projector(const Json& j);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace qoutlier
