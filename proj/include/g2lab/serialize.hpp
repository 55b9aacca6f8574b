#pragma once

#include <string>

#include "json.hpp"

#include "g2lab/blocky.hpp"
#include "g2lab/constructions.hpp"
#include "g2lab/discrepancy.hpp"
#include "g2lab/gamma2.hpp"
#include "g2lab/semilinear.hpp"
#include "g2lab/spectral.hpp"

namespace g2lab {

using Json = nlohmann::ordered_json;

/// 12 significant digits ("%.12g"); "nan", "inf", "-inf" for non-finite values.
std::string format_g12(double x);

Json to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const Json& j);

/// Values are decimal strings, matrices nested arrays at full precision.
Json to_json(const FactorizationCert& cert);
Json to_json(const WitnessCert& cert);
Json to_json(const SchattenDatum& datum);
Json to_json(const LowerCert& cert);
/// Throws InputError on malformed input. The value is recomputed, not trusted.
FactorizationCert factorization_from_json(const Json& j);
/// Keeps the stated value: it depends on the target matrix, so verify_witness
/// checks the claim against the target.
WitnessCert witness_from_json(const Json& j);

/// Bounds with every candidate; certificates only when `with_certs`.
Json to_json(const Gamma2Bounds& bounds, bool with_certs);

/// Label arrays per term.
Json to_json(const BlockyMatrix& term);
Json to_json(const ThinBlockyDecomposition& d);

Json to_json(const MntReport& report);

/// Parameters, seed actually used, retries, both halves, the certificate and
/// every diagnostic.
Json to_json(const SetSystemConstruction& c);

Json to_json(const SemilinearInstance& inst);
Json to_json(const DominanceInstance& inst);
/// Throws InputError on malformed input or failed validation.
SemilinearInstance semilinear_from_json(const Json& j);
DominanceInstance dominance_from_json(const Json& j);

/// Parses a whole file; throws InputError if unreadable or not JSON.
Json read_json_file(const std::string& path);

}  // namespace g2lab
