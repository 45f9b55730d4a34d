#pragma once

// JSON (and CSV) serialization of fields, forms, maps and reports.

#include <json.hpp>
#include <optional>
#include <string>

#include "foldvol/bm_structures.hpp"
#include "foldvol/compat.hpp"
#include "foldvol/desingularization.hpp"
#include "foldvol/invariants.hpp"
#include "foldvol/moser_flow.hpp"

namespace foldvol {

using Json = nlohmann::json;

// {"K": int, "coeffs": [[kx, ky, re, im], ...]}, zero entries omitted.
Json to_json(const SpectralField2D& f);
// Symmetrizes the table; the correction norm goes to *correction.
SpectralField2D field_from_json(const Json& j, double* correction = nullptr);

// {"K": int, "coeffs": [[k, re, im], ...]}
Json to_json(const SpectralField1D& f);
SpectralField1D field1d_from_json(const Json& j);

// {"type":"folded","circles":[...],"coorientations":[...],"coef":<field>}
Json to_json(const FoldedVolumeForm& omega);
// {"type":"bm","m":..,"circles":..,"laurent":[{"alpha":[...]}],"beta":..,
//  "smooth":..,"collar_width":..,"folds":[...]}
Json to_json(const BmNambuForm& theta);

// Either kind of form file. Folded forms are certified on load against the
// declared coorientations.
struct FormFile {
  std::optional<FoldedVolumeForm> folded;
  std::optional<BmNambuForm> bm;
  double symmetry_correction = 0.0;  // summed over all loaded fields
};

// Every structural problem surfaces as kMalformedInput.
FormFile form_from_json(const Json& j);
FormFile load_form(const std::string& path);

// {"N": int, "dx": [...], "dy": [...]}, entry i * N + j at (i/N, j/N).
Json to_json(const DiscreteMap& map);
DiscreteMap map_from_json(const Json& j);

Json to_json(const FlowCertificate& c);
Json to_json(const PrimitiveReport& r);
Json to_json(const RegionalVolumes& v);
Json to_json(const FoldedVerdict& v);
Json to_json(const ModularPeriods& p);
Json to_json(const LiouvilleVolume& l);
Json to_json(const BmVerdict& v);
Json to_json(const DesingReport& r);
Json to_json(const CompatReport& r);

// Sampled desingularized form: circles, profile data and an N x N grid.
Json desingularized_to_json(const DesingularizedForm& d, int n);

// One line per epsilon row.
std::string compat_csv(const CompatReport& r);

void write_json(const std::string& path, const Json& j);

}  // namespace foldvol
