#include "foldvol/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "foldvol/error.hpp"

namespace foldvol {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorKind::kMalformedInput, what);
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

int read_bandwidth(const Json& j) {
  const Json& k = member(j, "K");
  if (!k.is_number_integer() || k.get<int>() < 0) malformed("\"K\" must be a nonnegative integer");
  return k.get<int>();
}

std::vector<double> number_list(const Json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const Json& v : j) {
    if (!v.is_number()) malformed(std::string(what) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Json grid_list(const Eigen::ArrayXXd& a) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.push_back(a(i, j));
  }
  return out;
}

}  // namespace

Json to_json(const SpectralField2D& f) {
  const int k = f.bandwidth();
  Json coeffs = Json::array();
  for (int kx = -k; kx <= k; ++kx) {
    for (int ky = -k; ky <= k; ++ky) {
      const Complex c = f.coeff(kx, ky);
      if (c == Complex{}) continue;
      coeffs.push_back({kx, ky, c.real(), c.imag()});
    }
  }
  return {{"K", k}, {"coeffs", coeffs}};
}

SpectralField2D field_from_json(const Json& j, double* correction) {
  const int k = read_bandwidth(j);
  Eigen::ArrayXXcd table = Eigen::ArrayXXcd::Zero(2 * k + 1, 2 * k + 1);
  const Json& coeffs = member(j, "coeffs");
  if (!coeffs.is_array()) malformed("\"coeffs\" must be an array");
  for (const Json& e : coeffs) {
    if (!e.is_array() || e.size() != 4) malformed("2D coefficient entries are [kx, ky, re, im]");
    if (!e[0].is_number_integer() || !e[1].is_number_integer() || !e[2].is_number() ||
        !e[3].is_number()) {
      malformed("2D coefficient entries are [int, int, real, real]");
    }
    const int kx = e[0].get<int>(), ky = e[1].get<int>();
    if (std::abs(kx) > k || std::abs(ky) > k) malformed("mode outside the declared bandwidth");
    table(kx + k, ky + k) += Complex(e[2].get<double>(), e[3].get<double>());
  }
  if (!table.isFinite().all()) malformed("nonfinite coefficient");
  try {
    return SpectralField2D::symmetrized(std::move(table), correction);
  } catch (const Error& e) {
    malformed(e.what());
  }
}

Json to_json(const SpectralField1D& f) {
  const int k = f.bandwidth();
  Json coeffs = Json::array();
  for (int i = -k; i <= k; ++i) {
    const Complex c = f.coeff(i);
    if (c == Complex{}) continue;
    coeffs.push_back({i, c.real(), c.imag()});
  }
  return {{"K", k}, {"coeffs", coeffs}};
}

SpectralField1D field1d_from_json(const Json& j) {
  const int k = read_bandwidth(j);
  Eigen::VectorXcd table = Eigen::VectorXcd::Zero(2 * k + 1);
  const Json& coeffs = member(j, "coeffs");
  if (!coeffs.is_array()) malformed("\"coeffs\" must be an array");
  for (const Json& e : coeffs) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number() ||
        !e[2].is_number()) {
      malformed("1D coefficient entries are [k, re, im]");
    }
    const int i = e[0].get<int>();
    if (std::abs(i) > k) malformed("mode outside the declared bandwidth");
    table(i + k) += Complex(e[1].get<double>(), e[2].get<double>());
  }
  // Same symmetrization as the 2D loader.
  Eigen::VectorXcd sym(table.size());
  for (int i = 0; i <= 2 * k; ++i) sym(i) = 0.5 * (table(i) + std::conj(table(2 * k - i)));
  return SpectralField1D(std::move(sym));
}

Json to_json(const FoldedVolumeForm& omega) {
  if (!omega.coef().band_limited()) {
    throw Error(ErrorKind::kMalformedInput, "only band-limited folded forms serialize exactly");
  }
  Json j{{"type", "folded"},
         {"circles", omega.critical().circles()},
         {"coorientations", omega.certificate().coorientations},
         {"collar_width", omega.critical().collar_width()},
         {"coef", to_json(omega.coef().spectral_part())}};
  return j;
}

Json to_json(const BmNambuForm& theta) {
  Json laurent = Json::array();
  for (const LaurentData& d : theta.laurent()) {
    Json alpha = Json::array();
    for (const SpectralField1D& a : d.alpha) alpha.push_back(to_json(a));
    laurent.push_back({{"alpha", alpha}});
  }
  return {{"type", "bm"},
          {"m", theta.m()},
          {"circles", theta.critical().circles()},
          {"laurent", laurent},
          {"beta", to_json(theta.beta())},
          {"smooth", to_json(theta.smooth())},
          {"collar_width", theta.critical().collar_width()},
          {"folds", theta.folds()}};
}

FormFile form_from_json(const Json& j) {
  FormFile out;
  const Json& type = member(j, "type");
  if (!type.is_string()) malformed("\"type\" must be a string");
  const std::vector<double> circles = number_list(member(j, "circles"), "\"circles\"");
  double width = 0.0;
  if (j.contains("collar_width")) {
    if (!j["collar_width"].is_number()) malformed("\"collar_width\" must be a number");
    width = j["collar_width"].get<double>();
  }
  double corr = 0.0;
  try {
    if (type == "folded") {
      std::vector<int> signs;
      if (j.contains("coorientations")) {
        for (double s : number_list(j["coorientations"], "\"coorientations\"")) {
          if (s != 1.0 && s != -1.0) malformed("coorientations are +1 or -1");
          signs.push_back(static_cast<int>(s));
        }
      }
      const SpectralField2D coef = field_from_json(member(j, "coef"), &corr);
      out.symmetry_correction = corr;
      const CriticalSet z(circles, signs, width);
      out.folded = certify_folded(TwoForm{Field(coef)}, z);
    } else if (type == "bm") {
      const Json& m = member(j, "m");
      if (!m.is_number_integer()) malformed("\"m\" must be an integer");
      std::vector<LaurentData> laurent;
      const Json& lj = member(j, "laurent");
      if (!lj.is_array()) malformed("\"laurent\" must be an array");
      for (const Json& entry : lj) {
        LaurentData d;
        const Json& alpha = member(entry, "alpha");
        if (!alpha.is_array()) malformed("\"alpha\" must be an array");
        for (const Json& a : alpha) d.alpha.push_back(field1d_from_json(a));
        laurent.push_back(std::move(d));
      }
      double c1 = 0.0, c2 = 0.0;
      const SpectralField2D smooth = field_from_json(member(j, "smooth"), &c1);
      const SpectralField2D beta =
          j.contains("beta") ? field_from_json(j["beta"], &c2) : SpectralField2D(0);
      out.symmetry_correction = c1 + c2;
      std::vector<double> folds;
      if (j.contains("folds")) folds = number_list(j["folds"], "\"folds\"");
      out.bm = BmNambuForm(m.get<int>(), CriticalSet(circles, {}, width), std::move(laurent),
                           smooth, beta, std::move(folds));
    } else {
      malformed("unknown form type \"" + type.get<std::string>() + "\"");
    }
  } catch (const Json::exception& e) {
    malformed(e.what());
  }
  return out;
}

FormFile load_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    malformed(path + ": " + e.what());
  }
  return form_from_json(j);
}

Json to_json(const DiscreteMap& map) {
  return {{"N", map.resolution()},
          {"dx", grid_list(map.displacement_x())},
          {"dy", grid_list(map.displacement_y())}};
}

DiscreteMap map_from_json(const Json& j) {
  const Json& nj = member(j, "N");
  if (!nj.is_number_integer() || nj.get<int>() < 1) malformed("\"N\" must be a positive integer");
  const int n = nj.get<int>();
  const std::vector<double> dx = number_list(member(j, "dx"), "\"dx\"");
  const std::vector<double> dy = number_list(member(j, "dy"), "\"dy\"");
  const size_t size = static_cast<size_t>(n) * n;
  if (dx.size() != size || dy.size() != size) malformed("displacement arrays must have N*N entries");
  Eigen::ArrayXXd ax(n, n), ay(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      ax(i, k) = dx[static_cast<size_t>(i) * n + k];
      ay(i, k) = dy[static_cast<size_t>(i) * n + k];
    }
  }
  return DiscreteMap(std::move(ax), std::move(ay));
}

Json to_json(const FlowCertificate& c) {
  return {{"success", c.success()},
          {"pullback_error", c.pullback_error},
          {"z_fixing_error", c.z_fixing_error},
          {"trajectory_z_error", c.trajectory_z_error},
          {"min_jacobian", c.min_jacobian},
          {"max_displacement", c.max_displacement},
          {"steps", c.steps},
          {"grid", c.grid},
          {"pullback_ok", c.pullback_ok},
          {"z_ok", c.z_ok},
          {"orientation_ok", c.orientation_ok}};
}

Json to_json(const PrimitiveReport& r) {
  return {{"residual", r.residual},
          {"vanishing_orders", r.orders},
          {"max_jump", r.max_jump},
          {"residual_points", r.residual_points}};
}

Json to_json(const RegionalVolumes& v) {
  return {{"regional_volumes", v.volumes}, {"total", v.total}};
}

Json to_json(const FoldedVerdict& v) {
  return {{"equivalent", v.equivalent}, {"max_defect", v.max_defect}, {"defects", v.defects}};
}

Json to_json(const ModularPeriods& p) { return {{"m", p.m}, {"periods", p.periods}}; }

Json to_json(const LiouvilleVolume& l) {
  Json j{{"diverged", l.diverged},
         {"finite_part", l.finite_part},
         {"cutoffs", l.cutoffs},
         {"cutoff_integrals", l.cutoff_integrals}};
  j["value"] = l.diverged ? Json(nullptr) : Json(l.value);
  return j;
}

Json to_json(const BmVerdict& v) {
  return {{"equivalent", v.equivalent}, {"volume_gap", v.volume_gap}, {"period_gap", v.period_gap}};
}

Json to_json(const DesingReport& r) {
  Json j{{"identical_to_source", r.identical_to_source},
         {"min_abs_coef", r.min_abs_coef},
         {"certified", r.certified},
         {"slope_ratio_error", r.slope_ratio_error},
         {"outside_applicable", r.outside_applicable}};
  if (!r.certification_error.empty()) j["certification_error"] = r.certification_error;
  j["outside_difference"] = r.outside_applicable ? Json(r.outside_difference) : Json(nullptr);
  return j;
}

Json to_json(const CompatReport& r) {
  Json rows = Json::array();
  for (const CompatRow& row : r.rows) {
    Json j{{"eps", row.eps},
           {"volumes0", row.volumes0},
           {"volumes1", row.volumes1},
           {"folded_equivalent", row.folded_equivalent},
           {"max_defect", row.max_defect},
           {"mechanism_defect", row.mechanism_defect}};
    if (row.witness) {
      const WitnessSummary& w = *row.witness;
      // Wall time is left out so reports stay byte-identical across runs.
      j["witness"] = {{"success", w.success},
                      {"pullback_error", w.pullback_error},
                      {"z_fixing_error", w.z_fixing_error},
                      {"min_jacobian", w.min_jacobian},
                      {"primitive_residual", w.primitive_residual}};
    } else {
      j["witness"] = nullptr;
    }
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  Json j{{"m", r.m},
         {"bm_equivalent", r.bm_equivalent},
         {"periods0", r.periods0.periods},
         {"periods1", r.periods1.periods},
         {"finite_part0", r.finite_part0},
         {"finite_part1", r.finite_part1},
         {"critical", r.critical},
         {"consistent", r.consistent()},
         {"rows", rows}};
  return j;
}

Json desingularized_to_json(const DesingularizedForm& d, int n) {
  const DesingProfile& p = *d.profile;
  Json profile{{"parity", p.parity() == Parity::kEven ? "even" : "odd"},
               {"k", p.k()},
               {"epsilon", p.epsilon()},
               {"contact_order", p.contact_order()},
               {"degree", p.degree()},
               {"coefficients", std::vector<double>(p.coefficients().data(),
                                                    p.coefficients().data() +
                                                        p.coefficients().size())}};
  const Eigen::ArrayXXd values = sample_grid([&](double x, double y) { return d.omega(x, y); }, n);
  Json j{{"type", "sampled"},
         {"m", d.m},
         {"circles", d.critical.circles()},
         {"profile", profile},
         {"N", n},
         {"values", grid_list(values)}};
  if (d.folded) j["coorientations"] = d.folded->certificate().coorientations;
  return j;
}

std::string compat_csv(const CompatReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "eps,folded_equivalent,max_defect,mechanism_defect,witness_success,pullback_error,"
         "z_fixing_error,min_jacobian,error\n";
  for (const CompatRow& row : r.rows) {
    out << row.eps << ',' << (row.folded_equivalent ? 1 : 0) << ',' << row.max_defect << ','
        << row.mechanism_defect << ',';
    if (row.witness) {
      out << (row.witness->success ? 1 : 0) << ',' << row.witness->pullback_error << ','
          << row.witness->z_fixing_error << ',' << row.witness->min_jacobian;
    } else {
      out << ",,,";
    }
    std::string err = row.error;
    for (char& c : err) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << ',' << err << '\n';
  }
  return out.str();
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) malformed("cannot write " + path);
  out << j.dump(1) << '\n';
}

}  // namespace foldvol
