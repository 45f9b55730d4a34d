// foldvol command line: invariants, equivalence, Moser conjugation,
// desingularization and the compatibility experiment.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "foldvol/compat.hpp"
#include "foldvol/desingularization.hpp"
#include "foldvol/error.hpp"
#include "foldvol/exterior.hpp"
#include "foldvol/invariants.hpp"
#include "foldvol/io.hpp"
#include "foldvol/moser_flow.hpp"

using namespace foldvol;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInequivalent = 2, kCertificate = 3, kMalformed = 4 };

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kObstruction:
    case ErrorKind::kIncomparable:
      return kInequivalent;
    case ErrorKind::kMalformedField:
    case ErrorKind::kMalformedInput:
    case ErrorKind::kNotFolded:
    case ErrorKind::kTransversality:
    case ErrorKind::kParityMismatch:
    case ErrorKind::kWrongParity:
    case ErrorKind::kProfileTooWide:
      return kMalformed;
    default:
      return kCertificate;
  }
}

bool g_json = false;

void emit(const Json& j) { std::cout << j.dump(1) << '\n'; }

std::string join(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(12);
  for (size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  return out.str();
}

// ---------------------------------------------------------------- invariants

int cmd_invariants(const std::string& path) {
  const FormFile f = load_form(path);
  Json j{{"regional_volumes", nullptr}, {"total", nullptr}, {"periods", nullptr},
         {"liouville", nullptr}};
  if (f.folded) {
    const RegionalVolumes v = regional_volumes(*f.folded);
    j["regional_volumes"] = v.volumes;
    j["total"] = v.total;
  } else {
    const ModularPeriods p = modular_periods(*f.bm);
    const LiouvilleVolume l = liouville_volume_pv(*f.bm);
    j["periods"] = p.periods;
    j["liouville"] = to_json(l);
    j["total"] = l.diverged ? Json(nullptr) : Json(l.value);
    if (!f.bm->has_singular_part()) {
      j["regional_volumes"] = regional_volumes(f.bm->assemble(), f.bm->critical()).volumes;
    }
  }
  j["symmetry_correction"] = f.symmetry_correction;
  if (g_json) {
    emit(j);
    return kOk;
  }
  if (f.folded) {
    std::printf("regional volumes: %s\ntotal: %.15g\n",
                join(j["regional_volumes"].get<std::vector<double>>()).c_str(),
                j["total"].get<double>());
  } else {
    const ModularPeriods p = modular_periods(*f.bm);
    for (size_t r = 0; r < p.periods.size(); ++r) {
      std::printf("circle %zu periods (order 1..%d): %s\n", r, p.m, join(p.periods[r]).c_str());
    }
    const LiouvilleVolume l = liouville_volume_pv(*f.bm);
    if (l.diverged) {
      std::printf("liouville volume: diverges (finite part %.15g)\n", l.finite_part);
    } else {
      std::printf("liouville volume: %.15g\n", l.value);
    }
  }
  if (f.symmetry_correction > 0.0) {
    std::printf("note: symmetrized input, correction norm %.3g\n", f.symmetry_correction);
  }
  return kOk;
}

// ---------------------------------------------------------------- equiv

int cmd_equiv(const std::string& a, const std::string& b, double tol) {
  const FormFile f0 = load_form(a), f1 = load_form(b);
  if (bool(f0.folded) != bool(f1.folded)) {
    throw Error(ErrorKind::kIncomparable, "a folded form and a b^m form are never compared");
  }
  Json j;
  bool equivalent = false;
  if (f0.folded) {
    const FoldedVerdict v = folded_equivalent(*f0.folded, *f1.folded, tol);
    equivalent = v.equivalent;
    j = to_json(v);
    if (!g_json) std::printf("defects: %s\n", join(v.defects).c_str());
  } else {
    const BmVerdict v = bm_equivalent(*f0.bm, *f1.bm, tol);
    equivalent = v.equivalent;
    j = to_json(v);
    if (!g_json) std::printf("volume gap %.3g, period gap %.3g\n", v.volume_gap, v.period_gap);
  }
  if (g_json) {
    emit(j);
  } else {
    std::printf("%s\n", equivalent ? "equivalent" : "not equivalent");
  }
  return equivalent ? kOk : kInequivalent;
}

// ---------------------------------------------------------------- moser

int cmd_moser(const std::string& a, const std::string& b, const MoserConfig& config,
              const std::string& map_path, const std::string& cert_path) {
  const FormFile f0 = load_form(a), f1 = load_form(b);
  if (!f0.folded || !f1.folded) {
    throw Error(ErrorKind::kMalformedInput, "moser takes two folded forms");
  }
  MoserResult result;
  try {
    result = run_moser(*f0.folded, *f1.folded, config);
  } catch (const ObstructionError& e) {
    if (g_json) {
      emit({{"obstruction", true}, {"defects", e.defects()}, {"message", e.what()}});
    } else {
      std::printf("obstruction: regional volume defects V(1) - V(0) = (%s)\n",
                  join(e.defects()).c_str());
    }
    return kInequivalent;
  }
  Json cert = to_json(result.certificate);
  cert["primitive"] = to_json(result.primitive);
  if (!map_path.empty()) write_json(map_path, to_json(result.map));
  if (!cert_path.empty()) write_json(cert_path, cert);
  const FlowCertificate& c = result.certificate;
  if (g_json) {
    emit(cert);
  } else {
    std::printf("pullback error  %.3e (%s)\n", c.pullback_error, c.pullback_ok ? "ok" : "FAIL");
    std::printf("z fixing error  %.3e, trajectory %.3e (%s)\n", c.z_fixing_error,
                c.trajectory_z_error, c.z_ok ? "ok" : "FAIL");
    std::printf("min jacobian    %.6f (%s)\n", c.min_jacobian, c.orientation_ok ? "ok" : "FAIL");
    std::printf("primitive residual %.3e, vanishing orders %s\n", result.primitive.residual,
                join(result.primitive.orders).c_str());
  }
  return c.success() ? kOk : kCertificate;
}

// ---------------------------------------------------------------- desing

int cmd_desing(const std::string& path, double eps, int r, int grid, const std::string& out) {
  const FormFile f = load_form(path);
  if (!f.bm) throw Error(ErrorKind::kMalformedInput, "desing takes a b^m form");
  const int m = f.bm->m();
  const DesingProfile profile = m % 2 == 0 ? build_even_profile(m / 2, eps, r)
                                           : build_odd_profile((m - 1) / 2, eps, r);
  const DesingularizedForm d = desingularize(*f.bm, profile);
  const DesingReport report = verify_desing(d);
  if (!out.empty()) write_json(out, desingularized_to_json(d, grid));
  Json j = to_json(report);
  j["degree"] = profile.degree();
  j["contact_mismatch"] = profile.contact_mismatch();
  j["min_interior_slope"] = profile.min_interior_slope();
  const bool ok = m % 2 == 0 ? report.min_abs_coef > 0.0 || report.identical_to_source
                             : report.certified || report.identical_to_source;
  if (g_json) {
    emit(j);
  } else {
    std::printf("profile degree %d, contact mismatch %.3g, min interior slope %.6g\n",
                profile.degree(), profile.contact_mismatch(), profile.min_interior_slope());
    if (m % 2 == 0) {
      std::printf("min |coef| %.6g\n", report.min_abs_coef);
    } else {
      std::printf("folded certification: %s\n",
                  report.certified ? "ok" : report.certification_error.c_str());
      std::printf("slope ratio errors: %s\n", join(report.slope_ratio_error).c_str());
    }
    if (report.outside_applicable) {
      std::printf("outside-collar difference %.3g\n", report.outside_difference);
    } else {
      std::printf("outside-collar agreement not applicable for odd k > 0\n");
    }
  }
  return ok ? kOk : kCertificate;
}

// ---------------------------------------------------------------- compat

int cmd_compat(const std::string& a, const std::string& b, const ExperimentConfig& config,
               const std::string& csv) {
  const FormFile f0 = load_form(a), f1 = load_form(b);
  if (!f0.bm || !f1.bm) throw Error(ErrorKind::kMalformedInput, "compat takes two b^m forms");
  const CompatReport report = compat_experiment(*f0.bm, *f1.bm, config);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw Error(ErrorKind::kMalformedInput, "cannot write " + csv);
    out << compat_csv(report);
  }
  if (g_json) {
    emit(to_json(report));
  } else {
    std::printf("b^%d pair: %s (finite parts %.12g, %.12g)\n", report.m,
                report.bm_equivalent ? "equivalent" : "not equivalent", report.finite_part0,
                report.finite_part1);
    std::printf("%-8s %-12s %-12s %-12s %s\n", "eps", "folded", "max defect", "mechanism",
                "witness");
    for (const CompatRow& row : report.rows) {
      if (!row.error.empty()) {
        std::printf("%-8g error: %s\n", row.eps, row.error.c_str());
        continue;
      }
      std::string witness = "-";
      if (row.witness) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s (pullback %.2e)",
                      row.witness->success ? "pass" : "FAIL", row.witness->pullback_error);
        witness = buf;
      }
      std::printf("%-8g %-12s %-12.3e %-12.3e %s\n", row.eps,
                  row.folded_equivalent ? "equivalent" : "inequiv.", row.max_defect,
                  row.mechanism_defect, witness.c_str());
    }
  }
  if (!report.consistent()) return kCertificate;
  return report.bm_equivalent ? kOk : kInequivalent;
}

// ---------------------------------------------------------------- selftest

SpectralField2D random_field(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> g;
  Eigen::ArrayXXcd c(2 * k + 1, 2 * k + 1);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = Complex(g(rng), g(rng)) / double(c.size());
  }
  return SpectralField2D::symmetrized(std::move(c), nullptr);
}

struct Check {
  std::string name;
  std::function<std::pair<bool, std::string>()> run;
};

int cmd_selftest() {
  const double inv_pi = 1.0 / std::numbers::pi;
  const CriticalSet z2({0.0, 0.5});
  const SpectralField2D s = SpectralField2D::sine(1, 0, 1.0);
  auto fmt = [](const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return std::string(buf);
  };
  std::vector<Check> checks{
      {"d o d = 0 on random forms",
       [&] {
         std::mt19937_64 rng(7);
         double worst = 0.0;
         for (int i = 0; i < 10; ++i) {
           const TwoForm dd = d1(d0(random_field(rng, 16)));
           worst = std::max(worst, dd.coef.spectral_part().max_abs_coeff());
           const OneForm w{random_field(rng, 16), random_field(rng, 16)};
           worst = std::max(worst, std::abs(d1(w).integral()));
         }
         return std::pair{worst <= 1e-13, fmt("%.2e", worst)};
       }},
      {"regional volumes of sin 2 pi x",
       [&] {
         const RegionalVolumes v = regional_volumes(certify_folded(TwoForm{s}, z2));
         const double err =
             std::max(std::abs(v.volumes[0] - inv_pi), std::abs(v.volumes[1] + inv_pi));
         return std::pair{err <= 1e-10, fmt("%.2e", err)};
       }},
      {"moser witness (N = 128, 50 steps)",
       [&] {
         const SpectralField2D w1 = s + 0.3 * multiply(s, SpectralField2D::cosine(0, 1, 1.0));
         MoserConfig cfg;
         cfg.grid = 128;
         cfg.steps = 50;
         const MoserResult r =
             run_moser(certify_folded(TwoForm{s}, z2), certify_folded(TwoForm{w1}, z2), cfg);
         return std::pair{r.certificate.success(), fmt("pullback %.2e", r.certificate.pullback_error)};
       }},
      {"obstruction for 1.1 scaling",
       [&] {
         try {
           run_moser(certify_folded(TwoForm{s}, z2), certify_folded(TwoForm{1.1 * s}, z2));
         } catch (const ObstructionError& e) {
           const double err = std::max(std::abs(e.defects()[0] - 0.1 * inv_pi),
                                       std::abs(e.defects()[1] + 0.1 * inv_pi));
           return std::pair{err <= 1e-9, fmt("%.2e", err)};
         }
         return std::pair{false, std::string("no obstruction raised")};
       }},
      {"modular periods are Fourier means",
       [&] {
         const CriticalSet z({0.0}, {}, 0.2);
         const BmNambuForm theta(
             2, z,
             {LaurentData{{SpectralField1D::constant(0.7, 2) + SpectralField1D::cosine(1, 0.2, 2),
                           SpectralField1D::constant(-0.3, 2)}}},
             SpectralField2D(0));
         const ModularPeriods p = modular_periods(theta);
         const double err = std::max(std::abs(p.at(0, 2) - 0.7), std::abs(p.at(0, 1) + 0.3));
         return std::pair{err <= 1e-10, fmt("%.2e", err)};
       }},
      {"PV divergence flag",
       [&] {
         const CriticalSet z({0.0}, {}, 0.2);
         const BmNambuForm even(2, z, {LaurentData{{SpectralField1D::constant(1.0)}}},
                                SpectralField2D(0));
         const BmNambuForm odd(1, z, {LaurentData{{SpectralField1D::constant(1.0)}}},
                               SpectralField2D(0));
         const bool ok = liouville_volume_pv(even).diverged && !liouville_volume_pv(odd).diverged;
         return std::pair{ok, std::string(ok ? "m=2 diverges, m=1 finite" : "wrong flags")};
       }},
      {"odd desingularization slope",
       [&] {
         const BmNambuForm theta = single_circle_form(1.0, 0.0, 0.0);
         const DesingularizedForm d = desingularize(theta, build_odd_profile(0, 0.1));
         const DesingReport r = verify_desing(d);
         const double err = r.slope_ratio_error.empty() ? 1.0 : r.slope_ratio_error[0];
         return std::pair{r.certified && err <= 1e-6, fmt("ratio error %.2e", err)};
       }},
      {"even profile C^3 gluing",
       [&] {
         const double mis = build_even_profile(1, 0.1).contact_mismatch();
         return std::pair{mis <= 1e-9, fmt("%.2e", mis)};
       }},
  };
  bool all = true;
  Json rows = Json::array();
  for (const Check& c : checks) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = c.run();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    all = all && ok;
    rows.push_back({{"check", c.name}, {"pass", ok}, {"detail", detail}});
    if (!g_json) std::printf("%-4s %-36s %s\n", ok ? "PASS" : "FAIL", c.name.c_str(), detail.c_str());
  }
  if (g_json) emit({{"pass", all}, {"checks", rows}});
  return all ? kOk : kCertificate;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--eps", "not a number: " + item);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"foldvol: folded volume forms and b^m-Nambu structures on T^2"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "machine-readable JSON on stdout");

  std::string a, b;
  double tol = kDefaultEquivalenceTol;

  auto* inv = app.add_subcommand("invariants", "regional volumes, periods, Liouville volume");
  inv->add_option("form", a, "form JSON")->required();

  auto* eq = app.add_subcommand("equiv", "decide equivalence of two forms");
  eq->add_option("form0", a)->required();
  eq->add_option("form1", b)->required();
  eq->add_option("--tol", tol, "invariant tolerance");

  MoserConfig moser;
  std::string map_path = "moser_map.json", cert_path = "moser_certificate.json";
  auto* mo = app.add_subcommand("moser", "construct and certify the Moser map");
  mo->add_option("form0", a)->required();
  mo->add_option("form1", b)->required();
  mo->add_option("--steps", moser.steps)->check(CLI::PositiveNumber);
  mo->add_option("--grid", moser.grid)->check(CLI::Range(8, 4096));
  mo->add_option("--tol", moser.pullback_tol, "relative pullback tolerance");
  mo->add_option("--map", map_path, "DiscreteMap output");
  mo->add_option("--certificate", cert_path, "certificate output");

  double eps = 0.1;
  int contact = 3, grid = 128;
  std::string out_path;
  auto* de = app.add_subcommand("desing", "desingularize a b^m form");
  de->add_option("form", a)->required();
  de->add_option("--epsilon", eps)->check(CLI::PositiveNumber);
  de->add_option("--contact-order", contact)->check(CLI::Range(1, 8));
  de->add_option("--grid", grid, "sampling grid of the output")->check(CLI::Range(8, 4096));
  de->add_option("--out", out_path, "sampled form output");

  ExperimentConfig experiment;
  std::string eps_list, csv;
  auto* co = app.add_subcommand("compat", "desingularization compatibility experiment");
  co->add_option("form0", a)->required();
  co->add_option("form1", b)->required();
  co->add_option("--eps", eps_list, "comma-separated epsilon list");
  co->add_flag("--witness", experiment.witness, "run Moser for every row");
  co->add_option("--steps", experiment.moser.steps)->check(CLI::PositiveNumber);
  co->add_option("--grid", experiment.moser.grid)->check(CLI::Range(8, 4096));
  co->add_option("--contact-order", experiment.contact_order)->check(CLI::Range(1, 8));
  co->add_option("--csv", csv, "CSV export of the rows");

  auto* st = app.add_subcommand("selftest", "run the built-in invariant suite");

  for (CLI::App* sub : {inv, eq, mo, de, co, st}) sub->fallthrough();

  try {
    app.parse(argc, argv);
    if (!eps_list.empty()) experiment.eps = parse_list(eps_list);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*inv) return cmd_invariants(a);
    if (*eq) return cmd_equiv(a, b, tol);
    if (*mo) return cmd_moser(a, b, moser, map_path, cert_path);
    if (*de) return cmd_desing(a, eps, contact, grid, out_path);
    if (*co) return cmd_compat(a, b, experiment, csv);
    if (*st) return cmd_selftest();
  } catch (const Error& e) {
    std::fprintf(stderr, "foldvol: %s\n", e.what());
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "foldvol: %s\n", e.what());
    return kCertificate;
  }
  return kUsage;
}
