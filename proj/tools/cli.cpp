#include "valcalc/cli.hpp"

#include <CLI11.hpp>
#include <iomanip>
#include <sstream>

#include "valcalc/serialize.hpp"
#include "valcalc/su2.hpp"

namespace valcalc {

namespace {

struct Settings {
  bool json = false;
  int threads = 1;
};

void print_matrix(std::ostream& out, const std::vector<std::string>& labels, const std::vector<std::string>& cells) {
  const size_t n = labels.size();
  size_t width = 0;
  for (const auto& s : labels) width = std::max(width, s.size());
  for (const auto& s : cells) width = std::max(width, s.size());
  width += 2;
  out << std::setw(int(width)) << "";
  for (const auto& l : labels) out << std::setw(int(width)) << l;
  out << '\n';
  for (size_t i = 0; i < n; ++i) {
    out << std::setw(int(width)) << labels[i];
    for (size_t j = 0; j < n; ++j) out << std::setw(int(width)) << cells[i * n + j];
    out << '\n';
  }
}

void emit_matrix(std::ostream& out, const Settings& s, const std::vector<std::string>& labels,
                 const std::vector<Scalar>& m) {
  std::vector<std::string> cells;
  for (const auto& x : m) cells.push_back(x.to_string());
  if (s.json) {
    Json rows = Json::array();
    for (size_t i = 0; i < labels.size(); ++i)
      rows.push_back(Json(std::vector<std::string>(cells.begin() + i * labels.size(),
                                                   cells.begin() + (i + 1) * labels.size())));
    out << Json{{"labels", labels}, {"matrix", rows}}.dump(2) << '\n';
  } else {
    print_matrix(out, labels, cells);
  }
}

void emit_value(std::ostream& out, const Settings& s, const char* key, const std::string& value) {
  if (s.json)
    out << Json{{key, value}}.dump(2) << '\n';
  else
    out << value << '\n';
}

std::vector<Vec> parse_plane(const std::string& text) {
  std::vector<Vec> frame;
  std::stringstream ss(text);
  std::string vec;
  while (std::getline(ss, vec, ';')) {
    Vec v;
    std::stringstream vs(vec);
    std::string c;
    while (std::getline(vs, c, ',')) v.push_back(std::stod(c));
    frame.push_back(v);
  }
  for (const auto& v : frame)
    if (v.size() != frame.front().size()) throw std::invalid_argument("plane vectors differ in dimension");
  // Gram-Schmidt
  for (size_t i = 0; i < frame.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      double d = 0;
      for (size_t c = 0; c < frame[i].size(); ++c) d += frame[i][c] * frame[j][c];
      for (size_t c = 0; c < frame[i].size(); ++c) frame[i][c] -= d * frame[j][c];
    }
    double n2 = 0;
    for (double x : frame[i]) n2 += x * x;
    if (n2 < 1e-24) throw std::invalid_argument("plane vectors are linearly dependent");
    for (double& x : frame[i]) x /= std::sqrt(n2);
  }
  return frame;
}

void emit_report(std::ostream& out, const Settings& s, const MCReport& r, const std::string& mode) {
  if (s.json) {
    Json j = to_json(r);
    j["mode"] = mode;
    out << j.dump(2) << '\n';
    return;
  }
  out << "mode            " << mode << '\n'
      << "samples         " << r.samples << '\n'
      << "seed            " << r.seed << '\n'
      << "estimate        " << format_double(r.estimate) << '\n'
      << "standard_error  " << format_double(r.standard_error) << '\n'
      << "exact           " << format_double(r.exact) << '\n'
      << "z_score         " << format_double(r.z_score) << '\n'
      << "rejected        " << r.rejected << '\n';
}

template <class F>
auto load(const std::string& path, F&& parse) {
  const Json j = read_json_file(path);
  try {
    return parse(j, "");
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

ValuationRep load_valuation(const std::string& path) {
  return load(path, [](const Json& j, const std::string& w) { return valuation_from_json(j, w); });
}

ConvexBody load_body(const std::string& path) {
  return load(path, [](const Json& j, const std::string& w) { return body_from_json(j, w); });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact calculus of smooth valuations on R^4", "valcalc"};
  app.require_subcommand(1);
  Settings settings;
  app.add_flag("--json", settings.json, "JSON output");
  app.add_option("--threads", settings.threads, "OpenMP threads for Monte Carlo and quadrature")
      ->check(CLI::PositiveNumber);

  std::string form_file, a_file, b_file, op_name, val_file, body_file, k_file, l_file, basis_name = "icosahedron",
                                                                                 u_text, plane_text;
  double tube = 0.0;
  uint64_t samples = 0, seed = 0;
  bool poincare = false;

  auto* rumin_cmd = app.add_subcommand("rumin", "Rumin differential of an (n-1)-form");
  rumin_cmd->add_option("--form", form_file, "form JSON")->required();
  int degree_cap = kRuminDegreeCap;
  rumin_cmd->add_option("--degree-cap", degree_cap, "largest ansatz degree")->check(CLI::NonNegativeNumber);

  auto* pair_cmd = app.add_subcommand("pair", "Alesker pairing of two valuations");
  pair_cmd->add_option("--a", a_file, "valuation JSON")->required();
  pair_cmd->add_option("--b", b_file, "valuation JSON")->required();

  auto* op_cmd = app.add_subcommand("op", "Apply sigma, lambda, signature or laplace");
  op_cmd->add_option("--name", op_name)->required()->check(CLI::IsMember({"sigma", "lambda", "signature", "laplace"}));
  op_cmd->add_option("--valuation", val_file, "valuation JSON")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a valuation on a convex body");
  eval_cmd->add_option("--valuation", val_file, "valuation JSON")->required();
  eval_cmd->add_option("--body", body_file, "body JSON")->required();
  auto* tube_opt = eval_cmd->add_option("--tube", tube, "evaluate on K + tB");

  auto* su2_cmd = app.add_subcommand("su2", "SU(2) integral geometry");
  su2_cmd->require_subcommand(1);
  auto* gram_cmd = su2_cmd->add_subcommand("gram", "Gram matrix of the SU(2) basis");
  gram_cmd->add_option("--basis", basis_name)->check(CLI::IsMember({"icosahedron", "alesker"}));
  auto* forms_cmd = su2_cmd->add_subcommand("forms", "alpha, beta_u, gamma_u, Omega_u and the form of Z_u");
  forms_cmd->add_option("--u", u_text, "direction a,b,c")->required();
  auto* kin_cmd = su2_cmd->add_subcommand("kinematic", "Principal kinematic tensor");
  kin_cmd->add_option("--basis", basis_name)->check(CLI::IsMember({"icosahedron", "alesker"}));

  auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo checks");
  verify_cmd->require_subcommand(1);
  auto* mc_cmd = verify_cmd->add_subcommand("mc", "Kinematic or Poincare formula by Monte Carlo");
  mc_cmd->add_option("--k", k_file, "body JSON")->required();
  mc_cmd->add_option("--l", l_file, "body JSON")->required();
  mc_cmd->add_option("--samples", samples)->required()->check(CLI::PositiveNumber);
  mc_cmd->add_option("--seed", seed)->required();
  mc_cmd->add_flag("--poincare", poincare, "bodies are polygons; count intersection points");

  auto* klain_cmd = app.add_subcommand("klain", "Klain value on a plane");
  klain_cmd->add_option("--u", u_text, "Z_u for the direction a,b,c");
  klain_cmd->add_option("--valuation", val_file, "valuation JSON");
  klain_cmd->add_option("--plane", plane_text, "frame vectors x1,..,xn;y1,..,yn")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "valcalc: " << e.what() << '\n';
    return kExitInvalid;
  }

  EvalOptions eopt;
  eopt.threads = settings.threads;
  const Settings& s = settings;
  try {
    if (rumin_cmd->parsed()) {
      const InvariantForm w = load(form_file, [](const Json& j, const std::string& w) { return form_from_json(j, w); });
      if (w.degree() != -1 && w.degree() != w.dim() - 1) throw ParseError(form_file + ": form must have degree n-1");
      const RuminResult r = rumin(w, degree_cap);
      out << to_json(r).dump(s.json ? -1 : 2) << '\n';
    } else if (pair_cmd->parsed()) {
      const ValuationRep a = load_valuation(a_file);
      const ValuationRep b = load_valuation(b_file);
      if (a.dim() != b.dim()) throw ParseError("valuations have different dimensions");
      emit_value(out, s, "pairing", pairing(a, b).to_string());
    } else if (op_cmd->parsed()) {
      const ValuationRep mu = load_valuation(val_file);
      ValuationRep r = op_name == "sigma"    ? euler_verdier(mu)
                       : op_name == "lambda" ? derivation(mu)
                       : op_name == "signature" ? signature(mu)
                                                : laplace(mu);
      out << to_json(r).dump(s.json ? -1 : 2) << '\n';
    } else if (eval_cmd->parsed()) {
      const ValuationRep mu = load_valuation(val_file);
      const ConvexBody K = load_body(body_file);
      if (body_dim(K) != mu.dim()) throw ParseError("body and valuation have different dimensions");
      const double v = tube_opt->count() ? evaluate_tube(mu, K, tube, eopt) : evaluate(mu, K, eopt);
      emit_value(out, s, "value", format_double(v));
    } else if (gram_cmd->parsed() || kin_cmd->parsed()) {
      const ValuationBasis basis =
          su2_basis(basis_name == "alesker" ? Su2BasisChoice::Alesker : Su2BasisChoice::Icosahedron);
      std::vector<std::string> labels;
      for (const auto& e : basis.elements) labels.push_back(e.label);
      if (gram_cmd->parsed())
        emit_matrix(out, s, labels, gram_matrix(basis, s.threads));
      else
        emit_matrix(out, s, labels, kinematic_tensor(basis, s.threads).c);
    } else if (forms_cmd->parsed()) {
      const ImDirection u = parse_direction(u_text);
      const auto unit = u.exact_unit();
      Json j;
      if (unit) {
        const QuaternionicForms f = quaternionic_forms(*unit);
        j["alpha"] = to_json(f.alpha);
        j["beta"] = to_json(f.beta);
        j["gamma"] = to_json(f.gamma);
        j["Omega"] = to_json(f.Omega);
      }
      j["valuation"] = to_json(z_rep(u));
      j["rumin"] = to_json(rumin_golden(u));
      out << j.dump(s.json ? -1 : 2) << '\n';
    } else if (mc_cmd->parsed()) {
      const ConvexBody K = load_body(k_file);
      const ConvexBody L = load_body(l_file);
      MCOptions mopt;
      mopt.threads = s.threads;
      if (poincare) {
        const auto* P1 = std::get_if<PlanarPolygon>(&K);
        const auto* P2 = std::get_if<PlanarPolygon>(&L);
        if (!P1 || !P2) throw ParseError("--poincare needs two polygon bodies");
        emit_report(out, s, mc_poincare(*P1, *P2, samples, seed, mopt), "poincare");
      } else {
        if (body_dim(K) != 4 || body_dim(L) != 4) throw ParseError("kinematic check needs bodies in R^4");
        const double exact = rhs_kinematic(K, L, eopt);
        emit_report(out, s, mc_principal_kinematic(K, L, samples, seed, exact, mopt), "kinematic");
      }
    } else if (klain_cmd->parsed()) {
      if (u_text.empty() == val_file.empty()) throw ParseError("klain needs exactly one of --u and --valuation");
      const ValuationRep mu = u_text.empty() ? load_valuation(val_file) : z_rep(parse_direction(u_text));
      const std::vector<Vec> frame = parse_plane(plane_text);
      for (const auto& v : frame)
        if (int(v.size()) != mu.dim()) throw ParseError("plane vectors must have the valuation's dimension");
      emit_value(out, s, "klain", format_double(klain(mu, frame, eopt)));
    }
  } catch (const NonConvergence& e) {
    err << "valcalc: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const NoRuminSolution& e) {
    err << "valcalc: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "valcalc: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "valcalc: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "valcalc: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

}  // namespace valcalc
