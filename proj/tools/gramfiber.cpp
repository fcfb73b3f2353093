// Command-line front end: contexts, face and normal-cone queries, the
// binary-sextic and ternary-quartic special machinery, and the Monte-Carlo
// fiber-body estimators. JSON on stdout except point clouds (CSV).
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gramfiber/errors.hpp"
#include "gramfiber/fiberbody.hpp"
#include "gramfiber/gram.hpp"
#include "gramfiber/quartic.hpp"
#include "gramfiber/sextic.hpp"

namespace {

using gramfiber::Form;
using gramfiber::GramContext;
using gramfiber::Rational;
using gramfiber::SymMat;
using json = nlohmann::ordered_json;

GramContext context_by_name(const std::string& name) {
  if (name == "sextic") return GramContext::make(2, 3);
  if (name == "quartic") return GramContext::make(3, 2);
  throw CLI::ValidationError("--context", "must be 'sextic' or 'quartic'");
}

std::vector<double> parse_lambda(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    out.push_back(std::stod(tok, &pos));
  }
  return out;
}

std::vector<Rational> parse_lambda_rational(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(gramfiber::rational_from_string(tok));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--form", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Form load_form(const std::string& file, const std::string& inline_json) {
  if (!inline_json.empty()) return gramfiber::form_from_json(inline_json);
  if (!file.empty()) return gramfiber::form_from_json(read_file(file));
  throw CLI::ValidationError("--form", "a form is required (--form or --form-json)");
}

json mat_json(const SymMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(m.at(i, j));
    rows.push_back(row);
  }
  return rows;
}

json rational_mat_json(const gramfiber::RationalMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back(gramfiber::rational_to_string(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json form_json_obj(const Form& f) { return json::parse(gramfiber::form_to_json(f)); }

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
    if (!out) throw gramfiber::Error("cannot write '" + out_path + "'");
  }
}

// Rational coefficient vector of a form JSON whose coefficient values may be
// strings like "in 5/2" or plain integers.
std::vector<Rational> load_rational_coeffs(const GramContext& ctx,
                                           const std::string& file,
                                           const std::string& inline_json) {
  std::string text = !inline_json.empty() ? inline_json : read_file(file);
  json j = json::parse(text);
  int n = j.at("n").get<int>();
  int d = j.at("d").get<int>();
  if (n != ctx.n() || d != 2 * ctx.d())
    throw gramfiber::DimensionError("certificate: form must have degree 2d in n variables");
  std::vector<Rational> coeffs(ctx.dim_2d(), Rational(0));
  for (auto& [key, val] : j.at("coeffs").items()) {
    gramfiber::Exponent e(n);
    for (int v = 0; v < n; ++v) e[v] = key[v] - '0';
    int idx = ctx.order_2d().index_of(e);
    if (idx < 0) throw gramfiber::DimensionError("certificate: bad exponent key " + key);
    if (val.is_string())
      coeffs[idx] = gramfiber::rational_from_string(val.get<std::string>());
    else
      coeffs[idx] = Rational(val.get<long long>());
  }
  return coeffs;
}

struct Args {
  std::string context = "sextic";
  std::uint64_t seed = 42;
  int samples = 50;
  int directions = 1000;
  std::string form_file, form_json, lambda_csv, lambda2_csv, out_path;
  int point_index = 1;
  bool with_oracle = false;
};

int run(int argc, char** argv) {
  CLI::App app{"faces, normal cones and Monte-Carlo fiber bodies of Gram spectrahedra"};
  app.require_subcommand(1);
  Args a;

  auto add_common = [&](CLI::App* cmd, bool with_samples) {
    cmd->add_option("--context", a.context, "sextic or quartic");
    cmd->add_option("--seed", a.seed, "RNG seed (default 42)");
    if (with_samples) cmd->add_option("--samples", a.samples, "sample count (default 50)");
    cmd->add_option("-o,--output", a.out_path, "output file (default stdout)");
  };

  auto* dump = app.add_subcommand("context-dump", "Gram map, kernel basis and dimensions");
  add_common(dump, false);

  auto* face_cmd = app.add_subcommand("face", "face report of gram(f) in a direction");
  add_common(face_cmd, false);
  face_cmd->add_option("--form", a.form_file, "form JSON file");
  face_cmd->add_option("--form-json", a.form_json, "inline form JSON");
  face_cmd->add_option("--lambda", a.lambda_csv, "direction coordinates, comma separated")->required();

  auto* ncdim_cmd = app.add_subcommand("nc-dim", "normal-cone dimension of a subspace");
  add_common(ncdim_cmd, false);
  ncdim_cmd->add_option("--forms", a.form_file, "JSON array of forms spanning U")->required();
  ncdim_cmd->add_flag("--oracle", a.with_oracle, "also run the kernel-intersection route");

  auto* sx = app.add_subcommand("sextic", "binary-sextic machinery");
  sx->require_subcommand(1);
  auto* sx_rank2 = sx->add_subcommand("rank2", "the four factorization Gram tensors");
  sx_rank2->add_option("--form", a.form_file, "form JSON file");
  sx_rank2->add_option("--form-json", a.form_json, "inline form JSON");
  sx_rank2->add_option("-o,--output", a.out_path, "output file");
  auto* sx_ins = sx->add_subcommand("in-s", "membership in the vertex normal cone S");
  sx_ins->add_option("--lambda", a.lambda_csv, "l1,l2,l3")->required();
  sx_ins->add_option("-o,--output", a.out_path, "output file");
  auto* sx_ncq = sx->add_subcommand("nc-quadric", "contact quadric at a rank-2 point");
  sx_ncq->add_option("--form", a.form_file, "form JSON file");
  sx_ncq->add_option("--form-json", a.form_json, "inline form JSON");
  sx_ncq->add_option("--point", a.point_index, "grouping index 0..3 (0 = distinguished)");
  sx_ncq->add_option("-o,--output", a.out_path, "output file");
  auto* sx_lemma = sx->add_subcommand("lemma-check",
                                      "normal-cone matrices and disjointness for the two fixed sextics");
  sx_lemma->add_option("-o,--output", a.out_path, "output file");

  auto* qr = app.add_subcommand("quartic", "ternary-quartic machinery");
  qr->require_subcommand(1);
  auto* qr_cls = qr->add_subcommand("classify", "direction class from Q(w)");
  qr_cls->add_option("--lambda", a.lambda_csv, "l1..l6")->required();
  qr_cls->add_option("-o,--output", a.out_path, "output file");
  auto* qr_cmp = qr->add_subcommand("complete", "rank-1 completion quadric (det Q > 0)");
  qr_cmp->add_option("--lambda", a.lambda_csv, "l1..l6")->required();
  qr_cmp->add_option("-o,--output", a.out_path, "output file");
  auto* qr_spl = qr->add_subcommand("split", "psd pair splitting (det Q < 0 or rank 2)");
  qr_spl->add_option("--lambda", a.lambda_csv, "l1..l6")->required();
  qr_spl->add_option("-o,--output", a.out_path, "output file");
  auto* qr_cert = qr->add_subcommand("certificate", "exact rational Gram tensor and sos");
  qr_cert->add_option("--form", a.form_file, "rational form JSON file");
  qr_cert->add_option("--form-json", a.form_json, "inline rational form JSON");
  qr_cert->add_option("--lambda", a.lambda_csv, "rational l1..l6, e.g. 1,1/2,0,0,0,0")->required();
  qr_cert->add_option("-o,--output", a.out_path, "output file");

  auto* fb = app.add_subcommand("fiberbody", "Monte-Carlo fiber-body estimators");
  fb->require_subcommand(1);
  auto* fb_sample = fb->add_subcommand("sample", "draw sos forms on the coefficient sphere");
  add_common(fb_sample, true);
  auto* fb_cloud = fb->add_subcommand("cloud", "boundary point cloud CSV");
  add_common(fb_cloud, true);
  fb_cloud->add_option("--directions", a.directions, "direction count (default 1000)");
  auto* fb_fdim = fb->add_subcommand("face-dim", "face dimension estimate in a direction");
  add_common(fb_fdim, true);
  fb_fdim->add_option("--lambda", a.lambda_csv, "direction coordinates")->required();
  auto* fb_probe = fb->add_subcommand("nc-probe", "normal-cone membership probe");
  add_common(fb_probe, true);
  fb_probe->add_option("--lambda", a.lambda_csv, "direction w")->required();
  fb_probe->add_option("--lambda2", a.lambda2_csv, "direction w'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (dump->parsed()) {
    GramContext ctx = context_by_name(a.context);
    emit(json::parse(ctx.dump_json()), a.out_path);
    return 0;
  }

  if (face_cmd->parsed()) {
    GramContext ctx = context_by_name(a.context);
    Form f = load_form(a.form_file, a.form_json);
    gramfiber::FaceReport rep = gramfiber::face(f, parse_lambda(a.lambda_csv), ctx);
    json j;
    j["rank"] = rep.rank;
    j["face_dim"] = rep.face_dim;
    j["nc_dim_ambient"] = rep.nc_dim_ambient;
    j["nc_dim_w"] = rep.nc_dim_w;
    j["lambda"] = rep.lambda;
    j["optimizer"] = mat_json(rep.optimizer);
    emit(j, a.out_path);
    return 0;
  }

  if (ncdim_cmd->parsed()) {
    GramContext ctx = context_by_name(a.context);
    json arr = json::parse(read_file(a.form_file));
    std::vector<Form> basis;
    for (const auto& fj : arr) basis.push_back(gramfiber::form_from_json(fj.dump()));
    gramfiber::NcDims nc = gramfiber::nc_dim(basis, ctx);
    json j;
    j["ambient"] = nc.ambient;
    j["in_w"] = nc.in_w;
    if (a.with_oracle) j["ambient_oracle"] = gramfiber::nc_dim_oracle(basis, ctx);
    emit(j, a.out_path);
    return 0;
  }

  if (sx->parsed()) {
    GramContext ctx = GramContext::make(2, 3);
    if (sx_rank2->parsed()) {
      Form f = load_form(a.form_file, a.form_json);
      gramfiber::sextic::Rank2Set r2 = gramfiber::sextic::rank2_points(f);
      json j;
      j["distinguished"] = r2.distinguished;
      json pts = json::array();
      for (const auto& p : r2.points) pts.push_back(mat_json(p));
      j["points"] = pts;
      json grp = json::array();
      for (const auto& g : r2.groupings) {
        json zs = json::array();
        for (const auto& z : g) zs.push_back({{"re", z.real()}, {"im", z.imag()}});
        grp.push_back(zs);
      }
      j["groupings"] = grp;
      emit(j, a.out_path);
      return 0;
    }
    if (sx_ins->parsed()) {
      std::vector<double> l = parse_lambda(a.lambda_csv);
      if (l.size() != 3) throw gramfiber::DimensionError("in-s: need 3 coordinates");
      json j;
      j["in_s"] = gramfiber::sextic::in_s({l[0], l[1], l[2]});
      emit(j, a.out_path);
      return 0;
    }
    if (sx_ncq->parsed()) {
      Form f = load_form(a.form_file, a.form_json);
      auto r2 = gramfiber::sextic::rank2_points(f);
      if (a.point_index < 0 || a.point_index > 3)
        throw gramfiber::DimensionError("nc-quadric: --point must be 0..3");
      auto q = gramfiber::sextic::nc_quadric(ctx, f, r2.points[a.point_index]);
      json j;
      j["taylor2"] = mat_json(q.taylor2);
      j["dual_form"] = mat_json(q.dual_form);
      emit(j, a.out_path);
      return 0;
    }
    if (sx_lemma->parsed()) {
      json j;
      const char* names[2] = {"first", "second"};
      for (int which = 0; which < 2; ++which) {
        Form f = (which == 0) ? gramfiber::sextic::lemma_sextic_first()
                              : gramfiber::sextic::lemma_sextic_second();
        auto r2 = gramfiber::sextic::rank2_points(f);
        json matrices = json::array();
        for (int g = 0; g < 4; ++g) {
          if (g == r2.distinguished) continue;
          auto q = gramfiber::sextic::nc_quadric(ctx, f, r2.points[g]);
          matrices.push_back(mat_json(q.dual_form));
        }
        json entry;
        entry["form"] = form_json_obj(f);
        entry["nc_matrices"] = matrices;
        entry["cones_disjoint"] = gramfiber::sextic::cones_disjoint(ctx, f);
        j[names[which]] = entry;
      }
      emit(j, a.out_path);
      return 0;
    }
  }

  if (qr->parsed()) {
    GramContext ctx = GramContext::make(3, 2);
    if (qr_cls->parsed()) {
      auto cls = gramfiber::quartic::classify_lambda(parse_lambda(a.lambda_csv));
      json j;
      j["tag"] = gramfiber::quartic::to_string(cls.tag);
      j["det_q"] = cls.det_q;
      j["rank_q"] = cls.rank_q;
      j["q"] = mat_json(cls.q);
      emit(j, a.out_path);
      return 0;
    }
    if (qr_cmp->parsed()) {
      Form q = gramfiber::quartic::rank1_complete_lambda(parse_lambda(a.lambda_csv));
      emit(form_json_obj(q), a.out_path);
      return 0;
    }
    if (qr_spl->parsed()) {
      SymMat qw = gramfiber::quartic::q_of_lambda(parse_lambda(a.lambda_csv));
      auto [q1, q2] = gramfiber::quartic::split_psd_pair(qw);
      json j;
      j["q1"] = mat_json(q1);
      j["q2"] = mat_json(q2);
      j["det_q1"] = gramfiber::det3(q1);
      j["det_q2"] = gramfiber::det3(q2);
      emit(j, a.out_path);
      return 0;
    }
    if (qr_cert->parsed()) {
      auto coeffs = load_rational_coeffs(ctx, a.form_file, a.form_json);
      auto lambda = parse_lambda_rational(a.lambda_csv);
      auto res = gramfiber::quartic::rational_certificate(ctx, coeffs, lambda);
      json j;
      j["ok"] = res.ok;
      if (!res.ok) {
        j["reason"] = res.reason;
      } else {
        j["theta"] = rational_mat_json(res.cert.theta);
        json sos = json::array();
        for (const auto& [w, g] : res.cert.sos) {
          json term;
          term["weight"] = gramfiber::rational_to_string(w);
          json gc = json::array();
          for (const auto& c : g) gc.push_back(gramfiber::rational_to_string(c));
          term["coeffs"] = gc;
          sos.push_back(term);
        }
        j["sos"] = sos;
        j["f_check"] = res.cert.f_check;
      }
      emit(j, a.out_path);
      return 0;
    }
  }

  if (fb->parsed()) {
    GramContext ctx = context_by_name(a.context);
    if (fb_sample->parsed()) {
      auto set = gramfiber::fiberbody::sample_forms(ctx, a.samples, a.seed);
      json j;
      j["count"] = static_cast<int>(set.forms.size());
      j["seed"] = set.seed;
      j["acceptance_rate"] = set.acceptance_rate;
      j["trials"] = set.trials;
      json forms = json::array();
      for (const auto& f : set.forms) forms.push_back(form_json_obj(f));
      j["forms"] = forms;
      emit(j, a.out_path);
      return 0;
    }
    if (fb_cloud->parsed()) {
      auto set = gramfiber::fiberbody::sample_forms(ctx, a.samples, a.seed);
      auto dirs = gramfiber::fiberbody::default_directions(ctx, a.directions, a.seed);
      if (a.out_path.empty()) {
        gramfiber::fiberbody::export_cloud(dirs, set, std::cout);
      } else {
        std::ofstream out(a.out_path, std::ios::binary);
        if (!out) throw gramfiber::Error("cannot write '" + a.out_path + "'");
        gramfiber::fiberbody::export_cloud(dirs, set, out);
      }
      return 0;
    }
    if (fb_fdim->parsed()) {
      auto set = gramfiber::fiberbody::sample_forms(ctx, a.samples, a.seed);
      auto est = gramfiber::fiberbody::face_dim_estimate(parse_lambda(a.lambda_csv), set);
      json j;
      j["dim"] = est.dim;
      json basis = json::array();
      for (const auto& b : est.basis) basis.push_back(mat_json(b));
      j["basis"] = basis;
      emit(j, a.out_path);
      return 0;
    }
    if (fb_probe->parsed()) {
      auto set = gramfiber::fiberbody::sample_forms(ctx, a.samples, a.seed);
      auto res = gramfiber::fiberbody::nc_probe(parse_lambda(a.lambda_csv),
                                                parse_lambda(a.lambda2_csv), set);
      json j;
      switch (res) {
        case gramfiber::fiberbody::NcProbe::InCone: j["result"] = "InCone"; break;
        case gramfiber::fiberbody::NcProbe::NotInCone: j["result"] = "NotInCone"; break;
        default: j["result"] = "Undetermined"; break;
      }
      emit(j, a.out_path);
      return 0;
    }
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError&) {
    return 2;
  } catch (const gramfiber::Error& e) {
    json err;
    err["error"] = e.what();
    std::cout << err.dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cout << err.dump() << "\n";
    return 3;
  }
}
