/*
 * Copyright 2026 The polarkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "commands.hpp"

#include "config.hpp"

#include "polarkit/certificates.hpp"
#include "polarkit/covering.hpp"
#include "polarkit/duality_lab.hpp"
#include "polarkit/gamma.hpp"
#include "polarkit/separation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace polarkit::cli {

namespace {

std::string num(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

std::string count(std::size_t v) { return v == kUnknownCount ? "inf" : std::to_string(v); }

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write \"" + path + "\"");
  f << text;
  if (!f) throw Error("failed writing \"" + path + "\"");
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  std::vector<std::string> names(allowed.begin(), allowed.end());
  throw InvalidArgument("format: this command supports " + join(names, ", ") + " (got \"" + format + "\")");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(x > 0) || !std::isfinite(x))
      throw InvalidArgument(key + ": expected a comma-separated list of positive numbers (got \"" + text + "\")");
    v.push_back(x);
  }
  if (v.empty()) throw InvalidArgument(key + ": empty list");
  return v;
}

// Per-command state: shared settings, the config file and command options.
struct Command {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  CLI::Option* config_option = nullptr;
  std::function<int(const Config&, std::ostream&, std::ostream&)> body;

  Config config() const {
    std::map<std::string, std::string> given;
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) given[key] = values.at(key);
    std::optional<json> file;
    if (config_option->count() > 0) file = read_config_file(config_path);
    return build_config(given, file);
  }
};

Command& add_command(CLI::App& root, std::vector<std::unique_ptr<Command>>& all, const std::string& name,
                     const std::string& help) {
  all.push_back(std::make_unique<Command>());
  Command& c = *all.back();
  c.app = root.add_subcommand(name, help);
  c.config_option = c.app->add_option("--config", c.config_path, "JSON config file (keys as the long flags below)")
                        ->envname("POLARKIT_CONFIG");
  for (const auto& s : settings()) {
    c.values[s.key];
    c.options[s.key] = c.app->add_option("--" + s.key, c.values[s.key], s.help)->envname(s.env());
  }
  return c;
}

// Writes the primary output where the config says.
void emit(const Config& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) out << text;
  else write_file(cfg.out, text);
}

struct PairArgs {
  std::string K, T;
  void add(CLI::App* app) {
    app->add_option("--K", K, "body K: JSON file or built-in (l1:N, linf:N, ball:N, box:N:H, lp:N:P)")->required();
    app->add_option("--T", T, "body T: JSON file or built-in")->required();
  }
};

std::string pair_label(const PairArgs& p) { return p.K + " vs " + p.T; }

int verify_documents(const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("verify: cannot read \"" + path + "\"");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    out << "REFUTED: not valid JSON: " << e.what() << "\n";
    return kFailure;
  }
  std::vector<json> docs;
  if (doc.is_array()) docs.assign(doc.begin(), doc.end());
  else docs.push_back(doc);
  if (docs.empty()) {
    out << "REFUTED: no certificates in file\n";
    return kFailure;
  }
  bool all = true;
  for (const auto& d : docs) {
    const auto r = verify_certificate(d);
    if (r.ok) {
      out << "OK " << r.kind << ": " << r.claim << "\n";
    } else {
      out << "REFUTED " << (r.kind.empty() ? "document" : r.kind) << (r.claim.empty() ? "" : ": " + r.claim) << ": "
          << r.detail << "\n";
      all = false;
    }
  }
  return all ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App root{"polarkit: certified covering, separation and chaining bounds for convex bodies"};
  root.name("polarkit");
  root.require_subcommand(1);
  root.set_version_flag("--version", "polarkit 0.1.0");
  std::vector<std::unique_ptr<Command>> commands;

  // cover
  PairArgs cover_pair;
  double cover_rho = 1.0;
  bool cover_restricted = false;
  std::string cover_cert;
  {
    auto& c = add_command(root, commands, "cover", "bracket N(K, rho T), or N'(K, rho T) with --restricted");
    cover_pair.add(c.app);
    c.app->add_option("--rho", cover_rho, "scale of T (default 1)")->check(CLI::PositiveNumber);
    c.app->add_flag("--restricted", cover_restricted, "centres must lie in K");
    c.app->add_option("--certificate", cover_cert, "write the certificate document to this file");
    c.body = [&](const Config& cfg, std::ostream& o, std::ostream&) {
      const std::string fmt = cfg.format.empty() ? "text" : cfg.format;
      require_format(fmt, {"text", "json", "csv"});
      const auto K = load_body(cover_pair.K), T = load_body(cover_pair.T);
      const auto b = covering_bracket_at(K, T, cover_rho, cover_restricted, cfg.effort);
      const auto doc = covering_certificate_json(K, T, cover_rho, cover_restricted, b);
      if (!cover_cert.empty()) write_file(cover_cert, doc.dump(1) + "\n");
      std::string text;
      if (fmt == "text") {
        text = "[" + count(b.lo) + "," + count(b.hi) + "]";
        if (!b.flags.empty()) text += " flags=" + join(b.flags, ";");
        text += "\n";
      } else if (fmt == "json") {
        text = doc.dump(1) + "\n";
      } else {
        text = "K,T,rho,restricted,lo,hi,flags\n" + cover_pair.K + "," + cover_pair.T + "," + num(cover_rho) + "," +
               (cover_restricted ? "1" : "0") + "," + count(b.lo) + "," + count(b.hi) + "," + join(b.flags, ";") + "\n";
      }
      emit(cfg, o, text);
      return static_cast<int>(kOk);
    };
  }

  // entropy
  PairArgs ent_pair;
  int ent_kmax = 6;
  bool ent_tail = false;
  std::string ent_cert;
  {
    auto& c = add_command(root, commands, "entropy", "brackets of e_k(K, T) for k = 0..k-max");
    ent_pair.add(c.app);
    c.app->add_option("--k-max", ent_kmax, "largest k (default 6)")->check(CLI::Range(0, 40));
    c.app->add_flag("--tail", ent_tail, "print the entropy-tail check (k,e_k_hi,bound,pass,proven,tight,implied_c) instead");
    c.app->add_option("--certificate", ent_cert, "write the certificate documents (JSON array) to this file");
    c.body = [&](const Config& cfg, std::ostream& o, std::ostream&) {
      const std::string fmt = cfg.format.empty() ? "csv" : cfg.format;
      require_format(fmt, {"csv", "json"});
      const auto K = load_body(ent_pair.K), T = load_body(ent_pair.T);
      const auto seq = entropy_sequence(K, T, ent_kmax, cfg.effort, pair_label(ent_pair));
      json docs = json::array();
      for (const auto& b : seq.brackets) docs.push_back(entropy_certificate_json(K, T, b));
      if (!ent_cert.empty()) write_file(ent_cert, docs.dump(1) + "\n");
      std::string text;
      if (ent_tail) {
        const auto rows = tail_check(seq, K.dim(), cfg.effort.tol.eta, cfg.effort.bisect_tol);
        if (fmt == "csv") {
          text = "k,e_k_hi,bound,pass,proven,tight,implied_c\n";
          for (const auto& r : rows)
            text += std::to_string(r.k) + "," + num(r.e_k_hi) + "," + num(r.bound) + "," + (r.pass ? "1" : "0") + "," + (r.proven ? "1" : "0") + "," +
                    (r.tight ? "1" : "0") + "," + num(r.implied_c) + "\n";
        } else {
          json j = json::array();
          for (const auto& r : rows)
            j.push_back({{"k", r.k}, {"e_k_hi", r.e_k_hi}, {"bound", r.bound}, {"pass", r.pass}, {"proven", r.proven}, {"tight", r.tight},
                         {"implied_c", r.implied_c}});
          text = j.dump(1) + "\n";
        }
      } else {
        text = fmt == "csv" ? entropy_csv({seq}) : docs.dump(1) + "\n";
      }
      emit(cfg, o, text);
      return static_cast<int>(kOk);
    };
  }

  // separation
  PairArgs sep_pair;
  double sep_scale = 1.0;
  bool sep_duality = false;
  std::string sep_cert;
  {
    auto& c = add_command(root, commands, "separation", "greedy lower bound and cover upper bound on M^(K, scale T)");
    sep_pair.add(c.app);
    c.app->add_option("--scale", sep_scale, "scale of T (default 1)")->check(CLI::PositiveNumber);
    c.app->add_flag("--duality", sep_duality, "also test M^(K,T) <= M^(T°,K°/2)^2 through covers");
    c.app->add_option("--certificate", sep_cert, "write the lower-bound certificate document to this file");
    c.body = [&](const Config& cfg, std::ostream& o, std::ostream&) {
      const std::string fmt = cfg.format.empty() ? "text" : cfg.format;
      require_format(fmt, {"text", "json"});
      const auto K = load_body(sep_pair.K), T = load_body(sep_pair.T);
      const auto cert = separation_greedy_lower(K, T, cfg.effort, sep_scale);
      const auto upper = covering_bracket_at(K, T, sep_scale * (1.0 + cfg.effort.tol.eta) / 2.0, false, cfg.effort);
      if (!sep_cert.empty()) write_file(sep_cert, separation_certificate_json(K, T, cert).dump(1) + "\n");
      std::optional<SeparationDualityRow> dual;
      if (sep_duality) dual = separation_duality_check(K, T, cfg.effort);
      std::string text;
      if (fmt == "text") {
        text = "lower=" + std::to_string(cert.points.size()) + " upper=" + count(upper.hi) + "\n";
        if (dual)
          text += "duality: lower=" + std::to_string(dual->lower) + " dual_cover=" + count(dual->dual_cover) +
                  " rhs=" + num(dual->rhs) + " holds=" + (dual->holds ? "yes" : "no") + "\n";
      } else {
        json j{{"scale", sep_scale}, {"lower", cert.points.size()}, {"upper", upper.hi == kUnknownCount ? json(nullptr) : json(upper.hi)}};
        if (dual)
          j["duality"] = {{"lower", dual->lower}, {"dual_cover", dual->dual_cover}, {"rhs", dual->rhs}, {"holds", dual->holds}};
        text = j.dump(1) + "\n";
      }
      emit(cfg, o, text);
      return static_cast<int>(sep_duality && !dual->holds ? kFailure : kOk);
    };
  }

  // gamma
  PairArgs gamma_pair;
  std::string gamma_p = "2", gamma_space, gamma_random;
  int gamma_kmax = 6, gamma_J = 2;
  {
    auto& c = add_command(root, commands, "gamma", "bounds on gamma_p(K, T) or on a finite metric space");
    auto* k = c.app->add_option("--K", gamma_pair.K, "body K: JSON file or built-in");
    auto* t = c.app->add_option("--T", gamma_pair.T, "body T: JSON file or built-in");
    auto* sp = c.app->add_option("--space", gamma_space, "finite metric space: JSON {\"distances\": [[...]], \"labels\": [...]}");
    auto* rs = c.app->add_option("--random-space", gamma_random, "finite space of SIZE:DIM uniform points (seeded)");
    k->needs(t);
    t->needs(k);
    sp->excludes(k)->excludes(rs);
    rs->excludes(k);
    c.app->add_option("--p", gamma_p, "comma-separated p values (default 2)");
    c.app->add_option("--k-max", gamma_kmax, "largest entropy index (default 6)")->check(CLI::Range(0, 40));
    c.app->add_option("--J", gamma_J, "chaining levels built explicitly (default 2)")->check(CLI::Range(0, 4));
    c.body = [&](const Config& cfg, std::ostream& o, std::ostream&) {
      const std::string fmt = cfg.format.empty() ? "csv" : cfg.format;
      require_format(fmt, {"csv", "json"});
      const auto ps = parse_list("p", gamma_p);
      std::vector<GammaEstimates> rows;
      if (!gamma_space.empty() || !gamma_random.empty()) {
        std::optional<FiniteMetricSpace> space;
        std::string id;
        if (!gamma_space.empty()) {
          std::ifstream in(gamma_space);
          if (!in) throw InvalidArgument("space: cannot read \"" + gamma_space + "\"");
          json j;
          try {
            j = json::parse(in);
          } catch (const json::exception& e) {
            throw InvalidArgument(std::string("space: not valid JSON: ") + e.what());
          }
          std::vector<std::string> labels;
          if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
          space.emplace(mat_from_json(j.at("distances")), labels);
          id = gamma_space;
        } else {
          int size = 0, dim = 0;
          char colon = 0;
          std::istringstream in(gamma_random);
          if (!(in >> size >> colon >> dim) || colon != ':' || size < 1 || dim < 1 || !in.eof())
            throw InvalidArgument("random-space: expected SIZE:DIM (got \"" + gamma_random + "\")");
          space.emplace(FiniteMetricSpace::random_euclidean(size, dim, cfg.effort.seed));
          id = "random:" + gamma_random + ":" + std::to_string(cfg.effort.seed);
        }
        for (double p : ps) rows.push_back(gamma_estimates_finite(*space, p, cfg.convention, id));
      } else {
        if (gamma_pair.K.empty()) throw InvalidArgument("gamma: give --K and --T, --space, or --random-space");
        const auto K = load_body(gamma_pair.K), T = load_body(gamma_pair.T);
        const auto seq = entropy_sequence(K, T, gamma_kmax, cfg.effort, pair_label(gamma_pair));
        for (double p : ps) rows.push_back(gamma_estimates(K, T, p, seq, gamma_J, cfg.effort, cfg.convention));
      }
      emit(cfg, o, fmt == "csv" ? gamma_csv(rows) : gamma_json(rows));
      return static_cast<int>(kOk);
    };
  }

  // duality-scan and gamma-duality share the family selection.
  ExperimentSpec scan;
  std::string scan_grid = "0.5,1,2,4,8", scan_fit, scan_svg;
  {
    auto& c = add_command(root, commands, "duality-scan", "scan N(K,T) against N(T°, a^-1 K°) over generated families");
    c.app->add_option("--family", scan.family, "ellipsoid, l1-linf, box-cross, vpoly-ball or all (default all)");
    c.app->add_option("--n", scan.n, "dimension (default 2)")->check(CLI::Range(1, 4));
    c.app->add_option("--count", scan.count, "base pairs per random family (default 3)")->check(CLI::Range(1, 100));
    c.app->add_option("--a-grid", scan_grid, "comma-separated values of a (default 0.5,1,2,4,8)");
    c.app->add_option("--fit", scan_fit, "write the fitted constants (JSON) to this file");
    c.app->add_option("--svg", scan_svg, "write the scatter plot (SVG) to this file");
    c.body = [&](const Config& cfg, std::ostream& o, std::ostream& e) {
      const std::string fmt = cfg.format.empty() ? "csv" : cfg.format;
      require_format(fmt, {"csv", "json", "svg"});
      scan.a_grid = parse_list("a-grid", scan_grid);
      scan.effort = cfg.effort;
      scan.seed = cfg.effort.seed;
      const auto pairs = generate_family(scan);
      const auto rows = duality_scan(pairs, scan.a_grid, cfg.effort);
      if (!scan_svg.empty()) write_file(scan_svg, duality_svg(rows));
      if (!scan_fit.empty()) {
        try {
          write_file(scan_fit, fit_json(fit_constants(rows)));
        } catch (const InvalidArgument& ex) {
          e << "fit: " << ex.what() << "\n";
          write_file(scan_fit, "[]\n");
        }
      }
      emit(cfg, o, fmt == "csv" ? duality_csv(rows) : fmt == "json" ? duality_json(rows) : duality_svg(rows));
      for (const auto& r : rows)
        for (const auto& f : r.flags)
          if (f.rfind("error:", 0) == 0) return static_cast<int>(kFailure);
      return static_cast<int>(kOk);
    };
  }
  ExperimentSpec gd;
  double gd_p = 2.0;
  int gd_kmax = 6, gd_J = 2;
  {
    auto& c = add_command(root, commands, "gamma-duality", "compare gamma_p(K,T) upper bounds with gamma_p(T°,K°) lower bounds");
    c.app->add_option("--family", gd.family, "ellipsoid, l1-linf, box-cross, vpoly-ball or all (default all)");
    c.app->add_option("--n", gd.n, "dimension (default 2)")->check(CLI::Range(1, 4));
    c.app->add_option("--count", gd.count, "base pairs per random family (default 3)")->check(CLI::Range(1, 100));
    c.app->add_option("--p", gd_p, "exponent p (default 2)")->check(CLI::PositiveNumber);
    c.app->add_option("--k-max", gd_kmax, "largest entropy index (default 6)")->check(CLI::Range(0, 40));
    c.app->add_option("--J", gd_J, "chaining levels built explicitly (default 2)")->check(CLI::Range(0, 4));
    c.body = [&](const Config& cfg, std::ostream& o, std::ostream&) {
      const std::string fmt = cfg.format.empty() ? "csv" : cfg.format;
      require_format(fmt, {"csv"});
      gd.effort = cfg.effort;
      gd.seed = cfg.effort.seed;
      const auto rows = gamma_duality_report(generate_family(gd), gd_p, cfg.effort, gd_kmax, gd_J);
      emit(cfg, o, gamma_duality_csv(rows));
      return static_cast<int>(kOk);
    };
  }

  // verify
  std::string verify_path;
  {
    auto& c = add_command(root, commands, "verify", "re-check a certificate document (or a JSON array of them)");
    c.app->add_option("file", verify_path, "certificate file")->required();
    c.body = [&](const Config& cfg, std::ostream& o, std::ostream&) {
      std::ostringstream text;
      const int code = verify_documents(verify_path, text);
      emit(cfg, o, text.str());
      return code;
    };
  }

  // selftest
  {
    auto& c = add_command(root, commands, "selftest", "run the built-in example suite");
    c.body = [&](const Config& cfg, std::ostream& o, std::ostream&) {
      std::ostringstream text;
      const bool ok = selftest(text);
      emit(cfg, o, text.str());
      return static_cast<int>(ok ? kOk : kFailure);
    };
  }

  if (args.size() > 1 && !args[1].empty() && args[1][0] != '-' && 
      root.get_subcommands([&](CLI::App* a) { return a->check_name(args[1]); }).empty()) {
    err << "error: unknown command \"" << args[1] << "\"\n" << root.help();
    return kUsage;
  }
  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    root.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return root.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return root.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return root.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (root.get_subcommands().empty()) err << root.help();
    else err << "Run with " << root.get_subcommands().front()->get_name() << " --help for usage.\n";
    return kUsage;
  }

  Command* chosen = nullptr;
  for (auto& c : commands)
    if (c->app->parsed()) chosen = c.get();
  if (!chosen) {
    err << root.help();
    return kUsage;
  }
  Config cfg;
  try {
    cfg = chosen->config();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  set_log_level(cfg.log_level);
  try {
    return chosen->body(cfg, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace polarkit::cli
