#include "ncfem/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ncfem/registry.hpp"

namespace ncfem {

namespace {

namespace pt = boost::property_tree;

const std::set<std::string> kRateQuantities = {"l2", "h1b", "energy", "cons"};

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  if (!(is >> v) || !(is >> std::ws).eof()) config_error("cannot parse '" + text + "' for " + key);
  return v;
}

// strtod also accepts inf and nan, which open-ended rate bounds need
template <>
double parse_value<double>(const std::string& key, const std::string& text) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) config_error("cannot parse '" + text + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1" || text == "on") return true;
  if (text == "false" || text == "no" || text == "0" || text == "off") return false;
  config_error("expected a boolean for " + key + ", got '" + text + "'");
}

RateCheck parse_rate_check(const std::string& key, const std::string& text) {
  RateCheck rc;
  rc.quantity = key.substr(5);
  std::istringstream is(text);
  std::string lo, hi;
  if (!(is >> lo >> hi)) config_error(key + " needs 'lo hi [pairs]'");
  rc.lo = parse_value<double>(key, lo);
  rc.hi = parse_value<double>(key, hi);
  std::string pairs;
  if (is >> pairs) rc.pairs = parse_value<int>(key, pairs);
  if (is >> pairs) config_error(key + " has trailing input");
  return rc;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::scientific << std::setprecision(10) << v;
  return os.str();
}

std::string short_num(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

std::string rate_text(const std::optional<double>& r) {
  if (!r) return "undef";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << *r;
  return os.str();
}

double row_value(const StudyRow& row, const std::string& quantity) {
  if (quantity == "l2") return row.errors.l2;
  if (quantity == "h1b") return row.errors.broken_h1;
  if (quantity == "energy") return row.errors.energy;
  return row.errors.consistency_dual;
}

std::string method_label(const MethodConfig& m) {
  if (m.scheme == Scheme::CR1) return "CR1";
  static const char* names[] = {"SIPG", "IIPG", "NIPG"};
  return std::string(names[m.theta + 1]) + " k=" + std::to_string(m.degree);
}

}  // namespace

void StudyConfig::validate() const {
  const auto names = problem_names();
  if (std::find(names.begin(), names.end(), problem) == names.end()) config_error("unknown problem '" + problem + "'");
  if (levels < 2) config_error("levels must be at least 2, got " + std::to_string(levels));
  if (n0 < 1) config_error("n0 must be at least 1");
  if (method.scheme == Scheme::IPG) {
    if (method.theta < -1 || method.theta > 1) config_error("theta must be -1, 0 or 1");
    if (method.degree < 1 || method.degree > 4) config_error("degree must be between 1 and 4");
    if (!auto_eta && !(method.eta > 0.0)) config_error("eta must be positive or 'auto'");
  } else if (method.degree != 1) {
    config_error("the CR1 scheme has degree 1");
  }
  if (dense_limit < 0) config_error("dense_limit must be nonnegative");
  for (const auto& rc : checks.rates) {
    if (!kRateQuantities.count(rc.quantity)) config_error("unknown rate check 'rate_" + rc.quantity + "'");
    if (rc.quantity == "energy" && method.scheme != Scheme::IPG) config_error("rate_energy needs the IPG scheme");
    if (!(rc.lo <= rc.hi)) config_error("rate_" + rc.quantity + " has lo > hi");
    if (rc.pairs < 1 || rc.pairs > levels - 1) config_error("rate_" + rc.quantity + " pairs out of range");
  }
  if (checks.strang_dominance && !strang) config_error("strang_dominance needs strang = true");
}

StudyConfig parse_study_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  StudyConfig cfg;
  std::optional<std::string> theta, eta, degree;
  for (const auto& [section, body] : tree) {
    if (section == "study") {
      for (const auto& [key, node] : body) {
        const std::string v = node.data();
        if (key == "problem") cfg.problem = v;
        else if (key == "scheme") {
          if (v == "CR1") cfg.method.scheme = Scheme::CR1;
          else if (v == "IPG") cfg.method.scheme = Scheme::IPG;
          else config_error("unknown scheme '" + v + "' (expected CR1 or IPG)");
        }
        else if (key == "theta") theta = v;
        else if (key == "eta") eta = v;
        else if (key == "degree") degree = v;
        else if (key == "levels") cfg.levels = parse_value<int>(key, v);
        else if (key == "n0") cfg.n0 = parse_value<int>(key, v);
        else if (key == "seed") cfg.seed = parse_value<std::uint64_t>(key, v);
        else if (key == "strang") cfg.strang = parse_bool(key, v);
        else if (key == "dense_limit") cfg.dense_limit = parse_value<int>(key, v);
        else if (key == "output") cfg.output = v;
        else config_error("unknown key '" + key + "' in [study]");
      }
    } else if (section == "checks") {
      for (const auto& [key, node] : body) {
        const std::string v = node.data();
        if (key.rfind("rate_", 0) == 0) cfg.checks.rates.push_back(parse_rate_check(key, v));
        else if (key == "strang_dominance") cfg.checks.strang_dominance = parse_bool(key, v);
        else if (key == "audit") cfg.checks.audit = parse_bool(key, v);
        else if (key == "max_wall_ms") cfg.checks.max_wall_ms = parse_value<double>(key, v);
        else config_error("unknown key '" + key + "' in [checks]");
      }
    } else {
      config_error("unknown section [" + section + "]");
    }
  }

  if (cfg.method.scheme == Scheme::IPG) {
    cfg.method.theta = theta ? parse_value<int>("theta", *theta) : -1;
    cfg.method.degree = degree ? parse_value<int>("degree", *degree) : 1;
    if (!eta || *eta == "auto") {
      cfg.auto_eta = true;
    } else {
      cfg.method.eta = parse_value<double>("eta", *eta);
    }
  } else {
    if (theta || eta) config_error("theta and eta apply to the IPG scheme only");
    if (degree) cfg.method.degree = parse_value<int>("degree", *degree);
  }
  cfg.validate();
  return cfg;
}

StudyConfig load_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config '" + path + "'");
  return parse_study_config(in);
}

std::vector<std::optional<double>> ConvergenceReport::rates(const std::string& quantity) const {
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rows) pts.emplace_back(row.h, row_value(row, quantity));
  return ncfem::rates(pts);
}

bool ConvergenceReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.pass; });
}

void ConvergenceReport::write_csv(std::ostream& out) const {
  out << "level,h,ndof,err_l2,err_h1b,err_energy,cons_dual,alpha_h,strang_bound,wall_ms\n";
  for (const auto& r : rows) {
    out << r.level << ',' << num(r.h) << ',' << r.ndof << ',' << num(r.errors.l2) << ','
        << num(r.errors.broken_h1) << ',' << num(r.errors.energy) << ',' << num(r.errors.consistency_dual) << ','
        << num(r.errors.inf_sup) << ',' << num(r.errors.strang_bound) << ',' << std::fixed << std::setprecision(1)
        << r.wall_ms << std::defaultfloat << '\n';
  }
}

void ConvergenceReport::write_markdown(std::ostream& out) const {
  const auto& m = config.method;
  out << "# " << config.problem << " with " << method_label(m) << "\n\n";
  out << "- coarsest mesh n0 = " << config.n0 << ", levels = " << rows.size() << ", seed = " << config.seed << '\n';
  if (m.scheme == Scheme::IPG) {
    out << "- theta = " << m.theta << ", eta = " << m.eta << (config.auto_eta ? " (auto)" : "") << '\n';
    out << "- penalty advisory: " << advice.message << '\n';
  }
  out << '\n';

  const std::vector<std::pair<std::string, std::string>> cols = {
      {"l2", "err_l2"}, {"h1b", "err_h1b"}, {"energy", "err_energy"}, {"cons", "cons_dual"}};
  std::map<std::string, std::vector<std::optional<double>>> rs;
  for (const auto& [q, _] : cols) rs[q] = rates(q);

  out << "| level | h | ndof |";
  for (const auto& [_, name] : cols) out << ' ' << name << " | rate |";
  out << " alpha_h | strang_bound | wall_ms |\n|";
  for (int i = 0; i < 3 + 2 * static_cast<int>(cols.size()) + 3; ++i) out << "---|";
  out << '\n';
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << "| " << r.level << " | " << short_num(r.h) << " | " << r.ndof << " |";
    for (const auto& [q, _] : cols) {
      out << ' ' << short_num(row_value(r, q)) << " | " << (i == 0 ? "" : rate_text(rs[q][i - 1])) << " |";
    }
    out << ' ' << short_num(r.errors.inf_sup) << " | " << short_num(r.errors.strang_bound) << " | " << std::fixed
        << std::setprecision(1) << r.wall_ms << std::defaultfloat << " |\n";
  }

  out << "\n## Checks\n\n";
  if (checks.empty()) out << "none configured\n";
  for (const auto& c : checks) out << "- " << (c.pass ? "pass" : "FAIL") << ' ' << c.name << ": " << c.detail << '\n';

  out << "\n## Condition audit\n\n```\n" << audit.format() << "```\n";
  if (config.strang) {
    out << "\nThe boundedness constant in strang_bound is a sampled surrogate (1.5 times the largest ratio over "
           "200 random trial functions), not a proven bound.\n";
  }
}

ConvergenceReport run_study(const StudyConfig& cfg) {
  cfg.validate();
  ProblemSpec p = make_problem(cfg.problem, cfg.method.degree);
  if (!p.exact) throw Error(ErrorCode::MissingExactSolution, "problem '" + p.name + "' has no exact solution");

  ConvergenceReport rep;
  rep.config = cfg;
  MethodConfig& method = rep.config.method;

  Mesh raw = generate_unit_square(cfg.n0, p.layout);
  {
    Mesh coarse = classify_boundary(raw, p.alpha, p.c).mesh;
    rep.audit = audit_conditions(p, coarse, p.mode, method.scheme);
    if (method.scheme == Scheme::IPG) {
      if (cfg.auto_eta) method.eta = auto_eta(p, coarse, method.theta, method.degree);
      rep.advice = stability_advisory(p, coarse, method);
    }
  }

  using clock = std::chrono::steady_clock;
  for (int level = 0; level < cfg.levels; ++level) {
    if (level > 0) raw = refine_uniform(raw);
    auto t0 = clock::now();
    Mesh m = classify_boundary(raw, p.alpha, p.c).mesh;
    if (method.scheme == Scheme::CR1) require_homogeneous_dirichlet(p, m);
    DiscreteSpace s = build_space(m, method);
    SparseSystem sys = assemble(p, m, s, method);
    FeFunction uh(s, solve(sys));

    StudyRow row;
    row.level = level;
    row.h = mesh_size(m);
    row.ndof = s.ndof();
    row.errors = error_norms(p, uh, method);
    row.errors.consistency_dual = consistency_norm(p, m, s, method);
    if (cfg.strang) {
      StrangReport sr = strang_bound(p, m, s, method, sys.matrix, uh, cfg.seed + level, cfg.dense_limit);
      row.errors.inf_sup = sr.alpha;
      row.errors.strang_bound = sr.bound;
      row.strang_error = sr.error;
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    rep.rows.push_back(row);
  }

  for (const auto& rc : cfg.checks.rates) {
    auto r = rep.rates(rc.quantity);
    CheckOutcome c{"rate_" + rc.quantity, true, ""};
    std::ostringstream os;
    os << "last " << rc.pairs << " rate(s)";
    for (size_t i = r.size() - rc.pairs; i < r.size(); ++i) {
      os << ' ' << rate_text(r[i]);
      if (!r[i] || *r[i] < rc.lo || *r[i] > rc.hi) c.pass = false;
    }
    os << " in [" << rc.lo << ", " << rc.hi << "]";
    c.detail = os.str();
    rep.checks.push_back(c);
  }
  if (cfg.checks.strang_dominance) {
    CheckOutcome c{"strang_dominance", true, ""};
    std::ostringstream os;
    for (const auto& row : rep.rows) {
      bool ok = row.errors.strang_bound >= row.strang_error;
      c.pass = c.pass && ok;
      os << (ok ? "" : "violated ") << "level " << row.level << ": " << short_num(row.errors.strang_bound)
         << " >= " << short_num(row.strang_error) << "; ";
    }
    c.detail = os.str();
    rep.checks.push_back(c);
  }
  if (cfg.checks.audit) {
    std::string failed;
    for (const auto& cond : rep.audit.conditions) {
      if (cond.counts && !cond.pass) failed += (failed.empty() ? "" : ", ") + cond.name;
    }
    rep.checks.push_back({"audit", rep.audit.pass, rep.audit.pass ? "all conditions hold" : "violated: " + failed});
  }
  if (cfg.checks.max_wall_ms) {
    double total = 0.0;
    for (const auto& row : rep.rows) total += row.wall_ms;
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << total << " ms <= " << *cfg.checks.max_wall_ms << " ms";
    rep.checks.push_back({"max_wall_ms", total <= *cfg.checks.max_wall_ms, os.str()});
  }

  if (!cfg.output.empty()) {
    std::filesystem::create_directories(cfg.output);
    std::ofstream csv(std::filesystem::path(cfg.output) / "report.csv");
    rep.write_csv(csv);
    std::ofstream md(std::filesystem::path(cfg.output) / "report.md");
    rep.write_markdown(md);
    if (!csv || !md) throw Error(ErrorCode::ConfigError, "cannot write reports to '" + cfg.output + "'");
  }
  return rep;
}

std::string describe_problem(const ProblemSpec& p) {
  std::ostringstream os;
  os << p.name << "  " << p.description << '\n';
  os << "  coercivity mode: " << p.mode.describe() << '\n';
  Mesh m = classify_boundary(generate_unit_square(8, p.layout), p.alpha, p.c).mesh;
  for (Scheme scheme : {Scheme::CR1, Scheme::IPG}) {
    AuditReport a = audit_conditions(p, m, p.mode, scheme);
    os << "  " << to_string(scheme) << " audit: " << (a.pass ? "pass" : "FAIL");
    std::string failed;
    for (const auto& c : a.conditions) {
      if (c.counts && !c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    if (!failed.empty()) os << " (violated: " << failed << ")";
    os << '\n';
    for (const auto& c : a.conditions) {
      if (!c.counts) continue;
      os << "    " << (c.pass ? "ok   " : "FAIL ") << c.name << '\n';
    }
  }
  return os.str();
}

void list_problems(std::ostream& out) {
  for (const auto& name : problem_names()) out << describe_problem(make_problem(name));
}

void mesh_info(std::ostream& out, const Mesh& m) {
  double area = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) area += std::abs(m.area(t));
  std::map<std::string, int> kinds;
  double perimeter = 0.0;
  for (const auto& f : m.faces()) {
    ++kinds[to_string(f.kind)];
    if (f.neighbor < 0) perimeter += f.length;
  }
  out << "vertices   " << m.num_vertices() << '\n'
      << "triangles  " << m.num_triangles() << '\n'
      << "faces      " << m.num_faces() << '\n';
  for (const auto& [k, n] : kinds) out << "  " << std::left << std::setw(9) << k << n << '\n';
  out << std::right << "area       " << area << '\n'
      << "perimeter  " << perimeter << '\n'
      << "h          " << mesh_size(m) << '\n'
      << "max R/r    " << shape_regularity(m) << '\n'
      << "level      " << m.level() << '\n';
  auto v = verify_consistency(m);
  out << "consistency " << (v.empty() ? "ok" : std::to_string(v.size()) + " violation(s)") << '\n';
  for (const auto& viol : v) out << "  " << viol.message << '\n';
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularSystem:
    case ErrorCode::RankDeficient:
    case ErrorCode::IndefiniteGram:
      return 3;
    default:
      return 2;
  }
}

}  // namespace ncfem
