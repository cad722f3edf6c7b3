#include "qbo/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <thread>

#include "qbo/csplus.hpp"
#include "qbo/json_io.hpp"
#include "qbo/oracle.hpp"
#include "qbo/sdpa_io.hpp"
#include "qbo/verify.hpp"

namespace qbo {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string command;
  std::vector<std::string> files;
  std::string hierarchy = "new";
  int level = 1;
  std::string variant = "full";
  bool oracle = false;
  std::string export_sdpa_path;
  double eps = 1e-8;
  std::string out_path;
  bool seedless = false;
  int jobs = 1;
};

HierarchyKind kind_of(const std::string& s) {
  if (s == "npa") return HierarchyKind::NPA;
  if (s == "new") return HierarchyKind::New;
  throw Error(Error::Code::ParseError, "unknown hierarchy \"" + s + "\"");
}

ordered_json instance_stats(const SDPInstance& inst) {
  ordered_json s;
  s["variables"] = inst.var_count;
  s["psd_blocks"] = inst.blocks.size() - inst.scalar_block_count();
  s["scalar_rows"] = inst.scalar_block_count();
  s["equalities"] = inst.equalities.size();
  s["inventory"] = inst.inventory();
  return s;
}

void fill_solve_report(ordered_json& rep, const SDPInstance& inst,
                       const SolveResult& r, const Options& opt) {
  rep["status"] = to_string(r.status);
  rep["value"] = r.value;
  rep["residuals"] = {{"primal", r.residuals.primal},
                      {"dual", r.residuals.dual},
                      {"gap", r.residuals.gap}};
  rep["iterations"] = r.iters;
  rep["wall_time_s"] = opt.seedless ? 0.0 : r.wall_s;
  if (r.status == SolveStatus::Optimal)
    rep["verified"] = verify(inst, r, std::max(1e-6, 10 * opt.eps)).pass;
  if (!r.message.empty()) rep["message"] = r.message;
}

int severity(SolveStatus s) {
  return (s == SolveStatus::Infeasible) ? 2 : 0;
}

// One file's worth of work for one subcommand; throws qbo::Error upward.
int run_one(const Options& opt, const std::string& file, ordered_json& rep) {
  SolveOptions sopts;
  sopts.feas_tol = opt.eps;
  sopts.gap_tol = opt.eps;

  rep["command"] = opt.command;
  rep["file"] = file;

  if (opt.command == "game" || opt.command == "channel") {
    rep["hierarchy"] = opt.hierarchy;
    rep["level"] = opt.level;
    const HierarchyKind kind = kind_of(opt.hierarchy);
    Built built;
    Rat oracle_value;
    if (opt.command == "game") {
      const Game g = game_from_json(load_json_file(file));
      built = build_game(g, kind, opt.level);
      if (opt.oracle) oracle_value = game_classical_value(g);
    } else {
      const Channel c = channel_from_json(load_json_file(file));
      built = build_channel(c, kind, opt.level);
      if (opt.oracle) oracle_value = channel_classical_value(c);
    }
    rep["instance"] = instance_stats(built.instance);
    if (!opt.export_sdpa_path.empty()) {
      export_sdpa(built.instance, opt.export_sdpa_path);
      rep["exported"] = opt.export_sdpa_path;
    }
    const SolveResult r = solve(built.instance, sopts);
    fill_solve_report(rep, built.instance, r, opt);
    if (opt.oracle) {
      rep["oracle"] = rat_to_string(oracle_value);
      rep["oracle_value"] = rat_to_double(oracle_value);
    }
    return severity(r.status);
  }

  if (opt.command == "extractor") {
    rep["variant"] = opt.variant;
    const Extractor e = extractor_from_json(load_json_file(file));
    const ExtractorVariant variant = opt.variant == "simplified"
                                         ? ExtractorVariant::Simplified
                                         : ExtractorVariant::Full;
    const SDPInstance inst = extractor_to_sdp1(e, variant);
    rep["instance"] = instance_stats(inst);
    if (!opt.export_sdpa_path.empty()) {
      export_sdpa(inst, opt.export_sdpa_path);
      rep["exported"] = opt.export_sdpa_path;
    }
    const SolveResult r = solve(inst, sopts);
    fill_solve_report(rep, inst, r, opt);
    if (opt.oracle) {
      const int k = static_cast<int>(std::llround(e.k));
      const Rat err = extractor_classical_err(e, k);
      rep["oracle"] = rat_to_string(err);
      rep["oracle_value"] = rat_to_double(err);
    }
    return severity(r.status);
  }

  if (opt.command == "csplus") {
    rep["level"] = opt.level;
    CSPlusQuery q = csplus_from_json(load_json_file(file));
    if (!opt.export_sdpa_path.empty()) {
      export_sdpa(build_csplus(q, opt.level).instance, opt.export_sdpa_path);
      rep["exported"] = opt.export_sdpa_path;
    }
    if (q.mode == CSPlusQuery::Mode::Membership) {
      const MembershipResult m = csplus_membership(q.K, opt.level, sopts);
      rep["membership"] = to_string(m.status);
      rep["phase1_slack"] = m.phase1;
      if (m.status == MembershipStatus::CertifiedOutside) {
        // Normalized quantities recomputed by verify, not solver claims.
        rep["margin"] = m.report.farkas_margin;
        rep["certificate_adjoint"] = m.report.farkas_adjoint;
        rep["certificate_radius"] = m.report.farkas_radius;
      }
      rep["wall_time_s"] = opt.seedless ? 0.0 : m.solve.wall_s;
      return m.status == MembershipStatus::CertifiedOutside ? 2 : 0;
    }
    Built built = build_csplus(q, opt.level);
    rep["instance"] = instance_stats(built.instance);
    const SolveResult r = solve(built.instance, sopts);
    fill_solve_report(rep, built.instance, r, opt);
    return severity(r.status);
  }

  if (opt.command == "solve-file") {
    std::ifstream probe(file);
    if (!probe) throw Error(Error::Code::IOFailure, "cannot read " + file);
    char first = 0;
    probe >> std::ws >> first;
    probe.close();
    SDPInstance inst;
    if (first == '{') {
      rep["hierarchy"] = opt.hierarchy;
      rep["level"] = opt.level;
      const BilinearProblem p = problem_from_json(load_json_file(file));
      const HierarchyKind kind = kind_of(opt.hierarchy);
      inst = (kind == HierarchyKind::NPA) ? build_npa(p, opt.level).instance
                                          : build_new(p, opt.level).instance;
      if (opt.oracle) {
        const OracleResult o = classical_value(to_rational(p));
        rep["oracle"] = rat_to_string(o.value);
        rep["oracle_value"] = rat_to_double(o.value);
      }
    } else {
      inst = import_sdpa(file);
    }
    rep["instance"] = instance_stats(inst);
    if (!opt.export_sdpa_path.empty()) {
      export_sdpa(inst, opt.export_sdpa_path);
      rep["exported"] = opt.export_sdpa_path;
    }
    const SolveResult r = solve(inst, sopts);
    fill_solve_report(rep, inst, r, opt);
    return severity(r.status);
  }

  throw Error(Error::Code::ParseError, "unknown command " + opt.command);
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Options opt;
  CLI::App app{"Bilinear-program SDP relaxations"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool hierarchy, bool variant) {
    sub->add_option("--file", opt.files, "input file (repeatable)")
        ->required()
        ->expected(-1);
    if (hierarchy)
      sub->add_option("--hierarchy", opt.hierarchy, "npa|new")
          ->check(CLI::IsMember({"npa", "new"}));
    sub->add_option("--level", opt.level, "relaxation level")
        ->check(CLI::PositiveNumber);
    if (variant)
      sub->add_option("--variant", opt.variant, "full|simplified")
          ->check(CLI::IsMember({"full", "simplified"}));
    sub->add_flag("--oracle", opt.oracle, "also run the exact classical oracle");
    sub->add_option("--export-sdpa", opt.export_sdpa_path, "write the instance in sparse SDPA form");
    sub->add_option("--eps", opt.eps, "solver tolerance");
    sub->add_option("--out", opt.out_path, "write the JSON report here instead of stdout");
    sub->add_flag("--seedless", opt.seedless, "suppress wall times for byte-stable reports");
    sub->add_option("--jobs", opt.jobs, "parallel workers across multiple files")
        ->check(CLI::PositiveNumber);
  };
  add_common(app.add_subcommand("game", "two-prover game"), true, false);
  add_common(app.add_subcommand("channel", "coding over a classical channel"), true, false);
  add_common(app.add_subcommand("extractor", "quantum-proof extractor error"), false, true);
  add_common(app.add_subcommand("csplus", "Gram-of-PSD cone queries"), false, false);
  add_common(app.add_subcommand("solve-file", "solve a problem JSON or SDPA file"), true, false);

  std::vector<const char*> argv;
  argv.push_back("qbo");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 1;
  }
  opt.command = app.get_subcommands().front()->get_name();

  std::vector<ordered_json> reports(opt.files.size());
  std::vector<int> codes(opt.files.size(), 0);
  if (!opt.export_sdpa_path.empty() && opt.files.size() > 1) {
    err << "--export-sdpa expects a single input file\n";
    return 1;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= opt.files.size()) return;
      try {
        codes[i] = run_one(opt, opt.files[i], reports[i]);
      } catch (const Error& e) {
        reports[i]["command"] = opt.command;
        reports[i]["file"] = opt.files[i];
        reports[i]["error"] = e.what();
        reports[i]["error_code"] = to_string(e.code());
        codes[i] = 1;
      } catch (const std::exception& e) {
        reports[i]["file"] = opt.files[i];
        reports[i]["error"] = e.what();
        codes[i] = 1;
      }
    }
  };
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(opt.jobs), opt.files.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const ordered_json result =
      opt.files.size() == 1 ? reports[0] : ordered_json(reports);
  if (!opt.out_path.empty()) {
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) {
      err << "cannot write " << opt.out_path << "\n";
      return 1;
    }
    f << result.dump(2) << "\n";
  } else {
    out << result.dump(2) << "\n";
  }

  int exit_code = 0;
  for (int c : codes) {
    if (c == 1) return 1;
    if (c == 2) exit_code = 2;
  }
  return exit_code;
}

}  // namespace qbo
