#include "archetypal/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "archetypal/chain.hpp"
#include "archetypal/fourier.hpp"
#include "archetypal/measure.hpp"
#include "archetypal/presets.hpp"
#include "archetypal/series.hpp"
#include "archetypal/transfer.hpp"
#include "archetypal/verify.hpp"

namespace archetypal::cli {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

using nlohmann::json;

constexpr const char* kToolVersion = "0.1.0";

struct SpecOpts {
  std::string preset_name;
  std::string spec_file;
  double a = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string alphas;
  std::string masks;
};

struct RunOpts {
  std::string seed_str;
  int workers = 0;
  std::string out_path;
};

std::vector<std::pair<double, double>> parse_pairs(const std::string& text, const char* what) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw SpecError(std::string(what) + ": expected comma-separated value:prob pairs");
    try {
      out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw SpecError(std::string(what) + ": expected comma-separated value:prob pairs");
    }
  }
  if (out.empty())
    throw SpecError(std::string(what) + ": expected comma-separated value:prob pairs");
  return out;
}

void add_spec_options(CLI::App* cmd, SpecOpts& o) {
  auto* preset = cmd->add_option("--preset", o.preset_name, "built-in coefficient measure");
  auto* file = cmd->add_option("--spec", o.spec_file, "path to a JSON measure spec");
  preset->excludes(file);
  file->excludes(preset);
  cmd->add_option("--a", o.a, "scale for bernoulli_convolution / schilling_like");
  cmd->add_option("--alpha", o.alpha, "alpha for pantograph_const");
  cmd->add_option("--alphas", o.alphas, "pantograph_general alpha atoms, a:p,a:p,...");
  cmd->add_option("--masks", o.masks, "schilling_like mask atoms, b:p,b:p,...");
}

void add_run_options(CLI::App* cmd, RunOpts& o) {
  cmd->add_option("--seed", o.seed_str, "master seed (default: $ARCHETYPAL_SEED, else 0)");
  cmd->add_option("--workers", o.workers, "worker threads, 0 = hardware concurrency");
  cmd->add_option("--out", o.out_path, "output file (default: stdout)");
}

std::uint64_t resolve_seed(const std::string& flag_value) {
  std::string v = flag_value;
  if (v.empty()) {
    if (const char* env = std::getenv("ARCHETYPAL_SEED")) v = env;
  }
  if (v.empty()) return 0;
  try {
    std::size_t pos = 0;
    const std::uint64_t seed = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return seed;
  } catch (const std::exception&) {
    throw SpecError("seed must be an unsigned 64-bit integer, got \"" + v + "\"");
  }
}

MeasureSpec load_spec(const SpecOpts& o, json* params_echo) {
  if (!o.spec_file.empty()) {
    std::ifstream in(o.spec_file);
    if (!in) throw SpecError("cannot open spec file \"" + o.spec_file + "\"");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw SpecError("spec file \"" + o.spec_file + "\": " + e.what());
    }
    if (params_echo) *params_echo = {{"specFile", o.spec_file}};
    return MeasureSpec::from_json(j);
  }
  if (o.preset_name.empty()) throw SpecError("need either --preset or --spec");
  json params = json::object();
  if (!std::isnan(o.a)) params["a"] = o.a;
  if (!std::isnan(o.alpha)) params["alpha"] = o.alpha;
  if (!o.alphas.empty()) {
    json arr = json::array();
    for (const auto& [v, p] : parse_pairs(o.alphas, "--alphas")) arr.push_back({v, p});
    params["alphas"] = std::move(arr);
  }
  if (!o.masks.empty()) {
    json arr = json::array();
    for (const auto& [v, p] : parse_pairs(o.masks, "--masks")) arr.push_back({v, p});
    params["masks"] = std::move(arr);
  }
  if (params_echo) *params_echo = {{"preset", o.preset_name}, {"params", params}};
  return presets::preset(o.preset_name, params);
}

void write_text(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write \"" + path + "\"");
  out << content;
}

// Sidecar next to --out, or to the error stream when writing to stdout.
void write_metadata(const RunOpts& run, const json& meta, std::ostream& err) {
  const std::string text = meta.dump(2) + "\n";
  if (run.out_path.empty()) {
    err << text;
    return;
  }
  std::ofstream out(run.out_path + ".meta.json", std::ios::binary);
  if (!out) throw Error("cannot write \"" + run.out_path + ".meta.json\"");
  out << text;
}

json base_metadata(const char* command, const json& spec_echo, const json& source_echo,
                   std::uint64_t seed, const RunOpts& run) {
  return {{"command", command},
          {"tool", {{"name", "archetypal"}, {"version", kToolVersion}}},
          {"seed", seed},
          {"workers", run.workers},
          {"specSource", source_echo},
          {"spec", spec_echo}};
}

std::vector<double> geometric_s_grid(double s_min, double s_max, std::size_t count) {
  if (!(s_min > 0.0) || !(s_max > s_min) || count < 2)
    throw SpecError("charfn: need 0 < s-min < s-max and s-count >= 2");
  std::vector<double> s;
  s.reserve(count + 1);
  s.push_back(0.0);
  const double ratio = s_max / s_min;
  for (std::size_t i = 0; i < count; ++i)
    s.push_back(s_min * std::pow(ratio, static_cast<double>(i) / static_cast<double>(count - 1)));
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"numerics for the archetypal functional equation y(x) = E y(alpha (x - beta))"};
  app.name("archetypal");
  app.require_subcommand(1);

  // classify
  auto* cmd_classify = app.add_subcommand("classify", "regime and assumption report");
  SpecOpts classify_spec;
  RunOpts classify_run;
  double classify_tol = 1e-9;
  add_spec_options(cmd_classify, classify_spec);
  add_run_options(cmd_classify, classify_run);
  cmd_classify->add_option("--tol", classify_tol, "criticality tolerance for quadrature K");

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "canonical solution as an empirical CDF");
  SpecOpts solve_spec;
  RunOpts solve_run;
  std::size_t solve_n = 100000, solve_m = 2001;
  double solve_gmin = std::numeric_limits<double>::quiet_NaN();
  double solve_gmax = std::numeric_limits<double>::quiet_NaN();
  series::SeriesConfig solve_cfg;
  bool solve_allow = false;
  add_spec_options(cmd_solve, solve_spec);
  add_run_options(cmd_solve, solve_run);
  cmd_solve->add_option("--N", solve_n, "number of series samples");
  cmd_solve->add_option("--m", solve_m, "output grid size");
  cmd_solve->add_option("--grid-min", solve_gmin, "output grid lower bound (default: sample min)");
  cmd_solve->add_option("--grid-max", solve_gmax, "output grid upper bound (default: sample max)");
  cmd_solve->add_option("--tail-tol", solve_cfg.tail_tolerance, "series truncation tolerance");
  cmd_solve->add_option("--min-depth", solve_cfg.min_depth, "minimum series depth");
  cmd_solve->add_option("--max-depth", solve_cfg.max_depth, "maximum series depth");
  cmd_solve->add_flag("--allow-non-solution", solve_allow,
                      "emit the series CDF even when it is not a solution (q > 0 or degenerate)");

  // iterate
  auto* cmd_iterate = app.add_subcommand("iterate", "transfer-operator iteration on a grid");
  SpecOpts it_spec;
  RunOpts it_run;
  std::size_t it_n = 50, it_m = 2001;
  double it_gmin = -10.0, it_gmax = 10.0, it_margin = 0.1, it_f0_value = 0.0;
  std::string it_f0 = "cos";
  add_spec_options(cmd_iterate, it_spec);
  add_run_options(cmd_iterate, it_run);
  cmd_iterate->add_option("--n", it_n, "number of iterations");
  cmd_iterate->add_option("--m", it_m, "grid size");
  cmd_iterate->add_option("--grid-min", it_gmin, "grid lower bound");
  cmd_iterate->add_option("--grid-max", it_gmax, "grid upper bound");
  cmd_iterate->add_option("--margin", it_margin, "interior window margin");
  cmd_iterate->add_option("--f0", it_f0, "initial function: cos | const")
      ->check(CLI::IsMember({"cos", "const"}));
  cmd_iterate->add_option("--f0-value", it_f0_value, "value for --f0 const");

  // charfn
  auto* cmd_charfn = app.add_subcommand("charfn", "characteristic function of the series limit");
  SpecOpts cf_spec;
  RunOpts cf_run;
  std::size_t cf_n = 100000, cf_count = 256;
  double cf_smin = 0.01, cf_smax = 100.0;
  series::SeriesConfig cf_cfg;
  add_spec_options(cmd_charfn, cf_spec);
  add_run_options(cmd_charfn, cf_run);
  cmd_charfn->add_option("--N", cf_n, "number of series samples");
  cmd_charfn->add_option("--s-min", cf_smin, "smallest positive frequency");
  cmd_charfn->add_option("--s-max", cf_smax, "largest frequency");
  cmd_charfn->add_option("--s-count", cf_count, "number of geometric frequencies (0 is added)");
  cmd_charfn->add_option("--tail-tol", cf_cfg.tail_tolerance, "series truncation tolerance");
  cmd_charfn->add_option("--min-depth", cf_cfg.min_depth, "minimum series depth");
  cmd_charfn->add_option("--max-depth", cf_cfg.max_depth, "maximum series depth");

  // chain
  auto* cmd_chain = app.add_subcommand("chain", "simulate one trajectory of the Markov chain");
  SpecOpts ch_spec;
  RunOpts ch_run;
  std::size_t ch_n = 20;
  double ch_x0 = 0.0;
  add_spec_options(cmd_chain, ch_spec);
  add_run_options(cmd_chain, ch_run);
  cmd_chain->add_option("--n", ch_n, "number of steps");
  cmd_chain->add_option("--x0", ch_x0, "starting point");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "run a named theorem suite");
  RunOpts vf_run;
  std::string vf_suite;
  cmd_verify->add_option("--suite", vf_suite, "suite name or \"all\"")->required();
  add_run_options(cmd_verify, vf_run);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(cmd_classify)) {
      json source;
      const MeasureSpec spec = load_spec(classify_spec, &source);
      const auto rep = measure::classify(spec, classify_tol);
      json j = measure::report_to_json(rep);
      j["command"] = "classify";
      j["seed"] = resolve_seed(classify_run.seed_str);
      j["specSource"] = source;
      j["spec"] = spec.to_json();
      write_text(classify_run.out_path, j.dump(2) + "\n", out);
      return 0;
    }

    if (app.got_subcommand(cmd_solve)) {
      json source;
      const MeasureSpec spec = load_spec(solve_spec, &source);
      const std::uint64_t seed = resolve_seed(solve_run.seed_str);
      const auto cc =
          series::canonical_cdf(spec, solve_n, seed, solve_cfg, solve_allow, solve_run.workers);
      double gmin = std::isnan(solve_gmin) ? cc.cdf.min() : solve_gmin;
      double gmax = std::isnan(solve_gmax) ? cc.cdf.max() : solve_gmax;
      if (!(gmin < gmax)) {
        gmin -= 1.0;
        gmax += 1.0;
      }
      std::ostringstream csv;
      csv << "x,F\n";
      const double h = (gmax - gmin) / static_cast<double>(solve_m - 1);
      for (std::size_t j = 0; j < solve_m; ++j) {
        const double x = gmin + h * static_cast<double>(j);
        csv << format_real(x) << "," << format_real(cc.cdf(x)) << "\n";
      }
      write_text(solve_run.out_path, csv.str(), out);

      json meta = base_metadata("solve", spec.to_json(), source, seed, solve_run);
      meta["parameters"] = {{"N", solve_n},
                            {"m", solve_m},
                            {"gridMin", gmin},
                            {"gridMax", gmax},
                            {"tailTolerance", solve_cfg.tail_tolerance},
                            {"minDepth", solve_cfg.min_depth},
                            {"maxDepth", solve_cfg.max_depth},
                            {"allowNonSolution", solve_allow}};
      meta["diagnostics"] = {{"N", cc.diagnostics.n},
                             {"meanDepth", cc.diagnostics.mean_depth},
                             {"maxDepthHits", cc.diagnostics.max_depth_hits},
                             {"dkwHalfwidth", cc.diagnostics.dkw_halfwidth},
                             {"caveats", cc.diagnostics.caveats}};
      write_metadata(solve_run, meta, err);
      return 0;
    }

    if (app.got_subcommand(cmd_iterate)) {
      json source;
      const MeasureSpec spec = load_spec(it_spec, &source);
      const std::uint64_t seed = resolve_seed(it_run.seed_str);
      const GridFunction f0 =
          it_f0 == "cos"
              ? GridFunction::sampled(it_gmin, it_gmax, it_m, [](double x) { return std::cos(x); })
              : GridFunction::constant(it_gmin, it_gmax, it_m, it_f0_value);
      const auto res = transfer::iterate(spec, f0, it_n, it_margin);

      std::ostringstream hist;
      hist << "iter,range,residual\n";
      for (const auto& rec : res.history)
        hist << rec.iteration << "," << format_real(rec.interior_range) << ","
             << format_real(rec.residual) << "\n";
      std::ostringstream grid;
      grid << "x,y\n";
      for (std::size_t j = 0; j < res.final.size(); ++j)
        grid << format_real(res.final.node_x(j)) << "," << format_real(res.final.values()[j])
             << "\n";

      std::string history_path;
      if (it_run.out_path.empty()) {
        out << hist.str() << grid.str();
      } else {
        std::filesystem::path hp(it_run.out_path);
        hp.replace_extension(".history.csv");
        history_path = hp.string();
        write_text(it_run.out_path, grid.str(), out);
        write_text(history_path, hist.str(), out);
      }

      json meta = base_metadata("iterate", spec.to_json(), source, seed, it_run);
      meta["parameters"] = {{"n", it_n},          {"m", it_m},
                            {"gridMin", it_gmin}, {"gridMax", it_gmax},
                            {"margin", it_margin}, {"f0", it_f0},
                            {"f0Value", it_f0_value}};
      meta["diagnostics"] = {{"clampWarning", res.clamp_warning}, {"warning", res.warning}};
      if (!history_path.empty()) meta["outputs"] = {{"historyCsv", history_path}};
      write_metadata(it_run, meta, err);
      return 0;
    }

    if (app.got_subcommand(cmd_charfn)) {
      json source;
      const MeasureSpec spec = load_spec(cf_spec, &source);
      const std::uint64_t seed = resolve_seed(cf_run.seed_str);
      const auto s = geometric_s_grid(cf_smin, cf_smax, cf_count);
      const auto grid = fourier::charfn(spec, s, cf_n, seed, cf_cfg, cf_run.workers);
      std::ostringstream csv;
      csv << "s,re,im,abs\n";
      for (std::size_t i = 0; i < grid.s.size(); ++i)
        csv << format_real(grid.s[i]) << "," << format_real(grid.values[i].real()) << ","
            << format_real(grid.values[i].imag()) << "," << format_real(std::abs(grid.values[i]))
            << "\n";
      write_text(cf_run.out_path, csv.str(), out);

      json meta = base_metadata("charfn", spec.to_json(), source, seed, cf_run);
      meta["parameters"] = {{"N", cf_n},
                            {"sMin", cf_smin},
                            {"sMax", cf_smax},
                            {"sCount", cf_count},
                            {"tailTolerance", cf_cfg.tail_tolerance},
                            {"minDepth", cf_cfg.min_depth},
                            {"maxDepth", cf_cfg.max_depth}};
      write_metadata(cf_run, meta, err);
      return 0;
    }

    if (app.got_subcommand(cmd_chain)) {
      json source;
      const MeasureSpec spec = load_spec(ch_spec, &source);
      const std::uint64_t seed = resolve_seed(ch_run.seed_str);
      RngStream rng(seed, 0);
      const auto path = chain::simulate(spec, ch_x0, ch_n, rng);
      std::ostringstream csv;
      csv << "n,alpha,beta,X,A,B,D\n";
      for (std::size_t i = 0; i < path.steps.size(); ++i) {
        const auto& st = path.steps[i];
        csv << (i + 1) << "," << format_real(st.alpha) << "," << format_real(st.beta) << ","
            << format_real(st.x) << "," << format_real(st.a) << "," << format_real(st.b) << ","
            << format_real(st.d) << "\n";
      }
      write_text(ch_run.out_path, csv.str(), out);

      json meta = base_metadata("chain", spec.to_json(), source, seed, ch_run);
      meta["parameters"] = {{"x0", ch_x0}, {"n", ch_n}};
      meta["diagnostics"] = {{"overflowed", path.overflowed},
                             {"recordedSteps", path.steps.size()}};
      write_metadata(ch_run, meta, err);
      return 0;
    }

    if (app.got_subcommand(cmd_verify)) {
      const std::uint64_t seed = resolve_seed(vf_run.seed_str);
      std::vector<std::string> names;
      if (vf_suite == "all") {
        names = verify::suite_names();
      } else {
        names.push_back(vf_suite);
      }
      json output = json::array();
      bool all_pass = true;
      for (const auto& name : names) {
        const auto rep = verify::run_suite(name, seed, vf_run.workers);
        json j = verify::report_to_json(rep);
        j["seed"] = seed;
        output.push_back(std::move(j));
        all_pass = all_pass && rep.pass;
      }
      const std::string text =
          (output.size() == 1 ? output[0].dump(2) : output.dump(2)) + "\n";
      write_text(vf_run.out_path, text, out);
      return all_pass ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace archetypal::cli
