#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "heis/errors.hpp"
#include "heis/experiments.hpp"

using namespace heis;

namespace {

enum Exit { ok = 0, failure = 1, invalid = 2, nonconvergent = 3 };

struct Output {
  std::string path;
  std::string format;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--out", path, "output file (default stdout)");
    cmd->add_option("--format", format, "json or csv (default from the --out extension, else json)")
        ->check(CLI::IsMember({"json", "csv"}));
  }

  void write(const Report& r) const {
    std::string fmt = format;
    if (fmt.empty()) fmt = path.size() > 4 && path.substr(path.size() - 4) == ".csv" ? "csv" : "json";
    std::ostringstream text;
    if (fmt == "csv")
      r.write_csv(text);
    else
      text << r.to_json().dump(2) << '\n';
    if (path.empty()) {
      std::cout << text.str();
      return;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << text.str();
  }
};

void add_run_options(CLI::App* cmd, RunOptions& o, std::string& metric) {
  cmd->add_option("--metric", metric, "riem or subriem")->check(CLI::IsMember({"riem", "subriem"}));
  cmd->add_option("--nodes", o.nodes, "uniform steps M of the discrete path")->check(CLI::Range(2, 100000));
  cmd->add_option("--seed", o.seed, "seed for the initial perturbation");
  cmd->add_option("--max-iterations", o.optimizer.max_iterations)->check(CLI::PositiveNumber);
  cmd->add_option("--max-rounds", o.optimizer.max_rounds)->check(CLI::PositiveNumber);
  cmd->add_option("--endpoint-tolerance", o.optimizer.endpoint_tolerance)->check(CLI::PositiveNumber);
}

std::vector<EndpointPair> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
  if (!j.is_array()) throw ValidationError("pairs file must hold an array of {from, to} objects");
  std::vector<EndpointPair> out;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("from") || !item.contains("to"))
      throw ValidationError("each pair needs from and to");
    out.push_back({group_point_from_json(item.at("from")), group_point_from_json(item.at("to"))});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on the infinite-dimensional Heisenberg group"};
  app.require_subcommand(1);
  Output output;
  std::function<Report()> run;

  // vanish
  double s = 1.0;
  std::vector<Index> modes_list{1, 4, 16, 64, 100};
  RunOptions vanish_opts;
  std::string vanish_metric = "subriem";
  auto* vanish = app.add_subcommand("vanish", "distance bounds for the vertical shift (0,0,0) -> (0,0,s)");
  vanish->add_option("--s", s, "vertical shift")->check(CLI::PositiveNumber);
  vanish->add_option("--modes", modes_list, "mode budgets")->delimiter(',');
  add_run_options(vanish, vanish_opts, vanish_metric);
  output.add_to(vanish);
  vanish->callback([&] { run = [&] { return run_vanish(s, modes_list, parse_metric_kind(vanish_metric), vanish_opts); }; });

  // positivity
  std::string pairs_file;
  Index pos_modes = 1;
  RunOptions pos_opts;
  std::string pos_metric = "subriem";
  auto* positivity = app.add_subcommand("positivity", "lower and upper distance bounds for separated points");
  positivity->add_option("--pairs", pairs_file, "JSON array of {from, to} group points");
  positivity->add_option("--modes", pos_modes, "minimum mode budget");
  add_run_options(positivity, pos_opts, pos_metric);
  output.add_to(positivity);
  positivity->callback([&] {
    run = [&] {
      auto pairs = pairs_file.empty() ? default_positivity_pairs() : read_pairs(pairs_file);
      return run_positivity(pairs, parse_metric_kind(pos_metric), pos_modes, pos_opts);
    };
  });

  // curvature-sweep
  Index j_max = 10;
  Index sweep_truncation = 3;
  double sweep_step = 1e-4;
  auto* sweep = app.add_subcommand("curvature-sweep", "sectional curvature of the blow-up planes");
  sweep->add_option("--j-max", j_max);
  sweep->add_option("--oracle-truncation", sweep_truncation, "finite-difference columns for j up to this");
  sweep->add_option("--step", sweep_step, "finite-difference step");
  output.add_to(sweep);
  sweep->callback([&] { run = [&] { return run_curvature_sweep(j_max, sweep_truncation, sweep_step); }; });

  // discontinuity
  std::vector<Index> k_list{1, 2, 10, 1000, 1000000};
  Index tail = 10000000;
  int disc_depth = 20;
  auto* disc = app.add_subcommand("discontinuity", "K(W_k, e3) against convergence of the planes");
  disc->add_option("--k", k_list, "increasing k values")->delimiter(',');
  disc->add_option("--tail", tail, "truncation of the limit vector");
  disc->add_option("--depth", disc_depth, "probe depth for W");
  output.add_to(disc);
  disc->callback([&] { run = [&] { return run_discontinuity(k_list, tail, disc_depth); }; });

  // distance
  std::string from_file, to_file;
  Index dist_modes = 1;
  RunOptions dist_opts;
  std::string dist_metric = "subriem";
  auto* distance = app.add_subcommand("distance", "upper and lower bounds on the distance between two points");
  distance->add_option("--from", from_file, "group point JSON")->required();
  distance->add_option("--to", to_file, "group point JSON")->required();
  distance->add_option("--modes", dist_modes, "mode budget n");
  add_run_options(distance, dist_opts, dist_metric);
  output.add_to(distance);
  distance->callback([&] {
    run = [&] {
      return run_distance(read_group_point(from_file), read_group_point(to_file), parse_metric_kind(dist_metric),
                          dist_modes, dist_opts);
    };
  });

  // length
  std::string family = "glued";
  Index len_n = 1;
  double len_c = 1.0;
  std::string len_metric = "subriem";
  QuadratureSpec quad;
  int samples = 101;
  auto* len = app.add_subcommand("length", "length of the curve families");
  len->add_option("--family", family)->check(CLI::IsMember({"gamma", "alpha", "glued"}));
  len->add_option("--n", len_n, "mode index");
  len->add_option("--c", len_c, "amplitude");
  len->add_option("--metric", len_metric)->check(CLI::IsMember({"riem", "subriem"}));
  len->add_option("--order", quad.order, "Gauss-Legendre order");
  len->add_option("--panels", quad.panels, "initial panels per piece");
  len->add_option("--tolerance", quad.tolerance, "refinement tolerance");
  len->add_option("--max-doublings", quad.max_doublings);
  len->add_option("--samples", samples, "sample rows in the table");
  output.add_to(len);
  len->callback([&] { run = [&] { return run_length(family, len_n, len_c, parse_metric_kind(len_metric), quad, samples); }; });

  // curvature
  std::string plane, probe_rule;
  Index plane_j = 1, wk = 0, truncation = 3;
  int probe_depth = 20, planes = 1;
  bool oracle = false;
  std::uint64_t oracle_seed = 0;
  double oracle_step = 1e-4;
  auto* curv = app.add_subcommand("curvature", "sectional curvature at the identity");
  auto* plane_opt = curv->add_option("--plane", plane, "a1j,a2j | a1j,e3 | a2j,e3");
  curv->add_option("--j", plane_j, "index of the blow-up plane")->needs(plane_opt);
  auto* wk_opt = curv->add_option("--wk", wk, "K(W_k, e3) for this k");
  auto* probe_opt = curv->add_option("--probe", probe_rule, "W or power:P");
  curv->add_option("--depth", probe_depth, "probe depth")->needs(probe_opt);
  auto* oracle_flag = curv->add_flag("--oracle", oracle, "random planes against the finite-difference oracle");
  curv->add_option("--truncation", truncation)->needs(oracle_flag);
  curv->add_option("--seed", oracle_seed)->needs(oracle_flag);
  curv->add_option("--planes", planes)->needs(oracle_flag);
  curv->add_option("--step", oracle_step)->needs(oracle_flag);
  plane_opt->excludes(wk_opt)->excludes(probe_opt)->excludes(oracle_flag);
  wk_opt->excludes(probe_opt)->excludes(oracle_flag);
  probe_opt->excludes(oracle_flag);
  output.add_to(curv);
  curv->callback([&] {
    if (!plane.empty())
      run = [&] { return run_curvature_plane(plane, plane_j); };
    else if (*wk_opt)
      run = [&] { return run_curvature_wk(wk); };
    else if (!probe_rule.empty())
      run = [&] { return run_curvature_probe(probe_rule, probe_depth); };
    else if (oracle)
      run = [&] { return run_curvature_oracle(truncation, oracle_seed, planes, oracle_step); };
    else
      throw CLI::ValidationError("curvature needs one of --plane, --wk, --probe, --oracle");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return invalid;
  }

  try {
    output.write(run());
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return invalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return invalid;
  } catch (const NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return nonconvergent;
  } catch (const InconclusiveProbe& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return nonconvergent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return ok;
}
