#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "udag/anm.hpp"
#include "udag/distribution.hpp"
#include "udag/exact_learner.hpp"
#include "udag/gibbs.hpp"
#include "udag/graph.hpp"
#include "udag/graph_io.hpp"
#include "udag/markov.hpp"
#include "udag/separation.hpp"

namespace {

using nlohmann::json;

udag::NodeSet parse_node_list(const udag::Udag& g, const std::string& csv) {
  udag::NodeSet out;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    int found = -1;
    for (udag::NodeId v : g.nodes())
      if (g.name(v) == token) { found = v; break; }
    if (found < 0) throw udag::Error(udag::Errc::invalid_query, "unknown node '" + token + "'");
    out.insert(found);
  }
  return out;
}

json name_array(const udag::Udag& g, udag::NodeSet s) {
  json arr = json::array();
  for (udag::NodeId v : s) arr.push_back(g.name(v));
  return arr;
}

udag::DiscreteDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw udag::Error(udag::Errc::bad_format, "cannot open distribution file '" + path + "'");
  return udag::distribution_from_json(in);
}

std::string property_name(udag::MarkovProperty p) {
  switch (p) {
    case udag::MarkovProperty::global: return "global";
    case udag::MarkovProperty::local: return "local";
    default: return "pairwise";
  }
}

json report_json(const udag::Udag& g, const udag::MarkovReport& report) {
  json out;
  out["property"] = property_name(report.property);
  out["holds"] = report.holds;
  out["violations"] = json::array();
  for (const auto& v : report.violations)
    out["violations"].push_back({{"statement", udag::format_statement(g, v.statement)},
                                 {"deviation", v.deviation}});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-graph separation, Markov checking, and structure learning"};
  app.require_subcommand(1);

  std::string graph_path, graph2_path, dist_path, oracle_path, data_path, out_path;
  std::string xs, ys, zs, ws, property = "global", form = "marginals", cls = "udag", test = "gamma";
  std::string regressor = "kridge", nodes_csv;
  double tol = 1e-9, line_weight = 1.0, arrow_weight = 1.0;
  int component = 0, sweeps = 10000, samples = 1000, node_hint = 0;
  std::uint64_t seed = 1;
  bool as_json = false, maximal_only = false, all_optima = false, force = false;

  auto* sep = app.add_subcommand("separate", "decide one separation query");
  sep->add_option("-g,--graph", graph_path)->required();
  sep->add_option("-x", xs)->required();
  sep->add_option("-y", ys)->required();
  sep->add_option("-z", zs);

  auto* reach = app.add_subcommand("reach", "separation via the reachability rules, with the rule state");
  reach->add_option("-g,--graph", graph_path)->required();
  reach->add_option("-x", xs)->required();
  reach->add_option("-y", ys)->required();
  reach->add_option("-z", zs);

  auto* moralize = app.add_subcommand("moralize", "print the moral graph");
  moralize->add_option("-g,--graph", graph_path)->required();

  auto* dec = app.add_subcommand("decompose", "minimal ancestral sets, components, boundaries");
  dec->add_option("-g,--graph", graph_path)->required();
  dec->add_flag("--json", as_json);

  auto* equiv = app.add_subcommand("equivalent", "compare the separation models of two graphs");
  equiv->add_option("first", graph_path)->required();
  equiv->add_option("second", graph2_path)->required();

  auto* nonsep = app.add_subcommand("nonseparable", "non-adjacent pairs no conditioning set separates");
  nonsep->add_option("-g,--graph", graph_path)->required();
  nonsep->add_flag("--json", as_json);

  auto* transform = app.add_subcommand("transform", "replace a minimal ancestral set by its moral graph");
  transform->add_option("-g,--graph", graph_path)->required();
  transform->add_option("-w", ws)->required();

  auto* markov = app.add_subcommand("check-markov", "check a Markov property against a distribution");
  markov->add_option("-g,--graph", graph_path)->required();
  markov->add_option("-p,--distribution", dist_path)->required();
  markov->add_option("--property", property)->check(CLI::IsMember({"global", "local", "pairwise"}));
  markov->add_option("--tol", tol);

  auto* fact = app.add_subcommand("check-factorization", "check a factorization property");
  fact->add_option("-g,--graph", graph_path)->required();
  fact->add_option("-p,--distribution", dist_path)->required();
  fact->add_option("--form", form)->check(CLI::IsMember({"marginals", "chain"}));
  fact->add_flag("--maximal-only", maximal_only);
  fact->add_option("--tol", tol);

  auto* lexact = app.add_subcommand("learn-exact", "exhaustive search for the sparsest independence map");
  lexact->add_option("--oracle", oracle_path)->required();
  lexact->add_option("--class", cls)->check(CLI::IsMember({"udag", "dag", "lwf"}));
  lexact->add_option("--line-weight", line_weight);
  lexact->add_option("--arrow-weight", arrow_weight);
  lexact->add_option("--nodes", nodes_csv);
  lexact->add_option("-n", node_hint);
  lexact->add_flag("--all-optima", all_optima);
  lexact->add_flag("--force", force);

  auto* lanm = app.add_subcommand("learn-anm", "additive-noise search over sampled graphs");
  lanm->add_option("--data", data_path)->required();
  lanm->add_option("--L", samples);
  lanm->add_option("--seed", seed);
  lanm->add_option("--test", test)->check(CLI::IsMember({"gamma", "perm"}));
  lanm->add_option("--regressor", regressor)->check(CLI::IsMember({"kridge"}));

  auto* gibbs = app.add_subcommand("gibbs", "run the component sampler against a distribution");
  gibbs->add_option("-g,--graph", graph_path)->required();
  gibbs->add_option("-p,--distribution", dist_path)->required();
  gibbs->add_option("-i,--component", component)->required();
  gibbs->add_option("--sweeps", sweeps);
  gibbs->add_option("--seed", seed);
  gibbs->add_option("--samples-out", out_path);

  auto* dot = app.add_subcommand("export-dot", "render the graph as DOT");
  dot->add_option("-g,--graph", graph_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sep->parsed() || reach->parsed()) {
      udag::Udag g = udag::parse_graph_file(graph_path);
      udag::SeparationQuery q{parse_node_list(g, xs), parse_node_list(g, ys), parse_node_list(g, zs)};
      if (sep->parsed()) {
        json out;
        out["separated"] = udag::separated_moral(g, q);
        std::cout << out.dump() << "\n";
      } else {
        auto [separated, state] = udag::separated_reach(g, q);
        json out;
        out["U1"] = name_array(g, state.u1);
        out["U2"] = name_array(g, state.u2);
        out["U3"] = name_array(g, state.u3);
        out["separated"] = separated;
        std::cout << out.dump() << "\n";
      }
    } else if (moralize->parsed()) {
      udag::format_ug(std::cout, udag::moral_graph(udag::parse_graph_file(graph_path)));
    } else if (dec->parsed()) {
      udag::Udag g = udag::parse_graph_file(graph_path);
      udag::Decomposition d = udag::decompose(g);
      if (as_json) {
        json out;
        out["W"] = json::array();
        out["C"] = json::array();
        out["bd"] = json::array();
        for (int i = 0; i < d.count(); ++i) {
          out["W"].push_back(name_array(g, d.minimal_ancestral_sets[i]));
          out["C"].push_back(name_array(g, d.components[i]));
          out["bd"].push_back(name_array(g, d.boundaries[i]));
        }
        std::cout << out.dump() << "\n";
      } else {
        auto join = [&](udag::NodeSet s) {
          std::string t;
          for (udag::NodeId v : s) {
            if (!t.empty()) t += ",";
            t += g.name(v);
          }
          return "{" + t + "}";
        };
        for (int i = 0; i < d.count(); ++i)
          std::cout << "W" << i + 1 << " = " << join(d.minimal_ancestral_sets[i]) << "\n";
        for (int i = 0; i < d.count(); ++i)
          std::cout << "C" << i + 1 << " = " << join(d.components[i])
                    << "  bd = " << join(d.boundaries[i]) << "\n";
      }
    } else if (equiv->parsed()) {
      udag::Udag g1 = udag::parse_graph_file(graph_path);
      udag::Udag g2 = udag::parse_graph_file(graph2_path);
      json out;
      out["equivalent"] = udag::markov_equivalent(g1, g2);
      std::cout << out.dump() << "\n";
    } else if (nonsep->parsed()) {
      udag::Udag g = udag::parse_graph_file(graph_path);
      auto pairs = udag::non_separable_pairs(g);
      if (as_json) {
        json out = json::array();
        for (auto [a, b] : pairs) out.push_back({g.name(a), g.name(b)});
        std::cout << out.dump() << "\n";
      } else {
        for (auto [a, b] : pairs) std::cout << g.name(a) << " " << g.name(b) << "\n";
      }
    } else if (transform->parsed()) {
      udag::Udag g = udag::parse_graph_file(graph_path);
      udag::format_graph(std::cout, udag::undirect_ancestral_set(g, parse_node_list(g, ws)));
    } else if (markov->parsed()) {
      udag::Udag g = udag::parse_graph_file(graph_path);
      udag::DiscreteDistribution p = load_distribution(dist_path);
      udag::MarkovReport report =
          property == "global"  ? udag::satisfies_global(p, g, tol)
          : property == "local" ? udag::satisfies_local(p, g, tol)
                                : udag::satisfies_pairwise(p, g, tol);
      std::cout << report_json(g, report).dump() << "\n";
    } else if (fact->parsed()) {
      udag::Udag g = udag::parse_graph_file(graph_path);
      udag::DiscreteDistribution p = load_distribution(dist_path);
      udag::FactorizationReport report =
          form == "chain" ? udag::factorizes_component_chain(p, g, tol)
                          : udag::factorizes_ancestral_marginals(p, g, tol, maximal_only);
      json out;
      out["form"] = form;
      out["holds"] = report.holds;
      out["failures"] = report.failures;
      std::cout << out.dump() << "\n";
    } else if (lexact->parsed()) {
      std::ifstream in(oracle_path);
      if (!in) throw udag::Error(udag::Errc::bad_format, "cannot open oracle file '" + oracle_path + "'");
      std::vector<std::string> names;
      if (!nodes_csv.empty()) {
        std::istringstream ns(nodes_csv);
        std::string token;
        while (std::getline(ns, token, ',')) names.push_back(token);
      }
      udag::IndependenceOracle oracle = udag::parse_oracle(in, names, node_hint);
      udag::LearnerConfig config;
      config.graph_class = cls == "dag"   ? udag::GraphClass::dag
                           : cls == "lwf" ? udag::GraphClass::lwf_cg
                                          : udag::GraphClass::udag;
      config.line_weight = line_weight;
      config.arrow_weight = arrow_weight;
      config.return_all_optima = all_optima;
      config.unguarded = force;
      udag::LearnResult result = udag::learn(oracle, config);
      std::cout << "# objective " << result.objective << "\n";
      std::cout << "# graphs searched " << result.graphs_searched << "\n";
      bool first = true;
      for (const udag::Udag& g : result.best) {
        if (!first) std::cout << "\n";
        first = false;
        udag::Udag named(g.size(), g.arrows(), g.lines(), names);
        udag::format_graph(std::cout, named);
      }
    } else if (lanm->parsed()) {
      std::ifstream in(data_path);
      if (!in) throw udag::Error(udag::Errc::bad_format, "cannot open data file '" + data_path + "'");
      udag::Dataset d = udag::read_csv(in);
      udag::AnmConfig config;
      config.test = test == "perm" ? udag::HsicMethod::permutation : udag::HsicMethod::gamma;
      udag::Udag g = udag::learn_causal(d, samples, seed, config);
      udag::Udag named(g.size(), g.arrows(), g.lines(), d.names);
      udag::format_graph(std::cout, named);
    } else if (gibbs->parsed()) {
      udag::Udag g = udag::parse_graph_file(graph_path);
      udag::DiscreteDistribution p = load_distribution(dist_path);
      udag::GibbsTrace trace = udag::gibbs_run(p, g, component, sweeps, seed, !out_path.empty());
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw udag::Error(udag::Errc::bad_format, "cannot open '" + out_path + "' for writing");
        for (std::size_t c = 0; c < trace.sample_columns.size(); ++c)
          out << (c ? "," : "") << trace.sample_columns[c];
        out << "\n";
        for (const auto& row : trace.samples) {
          for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
          out << "\n";
        }
      }
      json out;
      out["component"] = trace.component;
      out["sweeps"] = trace.sweeps;
      out["max_tv"] = trace.max_tv();
      out["boundary"] = json::array();
      for (const auto& b : trace.per_boundary)
        out["boundary"].push_back({{"config", b.boundary_config}, {"tv", b.tv}});
      // How far the update kernel is from its parents-and-neighbors form, per
      // node of the sampled component.
      out["update_kernel_deviations"] = json::array();
      for (const auto& entry : udag::causal_update_deviations(p, g))
        if (entry.component == component)
          out["update_kernel_deviations"].push_back(
              {{"node", g.name(entry.node)}, {"deviation", entry.max_deviation}});
      std::cout << out.dump() << "\n";
    } else if (dot->parsed()) {
      udag::export_dot(std::cout, udag::parse_graph_file(graph_path));
    }
  } catch (const udag::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
