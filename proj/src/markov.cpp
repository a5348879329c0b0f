#include "udag/markov.hpp"

#include <algorithm>
#include <cmath>

#include "udag/separation.hpp"

namespace udag {

std::string format_statement(const Udag& g, const CiStatement& s) {
  auto join = [&](NodeSet set) {
    std::string out;
    for (NodeId v : set) {
      if (!out.empty()) out += ",";
      out += g.name(v);
    }
    return out;
  };
  return join(s.x) + " _||_ " + join(s.y) + " | " + join(s.z);
}

std::vector<CiStatement> global_statements(const Udag& g) {
  std::vector<CiStatement> out;
  for_each_elementary_triplet(g.nodes(), [&](NodeId a, NodeId b, NodeSet z) {
    SeparationQuery q{NodeSet::of({a}), NodeSet::of({b}), z};
    if (separated_moral(g, q)) out.push_back({q.x, q.y, q.z});
    return true;
  });
  return out;
}

std::vector<CiStatement> local_statements(const Udag& g) {
  std::vector<CiStatement> out;
  for (NodeSet w : g.ancestral_sets()) {
    if (w.count() < 2) continue;
    Ug moral = moral_graph(g.induced(w));
    for (NodeId a : w) {
      NodeSet ne = moral.adjacent(a);
      NodeSet rest = w - ne - NodeSet::of({a});
      if (rest.empty()) continue;
      CiStatement s{NodeSet::of({a}), rest, ne};
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  return out;
}

std::vector<CiStatement> pairwise_statements(const Udag& g) {
  std::vector<CiStatement> out;
  for (NodeSet w : g.ancestral_sets()) {
    if (w.count() < 2) continue;
    Ug moral = moral_graph(g.induced(w));
    auto ids = w.members();
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        if (moral.has_edge(ids[i], ids[j])) continue;
        CiStatement s{NodeSet::of({ids[i]}), NodeSet::of({ids[j]}),
                      w - NodeSet::of({ids[i], ids[j]})};
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
      }
  }
  return out;
}

namespace {

void check_variables(const DiscreteDistribution& p, const Udag& g) {
  if (p.var_count() != g.size())
    throw Error(Errc::variable_mismatch, "distribution and graph disagree on the variables");
  for (NodeId v : g.nodes())
    if (p.variable(v).name != g.name(v))
      throw Error(Errc::variable_mismatch,
                  "variable '" + p.variable(v).name + "' does not match node '" + g.name(v) + "'");
}

MarkovReport run_checks(const DiscreteDistribution& p, const Udag& g, MarkovProperty which,
                        const std::vector<CiStatement>& statements, double tol) {
  check_variables(p, g);
  MarkovReport report;
  report.property = which;
  for (const CiStatement& s : statements) {
    double dev = ci_max_deviation(p, s.x, s.y, s.z);
    if (dev > tol) report.violations.push_back({s, dev});
  }
  report.holds = report.violations.empty();
  return report;
}

void require_positive(const DiscreteDistribution& p) {
  if (!p.strictly_positive())
    throw Error(Errc::non_positive_distribution, "this check needs a strictly positive table");
}

}  // namespace

MarkovReport satisfies_global(const DiscreteDistribution& p, const Udag& g, double tol) {
  return run_checks(p, g, MarkovProperty::global, global_statements(g), tol);
}

MarkovReport satisfies_local(const DiscreteDistribution& p, const Udag& g, double tol) {
  require_positive(p);
  return run_checks(p, g, MarkovProperty::local, local_statements(g), tol);
}

MarkovReport satisfies_pairwise(const DiscreteDistribution& p, const Udag& g, double tol) {
  require_positive(p);
  return run_checks(p, g, MarkovProperty::pairwise, pairwise_statements(g), tol);
}

std::vector<NodeSet> maximal_ancestral_sets_for_node(const Udag& g, NodeId a) {
  // Growth under an extension needs a child of a that w does not already
  // hold, so only descendants of the absent children block maximality.
  std::vector<NodeSet> out;
  for (NodeSet w : g.ancestral_sets()) {
    if (!w.contains(a)) continue;
    if (g.nodes() - w == g.descendants(g.children_of(a) - w)) out.push_back(w);
  }
  return out;
}

std::vector<NodeSet> maximal_ancestral_sets_for_node_by_definition(const Udag& g, NodeId a) {
  auto sets = g.ancestral_sets();
  std::vector<NodeSet> out;
  for (NodeSet w : sets) {
    if (!w.contains(a)) continue;
    NodeSet ne_w = moral_graph(g.induced(w)).adjacent(a);
    bool maximal = true;
    for (NodeSet bigger : sets) {
      if (!w.proper_subset_of(bigger)) continue;
      NodeSet ne_b = moral_graph(g.induced(bigger)).adjacent(a);
      if (!ne_w.proper_subset_of(ne_b)) { maximal = false; break; }
    }
    if (maximal) out.push_back(w);
  }
  return out;
}

std::vector<NodeSet> maximal_ancestral_sets_fact(const Udag& g) {
  std::vector<NodeSet> out;
  for (NodeSet w : g.ancestral_sets()) {
    Ug moral = moral_graph(g.induced(w));
    bool maximal = true;
    for (NodeId u : g.nodes() - w) {
      NodeSet added = (g.ancestors(NodeSet::of({u}))) - w;
      if (moral.complete(g.parents(added) & w)) { maximal = false; break; }
    }
    if (maximal) out.push_back(w);
  }
  return out;
}

std::vector<NodeSet> maximal_ancestral_sets_fact_by_definition(const Udag& g) {
  auto sets = g.ancestral_sets();
  std::vector<NodeSet> out;
  for (NodeSet w : sets) {
    Ug moral_w = moral_graph(g.induced(w));
    bool maximal = true;
    for (NodeSet bigger : sets) {
      if (!w.proper_subset_of(bigger)) continue;
      Ug projected = marginal_ug(moral_graph(g.induced(bigger)), w);
      if (!moral_w.proper_subgraph_of(projected)) { maximal = false; break; }
    }
    if (maximal) out.push_back(w);
  }
  return out;
}

namespace {

/// Factorization over an undirected graph, checked through the pairwise
/// Markov property of the marginal (equivalent for strictly positive tables).
bool marginal_respects_ug(const DiscreteDistribution& p, const Ug& h, double tol,
                          CiStatement* witness) {
  DiscreteDistribution marg = p.marginalize(h.nodes());
  // Positions of graph nodes within the marginal.
  std::vector<int> slot(static_cast<std::size_t>(h.size()), -1);
  int s = 0;
  for (NodeId v : h.nodes()) slot[static_cast<std::size_t>(v)] = s++;

  auto ids = h.nodes().members();
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (h.has_edge(ids[i], ids[j])) continue;
      NodeSet x = NodeSet::of({slot[static_cast<std::size_t>(ids[i])]});
      NodeSet y = NodeSet::of({slot[static_cast<std::size_t>(ids[j])]});
      NodeSet z;
      for (NodeId v : ids)
        if (v != ids[i] && v != ids[j]) z.insert(slot[static_cast<std::size_t>(v)]);
      if (ci_max_deviation(marg, x, y, z) > tol) {
        if (witness) *witness = {NodeSet::of({ids[i]}), NodeSet::of({ids[j]}),
                                 h.nodes() - NodeSet::of({ids[i], ids[j]})};
        return false;
      }
    }
  return true;
}

}  // namespace

namespace {

std::string format_node_set(const Udag& g, NodeSet w) {
  std::string out;
  for (NodeId v : w) {
    if (!out.empty()) out += ",";
    out += g.name(v);
  }
  return out;
}

}  // namespace

FactorizationReport factorizes_ancestral_marginals(const DiscreteDistribution& p, const Udag& g,
                                                   double tol, bool maximal_only) {
  check_variables(p, g);
  require_positive(p);
  FactorizationReport report;
  auto sets = maximal_only ? maximal_ancestral_sets_fact(g) : g.ancestral_sets();
  for (NodeSet w : sets) {
    if (w.count() < 2) continue;
    CiStatement witness;
    if (!marginal_respects_ug(p, moral_graph(g.induced(w)), tol, &witness)) {
      report.failures.push_back("marginal over {" + format_node_set(g, w) + "}: fails " +
                                format_statement(g, witness));
    }
  }
  report.holds = report.failures.empty();
  return report;
}

FactorizationReport factorizes_component_chain(const DiscreteDistribution& p, const Udag& g,
                                               double tol) {
  check_variables(p, g);
  require_positive(p);
  FactorizationReport report;
  Decomposition dec = decompose(g);

  // Pointwise chain equality p(v) = prod_i p(C_i | bd(C_i)).
  std::vector<DiscreteDistribution> scope_marginals;
  std::vector<DiscreteDistribution> bd_marginals;
  for (int i = 0; i < dec.count(); ++i) {
    NodeSet scope = dec.components[static_cast<std::size_t>(i)] | dec.boundaries[static_cast<std::size_t>(i)];
    scope_marginals.push_back(p.marginalize(scope));
    bd_marginals.push_back(p.marginalize(dec.boundaries[static_cast<std::size_t>(i)]));
  }
  double worst = 0.0;
  for (std::size_t flat = 0; flat < p.table_size(); ++flat) {
    auto config = p.config_of(flat);
    double chain = 1.0;
    for (int i = 0; i < dec.count(); ++i) {
      NodeSet scope = dec.components[static_cast<std::size_t>(i)] | dec.boundaries[static_cast<std::size_t>(i)];
      std::vector<int> sub;
      for (NodeId v : scope) sub.push_back(config[static_cast<std::size_t>(v)]);
      std::vector<int> bd_sub;
      for (NodeId v : dec.boundaries[static_cast<std::size_t>(i)]) bd_sub.push_back(config[static_cast<std::size_t>(v)]);
      chain *= scope_marginals[static_cast<std::size_t>(i)].prob(sub) /
               bd_marginals[static_cast<std::size_t>(i)].prob(bd_sub);
    }
    worst = std::max(worst, std::abs(chain - p.table()[flat]));
  }
  if (worst > tol)
    report.failures.push_back("chain product deviates from p by " + std::to_string(worst));

  // Each component marginal must factorize over its star graph.
  for (int i = 0; i < dec.count(); ++i) {
    CiStatement witness;
    if (!marginal_respects_ug(p, dec.star_graphs[static_cast<std::size_t>(i)], tol, &witness))
      report.failures.push_back("component " + std::to_string(i + 1) + " star graph: fails " +
                                format_statement(g, witness));
  }
  report.holds = report.failures.empty();
  return report;
}

std::vector<CausalIdentityEntry> causal_update_deviations(const DiscreteDistribution& p,
                                                          const Udag& g) {
  check_variables(p, g);
  require_positive(p);
  Decomposition dec = decompose(g);
  std::vector<CausalIdentityEntry> out;

  for (int i = 0; i < dec.count(); ++i) {
    NodeSet comp = dec.components[static_cast<std::size_t>(i)];
    NodeSet bd = dec.boundaries[static_cast<std::size_t>(i)];
    for (NodeId a : comp) {
      NodeSet full_cond = (comp | bd) - NodeSet::of({a});
      NodeSet causes = (bd | (g.parents_of(a) & comp) | g.neighbors_of(a)) - NodeSet::of({a});

      DiscreteDistribution wide = p.marginalize(comp | bd);
      DiscreteDistribution narrow = p.marginalize(causes | NodeSet::of({a}));

      std::vector<int> wide_slot(static_cast<std::size_t>(g.size()), -1);
      int s = 0;
      for (NodeId v : comp | bd) wide_slot[static_cast<std::size_t>(v)] = s++;
      std::vector<int> narrow_slot(static_cast<std::size_t>(g.size()), -1);
      s = 0;
      for (NodeId v : causes | NodeSet::of({a})) narrow_slot[static_cast<std::size_t>(v)] = s++;

      int card = p.variable(a).card;
      double worst = 0.0;
      // Enumerate configurations of the wide conditioning set.
      std::vector<NodeId> cond_ids = full_cond.members();
      std::vector<int> assign(cond_ids.size(), 0);
      bool done = cond_ids.empty();
      for (;;) {
        double wide_mass = 0.0, narrow_mass = 0.0;
        std::vector<double> wide_p(static_cast<std::size_t>(card)), narrow_p(static_cast<std::size_t>(card));
        for (int val = 0; val < card; ++val) {
          std::vector<int> wcfg(static_cast<std::size_t>(wide.var_count()));
          for (std::size_t k = 0; k < cond_ids.size(); ++k)
            wcfg[static_cast<std::size_t>(wide_slot[static_cast<std::size_t>(cond_ids[k])])] = assign[k];
          wcfg[static_cast<std::size_t>(wide_slot[static_cast<std::size_t>(a)])] = val;
          wide_p[static_cast<std::size_t>(val)] = wide.prob(wcfg);
          wide_mass += wide_p[static_cast<std::size_t>(val)];

          std::vector<int> ncfg(static_cast<std::size_t>(narrow.var_count()));
          for (std::size_t k = 0; k < cond_ids.size(); ++k)
            if (causes.contains(cond_ids[k]))
              ncfg[static_cast<std::size_t>(narrow_slot[static_cast<std::size_t>(cond_ids[k])])] = assign[k];
          ncfg[static_cast<std::size_t>(narrow_slot[static_cast<std::size_t>(a)])] = val;
          narrow_p[static_cast<std::size_t>(val)] = narrow.prob(ncfg);
          narrow_mass += narrow_p[static_cast<std::size_t>(val)];
        }
        for (int val = 0; val < card; ++val)
          worst = std::max(worst, std::abs(wide_p[static_cast<std::size_t>(val)] / wide_mass -
                                           narrow_p[static_cast<std::size_t>(val)] / narrow_mass));
        if (done) break;
        std::size_t k = cond_ids.size();
        for (; k-- > 0;) {
          if (++assign[k] < p.variable(cond_ids[k]).card) break;
          assign[k] = 0;
        }
        if (k == static_cast<std::size_t>(-1)) break;
      }
      out.push_back({i, a, worst});
    }
  }
  return out;
}

}  // namespace udag
