#include <random>

#include "eldec/theories.hpp"

namespace eldec {

namespace {

Signature sig_succ0_diagram() {
  return Signature({{"S", 2}, {"Zero", 1}});
}
Signature sig_succ0_surface() {
  return Signature({{"S", 2}, {"Zero", 1}}, {{"S", 1}, {"zero", 0}});
}
Signature sig_succ_diagram() { return Signature({{"S", 2}}); }
Signature sig_succ_surface() { return Signature({{"S", 2}}, {{"S", 1}}); }
Signature sig_dlo_diagram() {
  return Signature({{"<", 2}, {"IsLo", 1}, {"IsHi", 1}});
}
Signature sig_dlo_surface() {
  return Signature({{"<", 2}, {"IsLo", 1}, {"IsHi", 1}},
                   {{"lo", 0}, {"hi", 0}});
}
Signature sig_adj_diagram() { return Signature({{"<", 2}, {"Adj", 2}}); }
// Lh ("left half") is the helper predicate the eliminator may introduce;
// it is definable by a universal formula and never queried of diagrams.
Signature sig_adj_surface() {
  return Signature({{"<", 2}, {"Adj", 2}, {"Lh", 1}});
}

std::string fresh_var_base(const std::vector<FormulaPtr>& fs) {
  std::set<std::string> used;
  for (const auto& f : fs) {
    auto names = all_var_names(f);
    used.insert(names.begin(), names.end());
  }
  std::string base = "y";
  while (true) {
    bool clash = false;
    for (const auto& u : used)
      if (u.rfind(base, 0) == 0) { clash = true; break; }
    if (!clash) return base;
    base = "_" + base;
  }
}

QEPair pair_succ(const FormulaPtr& phi) {
  return {qe_succ_full(phi), qe_succ_full(mk_not(phi)), {}};
}

QEPair pair_dlo(const FormulaPtr& phi) {
  return {qe_dlo_full(phi), qe_dlo_full(mk_not(phi)), {}};
}

// Expand the Lh helper back into universal adjacency statements:
// Lh(t) iff forall y. ~Adj(y,t) is false ... precisely: Lh(t) holds iff t
// has a partner above, i.e. ~forall y ~Adj(t,y). In NNF we replace
//   Lh(t)   by  forall y. ~Adj(y,t)   -- t is not anyone's right partner
//   ~Lh(t)  by  forall y. ~Adj(t,y)   -- t is not anyone's left partner
// using that every element is exactly one half of exactly one pair.
FormulaPtr expand_lh(const FormulaPtr& f, const std::string& base,
                     unsigned& counter) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Eq:
      return f;
    case Formula::Kind::Atom:
      if (f->sym == "Lh") {
        std::string y = base + std::to_string(counter++);
        return mk_forall(y, mk_not(mk_atom("Adj", {Term::var(y), f->terms[0]})));
      }
      return f;
    case Formula::Kind::Not:
      if (f->lhs->kind == Formula::Kind::Atom && f->lhs->sym == "Lh") {
        std::string y = base + std::to_string(counter++);
        return mk_forall(
            y, mk_not(mk_atom("Adj", {f->lhs->terms[0], Term::var(y)})));
      }
      return f;
    case Formula::Kind::And:
      return mk_and(expand_lh(f->lhs, base, counter),
                    expand_lh(f->rhs, base, counter));
    case Formula::Kind::Or:
      return mk_or(expand_lh(f->lhs, base, counter),
                   expand_lh(f->rhs, base, counter));
    default:
      throw FormulaError("expand_lh expects quantifier-free NNF input");
  }
}

// One half of the adjacency pair: eliminate, expand Lh into universal
// statements, pull to prenex (all-universal), return prefix size + matrix
// with prefix variables renamed to base0..base(k-1).
std::pair<size_t, FormulaPtr> adj_universal_half(const FormulaPtr& phi,
                                                 const std::string& base) {
  unsigned counter = 0;
  FormulaPtr qf = nnf(qe_adj_full(phi));
  FormulaPtr expanded = to_prenex(expand_lh(qf, base + "_t", counter));
  auto [prefix, matrix] = split_prenex(expanded);
  std::vector<std::pair<std::string, Term>> ren;
  for (size_t i = 0; i < prefix.size(); ++i) {
    if (!prefix[i].universal)
      throw FormulaError("adjacency pair: unexpected existential prefix");
    ren.emplace_back(prefix[i].var, Term::var(base + std::to_string(i)));
  }
  return {prefix.size(), substitute(matrix, ren)};
}

QEPair pair_adj(const FormulaPtr& phi) {
  std::string base = fresh_var_base({phi});
  auto [ma, alpha] = adj_universal_half(phi, base);
  auto [mb, beta] = adj_universal_half(mk_not(phi), base);
  size_t m = std::max(ma, mb);
  std::vector<std::string> yvars;
  for (size_t i = 0; i < m; ++i) yvars.push_back(base + std::to_string(i));
  return {alpha, beta, yvars};
}

std::vector<TheoryDescriptor> build_registry() {
  std::vector<TheoryDescriptor> out;

  TheoryDescriptor succ0;
  succ0.id = "succ0";
  succ0.diagram_sig = sig_succ0_diagram();
  succ0.surface_sig = sig_succ0_surface();
  succ0.model_complete = true;
  succ0.canonical_spec = "succ0";
  succ0.docs = "naturals with successor and a zero mark; model complete "
               "with full quantifier elimination over successor terms";
  succ0.const_relations = {{"zero", "Zero"}};
  succ0.full_qe = &qe_succ_full;
  succ0.qe_pair = &pair_succ;
  out.push_back(std::move(succ0));

  TheoryDescriptor succ;
  succ.id = "succ";
  succ.diagram_sig = sig_succ_diagram();
  succ.surface_sig = sig_succ_surface();
  succ.model_complete = false;
  succ.canonical_spec = "succ";
  succ.docs = "naturals with successor only; not model complete (the shifted "
              "copies embed each other non-elementarily), so no universal "
              "pair transformer is available";
  out.push_back(std::move(succ));

  TheoryDescriptor dlo;
  dlo.id = "dlo++";
  dlo.diagram_sig = sig_dlo_diagram();
  dlo.surface_sig = sig_dlo_surface();
  dlo.model_complete = true;
  dlo.canonical_spec = "dlo01";
  dlo.docs = "dense linear order with named least and greatest elements; "
             "full quantifier elimination by bound comparison";
  dlo.const_relations = {{"lo", "IsLo"}, {"hi", "IsHi"}};
  dlo.full_qe = &qe_dlo_full;
  dlo.qe_pair = &pair_dlo;
  out.push_back(std::move(dlo));

  TheoryDescriptor adj;
  adj.id = "adj";
  adj.diagram_sig = sig_adj_diagram();
  adj.surface_sig = sig_adj_surface();
  adj.model_complete = true;
  adj.canonical_spec = "shuffle+adj";
  adj.docs = "doubled dense order with the pairing relation Adj; elimination "
             "lands in the left-half extension, re-expanded to universal "
             "matrices (model completeness validated by the test suite)";
  adj.full_qe = &qe_adj_full;
  adj.qe_pair = &pair_adj;
  out.push_back(std::move(adj));

  return out;
}

}  // namespace

const std::vector<TheoryDescriptor>& registry() {
  static const std::vector<TheoryDescriptor> reg = build_registry();
  return reg;
}

const TheoryDescriptor& theory(const std::string& id) {
  for (const auto& t : registry())
    if (t.id == id) return t;
  throw FormulaError("unknown theory: " + id);
}

QEPair qe_universal_pair(const TheoryDescriptor& t, const FormulaPtr& phi) {
  if (!t.qe_pair)
    throw FormulaError("theory " + t.id +
                       " is not model complete: no universal pair transform");
  return t.qe_pair(phi);
}

namespace {

QEReport check_pair(const TheoryDescriptor& t, const FormulaPtr& phi,
                    const QEPair& pair, uint64_t samples, uint64_t seed) {
  Presentation canon = make_builtin(t.canonical_spec);
  std::set<std::string> fv = free_vars(phi);
  std::vector<std::string> xs(fv.begin(), fv.end());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint64_t> pick(0, 12);

  FormulaPtr alpha_cl = pair.alpha;
  FormulaPtr beta_cl = pair.beta;
  for (auto it = pair.yvars.rbegin(); it != pair.yvars.rend(); ++it) {
    alpha_cl = mk_forall(*it, alpha_cl);
    beta_cl = mk_forall(*it, beta_cl);
  }

  QEReport rep;
  uint64_t rounds = xs.empty() ? 1 : samples;
  for (uint64_t s = 0; s < rounds; ++s) {
    std::vector<std::pair<std::string, Term>> asg;
    std::string desc;
    for (const auto& x : xs) {
      uint64_t i = pick(rng);
      asg.emplace_back(x, Term::dom_const(i));
      desc += x + "=#" + std::to_string(i) + " ";
    }
    bool tphi = classical_truth(canon, substitute(phi, asg));
    bool talpha = classical_truth(canon, substitute(alpha_cl, asg));
    bool tbeta = classical_truth(canon, substitute(beta_cl, asg));
    ++rep.samples;
    if (tphi != talpha || tphi == tbeta) {
      ++rep.mismatches;
      if (rep.details.size() < 10)
        rep.details.push_back(desc + "phi=" + (tphi ? "1" : "0") +
                              " alpha=" + (talpha ? "1" : "0") +
                              " beta=" + (tbeta ? "1" : "0"));
    }
  }
  return rep;
}

}  // namespace

QEReport verify_qe(const TheoryDescriptor& t, const FormulaPtr& phi,
                   uint64_t samples, uint64_t seed) {
  return check_pair(t, phi, qe_universal_pair(t, phi), samples, seed);
}

QEReport verify_qe_pair(const TheoryDescriptor& t, const FormulaPtr& phi,
                        const QEPair& pair, uint64_t samples, uint64_t seed) {
  return check_pair(t, phi, pair, samples, seed);
}

}  // namespace eldec
