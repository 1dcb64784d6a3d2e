#include "setprop/explain.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>

namespace setprop {

namespace {

// Child literal in the local CNF numbering: +aux for internal nodes,
// +2/-2 sentinels for constant TRUE/FALSE resolved by emit().
constexpr std::int32_t const_true = INT32_MAX;
constexpr std::int32_t const_false = INT32_MIN;

std::int32_t child_lit(const CnfEncoding& cnf, std::uint32_t node) {
	if (node == 0) return const_false;
	if (node == 1) return const_true;
	return static_cast<std::int32_t>(cnf.aux_lit(node));
}

std::int32_t lit_neg(std::int32_t l) {
	if (l == const_true) return const_false;
	if (l == const_false) return const_true;
	return -l;
}

void emit(CnfEncoding& cnf, std::initializer_list<std::int32_t> lits) {
	cnf.raw_clause_count++;
	std::vector<std::int32_t> clause;
	for (std::int32_t l : lits) {
		if (l == const_true) return;  // satisfied, drop
		if (l == const_false) continue;
		clause.push_back(l);
	}
	assert(!clause.empty());
	cnf.clauses.push_back(std::move(clause));
}

}  // namespace

CnfEncoding bdd_to_cnf(const StaticGraph& g) {
	if (g.root == 0) throw BuildError("bdd_to_cnf: inherently unsatisfiable constraint");
	CnfEncoding cnf;
	cnf.num_inputs = g.varset.empty() ? 0 : g.varset.back() + 1;
	cnf.num_aux = g.node_count();
	if (g.trivial_true()) return cnf;

	// Node ids are topologically ordered, so one sweep visits children
	// before parents.
	for (std::uint32_t n = 2; n < g.var.size(); ++n) {
		std::int32_t v = static_cast<std::int32_t>(g.var[n] + 1);
		std::int32_t nn = static_cast<std::int32_t>(cnf.aux_lit(n));
		std::int32_t f = child_lit(cnf, g.low[n]);
		std::int32_t t = child_lit(cnf, g.high[n]);
		emit(cnf, {-v, lit_neg(t), nn});        // v ∧ t' → n'
		emit(cnf, {v, lit_neg(f), nn});         // ¬v ∧ f' → n'
		emit(cnf, {-v, t, -nn});                // v ∧ ¬t' → ¬n'
		emit(cnf, {v, f, -nn});                 // ¬v ∧ ¬f' → ¬n'
		emit(cnf, {lit_neg(t), lit_neg(f), nn}); // t' ∧ f' → n'
		emit(cnf, {t, f, -nn});                 // ¬t' ∧ ¬f' → ¬n'
	}
	cnf.root_lit = static_cast<std::int32_t>(cnf.aux_lit(g.root));
	return cnf;
}

void write_dimacs(std::ostream& os, std::uint32_t num_vars,
				  const std::vector<std::vector<std::int32_t>>& clauses) {
	os << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
	for (const auto& clause : clauses) {
		for (std::int32_t l : clause) os << l << ' ';
		os << "0\n";
	}
}

namespace {

// TRUE-reachability under dom, plus per-node flags for fixed variables
// whose disallowed edge still reaches TRUE: relaxing those would turn the
// conflict into a non-conflict.
struct ReasonPass {
	const StaticGraph& g;
	const std::vector<DomainBits>& dom;
	std::vector<std::uint8_t> visit;  // 0 unvisited, else reacht + 1
	std::vector<std::uint8_t> conflicting_edge_reaches_true;

	explicit ReasonPass(const StaticGraph& g, const std::vector<DomainBits>& dom)
			: g(g), dom(dom), visit(g.var.size(), 0),
			  conflicting_edge_reaches_true(g.var.size(), 0) {}

	bool mark(std::uint32_t n) {
		if (n == 0) return false;
		if (n == 1) return true;
		if (visit[n]) return visit[n] - 1;
		bool reach_low = mark(g.low[n]);
		bool reach_high = mark(g.high[n]);
		DomainBits d = dom[g.var[n]];
		bool reacht = false;
		if (d & dom_zero) reacht = reacht || reach_low;
		else conflicting_edge_reaches_true[n] = reach_low;
		if (d & dom_one) reacht = reacht || reach_high;
		else conflicting_edge_reaches_true[n] = reach_high;
		visit[n] = static_cast<std::uint8_t>(reacht + 1);
		return reacht;
	}
};

Explanation relax_pass(const StaticGraph& g, const std::vector<DomainBits>& dom,
					   BoolVarIndex flip_var) {
	Explanation out;
	ReasonPass pass(g, dom);
	if (pass.mark(g.root))
		throw BuildError("explanation requested but the graph is still satisfiable");

	const auto& vs = g.varset;
	std::vector<std::uint32_t> pos(vs.empty() ? 0 : vs.back() + 1, 0);
	for (std::uint32_t p = 0; p < vs.size(); ++p) pos[vs[p]] = p;

	std::vector<std::vector<std::uint32_t>> reached(vs.size());
	std::vector<std::uint8_t> queued(g.var.size(), 0);
	auto push = [&](std::uint32_t n) {
		if (n <= 1 || queued[n]) return;
		queued[n] = 1;
		reached[pos[g.var[n]]].push_back(n);
	};
	push(g.root);

	// Sweep variables in order; a variable stays in the reason iff some
	// reached node's disallowed edge would open a path to TRUE.
	for (std::uint32_t p = 0; p < vs.size(); ++p) {
		BoolVarIndex v = vs[p];
		DomainBits d = dom[v];
		bool keep_fixed = false;
		for (std::uint32_t n : reached[p])
			keep_fixed = keep_fixed || pass.conflicting_edge_reaches_true[n];
		if (keep_fixed && v != flip_var) out.antecedents.emplace_back(v, (d & dom_one) != 0);
		for (std::uint32_t n : reached[p]) {
			if (!keep_fixed || (d & dom_one)) push(g.high[n]);
			if (!keep_fixed || (d & dom_zero)) push(g.low[n]);
		}
	}
	return out;
}

}  // namespace

Explanation explain_inference(const StaticGraph& g, std::vector<DomainBits>& dom,
							  BoolVarIndex var, bool sign) {
	DomainBits old = dom[var];
	dom[var] = dom_of(!sign);
	Explanation out;
	try {
		out = relax_pass(g, dom, var);
	} catch (...) {
		dom[var] = old;
		throw;
	}
	dom[var] = old;
	return out;
}

Explanation explain_failure(const StaticGraph& g, std::vector<DomainBits>& dom) {
	return relax_pass(g, dom, no_var);
}

}  // namespace setprop
