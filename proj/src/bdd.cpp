#include "setprop/bdd.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

namespace setprop {

BddBuilder::BddBuilder(std::size_t node_limit) : limit_(node_limit) {
	nodes_.push_back({no_var, 0, 0});  // FALSE
	nodes_.push_back({no_var, 1, 1});  // TRUE
}

NodeRef BddBuilder::mk(BoolVarIndex v, NodeRef f, NodeRef t) {
	if (f == t) return f;
	if (!f.terminal() && var(f) <= v)
		throw BuildError("mk: variable order violated on false child");
	if (!t.terminal() && var(t) <= v)
		throw BuildError("mk: variable order violated on true child");
	NodeKey key{v, f.id, t.id};
	auto it = unique_.find(key);
	if (it != unique_.end()) return NodeRef{it->second};
	if (nodes_.size() >= limit_ + 2)
		throw ResourceError("BDD node arena exhausted (" + std::to_string(limit_) + " nodes)");
	std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
	nodes_.push_back({v, f.id, t.id});
	unique_.emplace(key, id);
	return NodeRef{id};
}

NodeRef BddBuilder::apply_and(NodeRef a, NodeRef b) { return apply(Op::And, a, b); }
NodeRef BddBuilder::apply_or(NodeRef a, NodeRef b) { return apply(Op::Or, a, b); }

NodeRef BddBuilder::apply(Op op, NodeRef a, NodeRef b) {
	if (a == b) return a;
	if (op == Op::And) {
		if (a.is_false() || b.is_false()) return bdd_false;
		if (a.is_true()) return b;
		if (b.is_true()) return a;
	} else {
		if (a.is_true() || b.is_true()) return bdd_true;
		if (a.is_false()) return b;
		if (b.is_false()) return a;
	}
	// Both operations are commutative; normalise the cache key.
	std::uint32_t x = std::min(a.id, b.id), y = std::max(a.id, b.id);
	std::uint64_t key = (std::uint64_t(x) << 32) | y;
	auto& cache = op == Op::And ? and_cache_ : or_cache_;
	auto it = cache.find(key);
	if (it != cache.end()) return NodeRef{it->second};

	BoolVarIndex v = std::min(var(a), var(b));
	NodeRef fa = var(a) == v ? low(a) : a;
	NodeRef ta = var(a) == v ? high(a) : a;
	NodeRef fb = var(b) == v ? low(b) : b;
	NodeRef tb = var(b) == v ? high(b) : b;
	NodeRef f = apply(op, fa, fb);
	NodeRef t = apply(op, ta, tb);
	NodeRef r = mk(v, f, t);
	cache.emplace(key, r.id);
	return r;
}

NodeRef BddBuilder::negate(NodeRef a) {
	if (a.is_false()) return bdd_true;
	if (a.is_true()) return bdd_false;
	auto it = not_cache_.find(a.id);
	if (it != not_cache_.end()) return NodeRef{it->second};
	NodeRef r = mk(var(a), negate(low(a)), negate(high(a)));
	not_cache_.emplace(a.id, r.id);
	return r;
}

NodeRef BddBuilder::exists(NodeRef a, const std::vector<BoolVarIndex>& vars) {
	if (vars.empty() || a.terminal()) return a;
	std::vector<BoolVarIndex> qs = vars;
	std::sort(qs.begin(), qs.end());
	std::unordered_map<std::uint32_t, std::uint32_t> memo;
	auto rec = [&](auto&& self, NodeRef n) -> NodeRef {
		if (n.terminal()) return n;
		auto it = memo.find(n.id);
		if (it != memo.end()) return NodeRef{it->second};
		NodeRef f = self(self, low(n));
		NodeRef t = self(self, high(n));
		NodeRef r = std::binary_search(qs.begin(), qs.end(), var(n)) ? apply_or(f, t)
																	 : mk(var(n), f, t);
		memo.emplace(n.id, r.id);
		return r;
	};
	return rec(rec, a);
}

std::vector<BoolVarIndex> BddBuilder::support(NodeRef a) const {
	std::vector<BoolVarIndex> out;
	if (a.terminal()) return out;
	std::unordered_set<std::uint32_t> seen;
	std::vector<std::uint32_t> stack{a.id};
	while (!stack.empty()) {
		std::uint32_t n = stack.back();
		stack.pop_back();
		if (n <= 1 || !seen.insert(n).second) continue;
		out.push_back(nodes_[n].var);
		stack.push_back(nodes_[n].low);
		stack.push_back(nodes_[n].high);
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

std::vector<std::pair<BoolVarIndex, bool>> BddBuilder::fixed_vars(NodeRef a) const {
	if (a.is_false()) throw BuildError("fixed_vars: BDD has no models");
	std::vector<std::pair<BoolVarIndex, bool>> out;
	if (a.is_true()) return out;

	std::vector<BoolVarIndex> vs = support(a);
	std::unordered_map<BoolVarIndex, std::uint32_t> pos;
	for (std::uint32_t i = 0; i < vs.size(); ++i) pos.emplace(vs[i], i);
	std::vector<std::uint8_t> supp(vs.size(), 0);  // bit0: value 0, bit1: value 1

	// Every internal node of a reduced BDD reaches TRUE through some
	// descendant, so an arc supports its value iff the child is not FALSE.
	// Arcs skipping variables support both values of the skipped range.
	std::unordered_set<std::uint32_t> seen;
	std::vector<std::uint32_t> stack{a.id};
	while (!stack.empty()) {
		std::uint32_t n = stack.back();
		stack.pop_back();
		if (n <= 1 || !seen.insert(n).second) continue;
		BoolVarIndex v = nodes_[n].var;
		std::uint32_t at_pos = pos.at(v);
		for (int side = 0; side < 2; ++side) {
			std::uint32_t child = side == 0 ? nodes_[n].low : nodes_[n].high;
			stack.push_back(child);
			if (child == 0) continue;
			supp[at_pos] |= side == 0 ? 1 : 2;
			std::uint32_t top = child == 1 ? 0xffffffffu : nodes_[child].var;
			for (std::uint32_t p = at_pos + 1; p < vs.size() && vs[p] < top; ++p) supp[p] = 3;
		}
	}
	for (std::uint32_t i = 0; i < vs.size(); ++i) {
		if (supp[i] == 1) out.emplace_back(vs[i], false);
		else if (supp[i] == 2) out.emplace_back(vs[i], true);
	}
	return out;
}

StaticGraph BddBuilder::freeze(NodeRef a) const {
	if (a.is_false()) throw BuildError("freeze: false constraint");
	StaticGraph g;
	g.var = {no_var, no_var};
	g.low = {0, 1};
	g.high = {0, 1};
	if (a.is_true()) {
		g.root = 1;
		return g;
	}
	// Iterative post-order so children get smaller ids than parents.
	std::unordered_map<std::uint32_t, std::uint32_t> remap;
	remap.emplace(0, 0);
	remap.emplace(1, 1);
	std::vector<std::pair<std::uint32_t, bool>> stack{{a.id, false}};
	while (!stack.empty()) {
		auto [n, expanded] = stack.back();
		stack.pop_back();
		if (remap.count(n)) continue;
		if (!expanded) {
			stack.push_back({n, true});
			stack.push_back({nodes_[n].high, false});
			stack.push_back({nodes_[n].low, false});
		} else {
			std::uint32_t id = static_cast<std::uint32_t>(g.var.size());
			g.var.push_back(nodes_[n].var);
			g.low.push_back(remap.at(nodes_[n].low));
			g.high.push_back(remap.at(nodes_[n].high));
			remap.emplace(n, id);
		}
	}
	g.root = remap.at(a.id);
	g.varset = support(a);
	return g;
}

void StaticGraph::dump(std::ostream& os) const {
	for (std::uint32_t id = 2; id < var.size(); ++id)
		os << "node " << id << " var=" << var[id] << " f=" << low[id] << " t=" << high[id]
		   << '\n';
}

}  // namespace setprop
