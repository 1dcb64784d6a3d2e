#include "setprop/constraints.hpp"

#include <algorithm>
#include <cassert>

namespace setprop {

namespace {

struct KindInfo {
	ConstraintKind kind;
	const char* name;
	std::uint32_t arity;  // 0 = variable (PartitionLex)
};

constexpr KindInfo kind_table[] = {
		{ConstraintKind::Member, "member", 1},
		{ConstraintKind::Eq, "eq", 2},
		{ConstraintKind::Subset, "subset", 2},
		{ConstraintKind::Union, "union", 3},
		{ConstraintKind::Inter, "inter", 3},
		{ConstraintKind::CardEq, "card_eq", 1},
		{ConstraintKind::CardLe, "card_le", 1},
		{ConstraintKind::LexLt, "lex_lt", 2},
		{ConstraintKind::LexLe, "lex_le", 2},
		{ConstraintKind::InterCardLe, "inter_card_le", 2},
		{ConstraintKind::SymdiffCardGe, "symdiff_card_ge", 2},
		{ConstraintKind::PartitionLex, "partition_lex", 0},
};

const KindInfo& info(ConstraintKind kind) {
	for (const auto& ki : kind_table)
		if (ki.kind == kind) return ki;
	throw BuildError("unknown constraint kind");
}

}  // namespace

const char* kind_name(ConstraintKind kind) { return info(kind).name; }

std::optional<ConstraintKind> kind_from_name(std::string_view name) {
	for (const auto& ki : kind_table)
		if (name == ki.name) return ki.kind;
	return std::nullopt;
}

std::uint32_t ConstraintSpec::arity() const {
	if (kind == ConstraintKind::PartitionLex) return static_cast<std::uint32_t>(blocks);
	return info(kind).arity;
}

void ConstraintSpec::validate(std::uint32_t universe) const {
	int n = static_cast<int>(universe);
	switch (kind) {
	case ConstraintKind::Member:
		if (param < 1 || param > n) throw BuildError("member: element out of 1..N");
		break;
	case ConstraintKind::CardEq:
	case ConstraintKind::CardLe:
	case ConstraintKind::InterCardLe:
		if (param < 0 || param > n) throw BuildError("cardinality bound out of 0..N");
		break;
	case ConstraintKind::SymdiffCardGe:
		if (param < 0 || param > 2 * n) throw BuildError("distance bound out of 0..2N");
		break;
	case ConstraintKind::PartitionLex:
		if (blocks < 1) throw BuildError("partition_lex needs at least one block");
		break;
	default:
		break;
	}
}

std::string ConstraintSpec::key() const {
	std::string k = info(kind).name;
	k += ':';
	k += std::to_string(param);
	if (kind == ConstraintKind::PartitionLex) {
		k += ':';
		k += std::to_string(blocks);
	}
	return k;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> pointwise_order(std::uint32_t arity,
																	 std::uint32_t universe) {
	std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
	order.reserve(std::size_t(arity) * universe);
	for (std::uint32_t i = 1; i <= universe; ++i)
		for (std::uint32_t j = 0; j < arity; ++j) order.emplace_back(j, i);
	return order;
}

NodeRef encode_valuation(BddBuilder& builder, const std::vector<std::vector<int>>& theta,
						 std::uint32_t universe) {
	std::uint32_t arity = static_cast<std::uint32_t>(theta.size());
	std::vector<std::vector<bool>> in(arity, std::vector<bool>(universe + 1, false));
	for (std::uint32_t j = 0; j < arity; ++j)
		for (int e : theta[j]) {
			if (e < 1 || e > static_cast<int>(universe))
				throw BuildError("encode_valuation: element out of 1..N");
			in[j][e] = true;
		}
	NodeRef acc = bdd_true;
	for (std::uint32_t i = universe; i >= 1; --i) {
		for (std::uint32_t j = arity; j-- > 0;) {
			BoolVarIndex r = pointwise_rank(arity, i, j);
			acc = in[j][i] ? builder.mk(r, bdd_false, acc) : builder.mk(r, acc, bdd_false);
		}
		if (i == 1) break;
	}
	return acc;
}

namespace {

using Ranks = std::vector<BoolVarIndex>;

Ranks block_ranks(std::uint32_t group_arity, std::uint32_t formal, std::uint32_t universe) {
	Ranks r(universe);
	for (std::uint32_t i = 1; i <= universe; ++i) r[i - 1] = pointwise_rank(group_arity, i, formal);
	return r;
}

NodeRef build_eq(BddBuilder& b, const Ranks& u, const Ranks& v) {
	NodeRef acc = bdd_true;
	for (std::size_t i = u.size(); i-- > 0;) {
		NodeRef iff = b.apply_or(b.apply_and(b.literal(u[i], true), b.literal(v[i], true)),
								 b.apply_and(b.literal(u[i], false), b.literal(v[i], false)));
		acc = b.apply_and(iff, acc);
	}
	return acc;
}

NodeRef build_subset(BddBuilder& b, const Ranks& u, const Ranks& w) {
	NodeRef acc = bdd_true;
	for (std::size_t i = u.size(); i-- > 0;)
		acc = b.apply_and(b.apply_or(b.literal(u[i], false), b.literal(w[i], true)), acc);
	return acc;
}

NodeRef build_union(BddBuilder& b, const Ranks& u, const Ranks& v, const Ranks& w) {
	NodeRef acc = bdd_true;
	for (std::size_t i = u.size(); i-- > 0;) {
		NodeRef vw = b.apply_or(b.literal(v[i], true), b.literal(w[i], true));
		NodeRef iff = b.apply_or(b.apply_and(b.literal(u[i], true), vw),
								 b.apply_and(b.literal(u[i], false), b.negate(vw)));
		acc = b.apply_and(iff, acc);
	}
	return acc;
}

NodeRef build_inter(BddBuilder& b, const Ranks& u, const Ranks& v, const Ranks& w) {
	NodeRef acc = bdd_true;
	for (std::size_t i = u.size(); i-- > 0;) {
		NodeRef vw = b.apply_and(b.literal(v[i], true), b.literal(w[i], true));
		NodeRef iff = b.apply_or(b.apply_and(b.literal(u[i], true), vw),
								 b.apply_and(b.literal(u[i], false), b.negate(vw)));
		acc = b.apply_and(iff, acc);
	}
	return acc;
}

// lo ≤ |v| ≤ hi, built bottom-up with counts capped at hi + 1.
NodeRef build_card(BddBuilder& b, const Ranks& v, int lo, int hi) {
	int n = static_cast<int>(v.size());
	if (hi < 0 || lo > n) return bdd_false;
	int cap = hi + 1;
	std::vector<std::vector<NodeRef>> memo(n + 1, std::vector<NodeRef>(cap + 1, NodeRef{0}));
	std::vector<std::vector<bool>> done(n + 1, std::vector<bool>(cap + 1, false));
	auto rec = [&](auto&& self, int i, int c) -> NodeRef {
		if (c > hi) return bdd_false;
		if (i == n) return c >= lo ? bdd_true : bdd_false;
		if (done[i][c]) return memo[i][c];
		NodeRef f = self(self, i + 1, c);
		NodeRef t = self(self, i + 1, std::min(c + 1, cap));
		NodeRef r = b.mk(v[i], f, t);
		memo[i][c] = r;
		done[i][c] = true;
		return r;
	};
	return rec(rec, 0, 0);
}

// u < v (or ≤): first differing element decides, the set containing it
// is smaller. Requires interleaved ranks u[i] < v[i] < u[i+1].
NodeRef build_lex(BddBuilder& b, const Ranks& u, const Ranks& v, bool strict) {
	int n = static_cast<int>(u.size());
	NodeRef acc = strict ? bdd_false : bdd_true;
	for (int i = n - 1; i >= 0; --i) {
		NodeRef f = b.mk(v[i], acc, bdd_false);  // u_i = 0: v_i = 1 makes v smaller
		NodeRef t = b.mk(v[i], bdd_true, acc);   // u_i = 1: v_i = 0 makes u smaller
		acc = b.mk(u[i], f, t);
	}
	return acc;
}

NodeRef build_inter_card_le(BddBuilder& b, const Ranks& u, const Ranks& v, int k) {
	int n = static_cast<int>(u.size());
	int cap = k + 1;
	std::vector<std::vector<NodeRef>> memo(n + 1, std::vector<NodeRef>(cap + 1, NodeRef{0}));
	std::vector<std::vector<bool>> done(n + 1, std::vector<bool>(cap + 1, false));
	auto rec = [&](auto&& self, int i, int c) -> NodeRef {
		if (c > k) return bdd_false;
		if (i == n) return bdd_true;
		if (done[i][c]) return memo[i][c];
		NodeRef rest = self(self, i + 1, c);
		NodeRef both = self(self, i + 1, std::min(c + 1, cap));
		NodeRef t = b.mk(v[i], rest, both);
		NodeRef r = b.mk(u[i], rest, t);
		memo[i][c] = r;
		done[i][c] = true;
		return r;
	};
	return rec(rec, 0, 0);
}

NodeRef build_symdiff_card_ge(BddBuilder& b, const Ranks& u, const Ranks& v, int d) {
	int n = static_cast<int>(u.size());
	std::vector<std::vector<NodeRef>> memo(n + 1, std::vector<NodeRef>(d + 1, NodeRef{0}));
	std::vector<std::vector<bool>> done(n + 1, std::vector<bool>(d + 1, false));
	auto rec = [&](auto&& self, int i, int c) -> NodeRef {
		if (c >= d) return bdd_true;
		if (i == n) return bdd_false;
		if (done[i][c]) return memo[i][c];
		NodeRef same = self(self, i + 1, c);
		NodeRef diff = self(self, i + 1, c + 1);
		NodeRef f = b.mk(v[i], same, diff);
		NodeRef t = b.mk(v[i], diff, same);
		NodeRef r = b.mk(u[i], f, t);
		memo[i][c] = r;
		done[i][c] = true;
		return r;
	};
	return rec(rec, 0, 0);
}

// At most one of the element's block variables is set.
NodeRef build_at_most_one(BddBuilder& b, const Ranks& ranks, NodeRef rest) {
	NodeRef none = rest;  // no block holds the element yet
	NodeRef one = rest;   // one block already holds it
	for (std::size_t j = ranks.size(); j-- > 0;) {
		NodeRef new_one = b.mk(ranks[j], one, bdd_false);
		NodeRef new_none = b.mk(ranks[j], none, one);
		one = new_one;
		none = new_none;
	}
	return none;
}

NodeRef build_partition_lex(BddBuilder& b, std::uint32_t g, std::uint32_t universe) {
	NodeRef disjoint = bdd_true;
	for (std::uint32_t i = universe; i >= 1; --i) {
		Ranks at_elem(g);
		for (std::uint32_t j = 0; j < g; ++j) at_elem[j] = pointwise_rank(g, i, j);
		disjoint = build_at_most_one(b, at_elem, disjoint);
		if (i == 1) break;
	}
	NodeRef acc = disjoint;
	for (std::uint32_t j = 0; j + 1 < g; ++j)
		acc = b.apply_and(acc, build_lex(b, block_ranks(g, j, universe),
										 block_ranks(g, j + 1, universe), true));
	return acc;
}

NodeRef build_part(BddBuilder& b, const ConstraintPart& part, std::uint32_t group_arity,
				   std::uint32_t universe) {
	const ConstraintSpec& spec = part.spec;
	spec.validate(universe);
	if (part.formals.size() != spec.arity())
		throw BuildError("constraint part arity mismatch");
	for (std::size_t i = 0; i + 1 < part.formals.size(); ++i)
		if (part.formals[i] >= part.formals[i + 1])
			throw BuildError("constraint part formals must be strictly ascending");
	for (std::uint32_t f : part.formals)
		if (f >= group_arity) throw BuildError("constraint part formal out of range");

	auto ranks = [&](std::uint32_t slot) {
		return block_ranks(group_arity, part.formals[slot], universe);
	};
	switch (spec.kind) {
	case ConstraintKind::Member:
		return b.literal(pointwise_rank(group_arity, spec.param, part.formals[0]), true);
	case ConstraintKind::Eq:
		return build_eq(b, ranks(0), ranks(1));
	case ConstraintKind::Subset:
		return build_subset(b, ranks(0), ranks(1));
	case ConstraintKind::Union:
		return build_union(b, ranks(0), ranks(1), ranks(2));
	case ConstraintKind::Inter:
		return build_inter(b, ranks(0), ranks(1), ranks(2));
	case ConstraintKind::CardEq:
		return build_card(b, ranks(0), spec.param, spec.param);
	case ConstraintKind::CardLe:
		return build_card(b, ranks(0), 0, spec.param);
	case ConstraintKind::LexLt:
		return build_lex(b, ranks(0), ranks(1), true);
	case ConstraintKind::LexLe:
		return build_lex(b, ranks(0), ranks(1), false);
	case ConstraintKind::InterCardLe:
		return build_inter_card_le(b, ranks(0), ranks(1), spec.param);
	case ConstraintKind::SymdiffCardGe:
		return build_symdiff_card_ge(b, ranks(0), ranks(1), spec.param);
	case ConstraintKind::PartitionLex:
		if (group_arity != spec.arity() || part.formals.front() != 0)
			throw BuildError("partition_lex must span the whole group");
		return build_partition_lex(b, group_arity, universe);
	}
	throw BuildError("unknown constraint kind");
}

std::string group_key(const std::vector<ConstraintPart>& parts, std::uint32_t group_arity,
					  std::uint32_t universe) {
	std::string k = "N" + std::to_string(universe) + ";a" + std::to_string(group_arity);
	for (const auto& p : parts) {
		k += ';';
		k += p.spec.key();
		k += '@';
		for (std::uint32_t f : p.formals) {
			k += std::to_string(f);
			k += ',';
		}
	}
	return k;
}

}  // namespace

void ConstraintTemplate::init_runtime() {
	formal_blocks.assign(arity, {});
	for (std::uint32_t j = 0; j < arity; ++j) {
		formal_blocks[j].resize(universe);
		for (std::uint32_t i = 1; i <= universe; ++i)
			formal_blocks[j][i - 1] = pointwise_rank(arity, i, j);
	}
	varset_pos.assign(num_ranks(), npos);
	for (std::uint32_t p = 0; p < graph.varset.size(); ++p) varset_pos[graph.varset[p]] = p;
	std::uint32_t nodes = graph.node_count() + 2;
	scratch.visit.assign(nodes, 0);
	scratch.save.assign(nodes, 0);
	scratch.matters_fix0.assign(num_ranks(), 0);
	scratch.matters_fix1.assign(num_ranks(), 0);
	scratch.e.assign(num_ranks(), dom_both);
	scratch.eprime.assign(num_ranks(), dom_none);
	scratch.time = 0;
}

std::shared_ptr<ConstraintTemplate> conjoin_templates(const std::vector<ConstraintPart>& parts,
													  std::uint32_t group_arity,
													  std::uint32_t universe) {
	if (parts.empty()) throw BuildError("conjoin_templates: empty group");
	BddBuilder builder;
	NodeRef acc = bdd_true;
	for (const auto& part : parts)
		acc = builder.apply_and(acc, build_part(builder, part, group_arity, universe));

	auto tmpl = std::make_shared<ConstraintTemplate>();
	tmpl->arity = group_arity;
	tmpl->universe = universe;
	tmpl->key = group_key(parts, group_arity, universe);
	if (acc.is_false()) {
		tmpl->is_false = true;
		tmpl->graph.var = {no_var, no_var};
		tmpl->graph.low = {0, 1};
		tmpl->graph.high = {0, 1};
		tmpl->graph.root = 1;
	} else {
		tmpl->graph = builder.freeze(acc);
	}
	tmpl->init_runtime();
	return tmpl;
}

std::shared_ptr<ConstraintTemplate> build_template(const ConstraintSpec& spec,
												   std::uint32_t universe) {
	std::vector<std::uint32_t> formals(spec.arity());
	for (std::uint32_t i = 0; i < formals.size(); ++i) formals[i] = i;
	return conjoin_templates({{spec, formals}}, spec.arity(), universe);
}

std::shared_ptr<ConstraintTemplate> TemplateStore::get(const std::vector<ConstraintPart>& parts,
													   std::uint32_t group_arity,
													   std::uint32_t universe) {
	std::string key = group_key(parts, group_arity, universe);
	auto it = cache_.find(key);
	if (it != cache_.end()) return it->second;
	auto tmpl = conjoin_templates(parts, group_arity, universe);
	cache_.emplace(std::move(key), tmpl);
	return tmpl;
}

std::shared_ptr<ConstraintTemplate> TemplateStore::get(const ConstraintSpec& spec,
													   std::uint32_t universe) {
	std::vector<std::uint32_t> formals(spec.arity());
	for (std::uint32_t i = 0; i < formals.size(); ++i) formals[i] = i;
	return get({{spec, formals}}, spec.arity(), universe);
}

}  // namespace setprop
