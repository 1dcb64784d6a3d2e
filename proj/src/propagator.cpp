#include "setprop/propagator.hpp"

#include <cassert>

namespace setprop {

PropagatorInstance instantiate(std::shared_ptr<ConstraintTemplate> tmpl,
							   const std::vector<std::vector<std::uint32_t>>& actual_blocks,
							   SparseVariant variant) {
	if (actual_blocks.size() != tmpl->arity)
		throw BuildError("instantiate: expected " + std::to_string(tmpl->arity) +
						 " actual variables, got " + std::to_string(actual_blocks.size()));
	for (const auto& block : actual_blocks)
		if (block.size() != tmpl->universe)
			throw BuildError("instantiate: actual variable universe mismatch");

	PropagatorInstance inst;
	inst.actual.assign(tmpl->num_ranks(), 0);
	for (std::uint32_t j = 0; j < tmpl->arity; ++j)
		for (std::uint32_t i = 0; i < tmpl->universe; ++i)
			inst.actual[tmpl->formal_blocks[j][i]] = actual_blocks[j][i];
	inst.fset = SparseSet(tmpl->graph.node_count() + 2, variant);
	inst.hwater = rank_inf;
	inst.wake.assign(tmpl->num_ranks(), 0);
	inst.tmpl = std::move(tmpl);
	return inst;
}

void PropEngine::mark_matters(BoolVarIndex v) {
	sc_->matters_fix0[v] = sc_->time;
	sc_->matters_fix1[v] = sc_->time;
}

void PropEngine::span_support(BoolVarIndex v, std::uint32_t bound) {
	const auto& vs = g_->varset;
	for (std::uint32_t p = tm_->varset_pos[v] + 1; p < vs.size() && vs[p] < bound; ++p)
		sc_->eprime[vs[p]] = sc_->e[vs[p]];
}

void PropEngine::fset_insert(std::uint32_t n) {
	if (!inst_->fset.member(n)) inst_->fset.insert(n);
}

std::pair<bool, bool> PropEngine::base_rec(std::uint32_t n) {
	if (n == 0) return {true, false};
	if (n == 1) return {false, true};
	if (sc_->visit[n] >= sc_->time) {
		std::uint8_t s = sc_->save[n];
		return {(s & 1) != 0, (s & 2) != 0};
	}
	counters.node_visits++;
	visited_++;
	BoolVarIndex v = g_->var[n];
	DomainBits ev = sc_->e[v];
	bool rf0 = false, rt0 = false, rf1 = false, rt1 = false;
	if (ev & dom_zero) {
		auto [rf, rt] = base_rec(g_->low[n]);
		rf0 = rf;
		rt0 = rt;
		if (rt) {
			span_support(v, top_of(g_->low[n]));
			sc_->eprime[v] |= dom_zero;
		}
	}
	if (ev & dom_one) {
		auto [rf, rt] = base_rec(g_->high[n]);
		rf1 = rf;
		rt1 = rt;
		if (rt) {
			span_support(v, top_of(g_->high[n]));
			sc_->eprime[v] |= dom_one;
		}
	}
	bool reachf = rf0 || rf1, reacht = rt0 || rt1;
	if (cfg_.literal_matters) {
		if (rt0 && rf1) sc_->matters_fix1[v] = sc_->time;
		if (rt1 && rf0) sc_->matters_fix0[v] = sc_->time;
	} else if (reachf && reacht) {
		mark_matters(v);
	}
	sc_->visit[n] = sc_->time;
	sc_->save[n] = static_cast<std::uint8_t>((reachf ? 1 : 0) | (reacht ? 2 : 0));
	return {reachf, reacht};
}

std::pair<bool, bool> PropEngine::imp_rec(std::uint32_t n) {
	if (cfg_.memoize && n >= 2 && inst_->fset.member(n)) {
		counters.fset_hits++;
		return {true, false};
	}
	if (n == 0) return {true, false};
	if (n == 1) return {false, true};
	if (sc_->visit[n] >= sc_->time) {
		std::uint8_t s = sc_->save[n];
		return {(s & 1) != 0, (s & 2) != 0};
	}
	BoolVarIndex v = g_->var[n];
	if (cfg_.shortcut && v >= inst_->hwater) return shortcut_rec(n);
	counters.node_visits++;
	visited_++;
	DomainBits ev = sc_->e[v];
	bool rf0 = false, rt0 = false, rf1 = false, rt1 = false;
	bool reachf = false, reacht = false;
	std::uint32_t maxtop = v;
	bool skip_high = false;
	if (ev & dom_zero) {
		auto [rf, rt] = imp_rec(g_->low[n]);
		rf0 = rf;
		rt0 = rt;
		reachf = rf;
		reacht = rt;
		if (rt) {
			std::uint32_t top = top_of(g_->low[n]);
			maxtop = top;
			sc_->eprime[v] |= dom_zero;
			if (cfg_.shortcut && inst_->hwater <= top && sc_->eprime[v] == ev) {
				// Everything from v up is supported; the true branch can
				// only re-derive that.
				inst_->hwater = v;
				reachf = true;
				skip_high = true;
			}
		}
	}
	if (!skip_high && (ev & dom_one)) {
		auto [rf, rt] = imp_rec(g_->high[n]);
		rf1 = rf;
		rt1 = rt;
		reachf = reachf || rf;
		reacht = reacht || rt;
		if (rt) {
			std::uint32_t top = top_of(g_->high[n]);
			maxtop = std::max(maxtop, top);
			sc_->eprime[v] |= dom_one;
			if (cfg_.shortcut && inst_->hwater <= top && sc_->eprime[v] == ev)
				inst_->hwater = v;
		}
	}
	if (!skip_high && cfg_.memoize && !reacht) fset_insert(n);
	// cleanup: long arcs out of this node support everything they skip
	span_support(v, maxtop);
	if (cfg_.literal_matters && !skip_high) {
		if (rt0 && rf1) sc_->matters_fix1[v] = sc_->time;
		if (rt1 && rf0) sc_->matters_fix0[v] = sc_->time;
	} else if (reachf && reacht) {
		mark_matters(v);
	}
	sc_->visit[n] = sc_->time;
	sc_->save[n] = static_cast<std::uint8_t>((reachf ? 1 : 0) | (reacht ? 2 : 0));
	return {reachf, reacht};
}

// Below the high-water mark every value is already supported, so only a
// single path to TRUE is needed. Variables on the discovered path still
// have to be marked as mattering.
std::pair<bool, bool> PropEngine::shortcut_rec(std::uint32_t n) {
	if (cfg_.memoize && n >= 2 && inst_->fset.member(n)) {
		counters.fset_hits++;
		return {true, false};
	}
	if (n == 0) return {true, false};
	if (n == 1) return {false, true};
	if (sc_->visit[n] >= sc_->time) {
		std::uint8_t s = sc_->save[n];
		return {(s & 1) != 0, (s & 2) != 0};
	}
	counters.node_visits++;
	counters.shortcut_entries++;
	visited_++;
	BoolVarIndex v = g_->var[n];
	DomainBits ev = sc_->e[v];
	bool rf0 = false;
	if (ev & dom_zero) {
		auto [rf, rt] = shortcut_rec(g_->low[n]);
		rf0 = rf;
		if (rt) {
			if (ev & dom_one) {
				mark_matters(v);
				rf0 = true;
			}
			sc_->visit[n] = sc_->time;
			sc_->save[n] = static_cast<std::uint8_t>((rf0 ? 1 : 0) | 2);
			return {rf0, true};
		}
	}
	if (ev & dom_one) {
		auto [rf, rt] = shortcut_rec(g_->high[n]);
		bool rf1 = rf;
		if (rt) {
			if (rf0) {
				mark_matters(v);
				rf1 = true;
			}
			sc_->visit[n] = sc_->time;
			sc_->save[n] = static_cast<std::uint8_t>((rf1 ? 1 : 0) | 2);
			return {rf1, true};
		}
	}
	if (cfg_.memoize) fset_insert(n);
	return {true, false};
}

PropOutcome PropEngine::run(PropagatorInstance& inst, const std::vector<DomainBits>& domain,
							int level) {
	PropOutcome out;
	counters.propagations++;
	if (inst.tmpl->graph.trivial_true()) return out;

	g_ = &inst.tmpl->graph;
	sc_ = &inst.tmpl->scratch;
	tm_ = inst.tmpl.get();
	inst_ = &inst;
	visited_ = 0;

	sc_->time++;
	for (BoolVarIndex r : g_->varset) {
		DomainBits d = domain[inst.actual[r]];
		assert(d != dom_none);
		sc_->e[r] = d;
		sc_->eprime[r] = dom_none;
	}
	// The supported-suffix invariant is re-established within each run.
	inst.hwater = rank_inf;
	if (cfg_.memoize || cfg_.shortcut) {
		assert(inst.marks.empty() || inst.marks.back().level <= level);
		if (inst.marks.empty() || inst.marks.back().level < level)
			inst.marks.push_back({level, inst.fset.mark(), inst.hwater});
	}

	bool reacht = cfg_.memoize || cfg_.shortcut ? imp_rec(g_->root).second
												: base_rec(g_->root).second;
	out.visited = visited_;
	if (!reacht) {
		counters.failures++;
		out.failed = true;
		return out;
	}

	for (BoolVarIndex r : g_->varset) {
		DomainBits supported = sc_->eprime[r];
		assert(supported != dom_none);
		if (sc_->e[r] == dom_both && supported != dom_both)
			out.fixes.emplace_back(r, supported == dom_one);
	}
	if (cfg_.filter) {
		for (BoolVarIndex r : g_->varset) {
			std::uint8_t w = 0;
			if (sc_->eprime[r] == dom_both) {
				if (sc_->matters_fix0[r] >= sc_->time) w |= 1;
				if (sc_->matters_fix1[r] >= sc_->time) w |= 2;
			}
			inst.wake[r] = w;
		}
		inst.wake_all = false;
	} else {
		inst.wake_all = true;
	}
	inst.last_run_level = level;
	return out;
}

bool PropEngine::should_wake(const PropagatorInstance& inst, BoolVarIndex rank,
							 bool value) const {
	if (inst.tmpl->graph.trivial_true()) return false;
	if (!cfg_.filter || inst.wake_all) return true;
	return (inst.wake[rank] & (value ? 2 : 1)) != 0;
}

void PropEngine::on_backtrack(PropagatorInstance& inst, int level) const {
	while (!inst.marks.empty() && inst.marks.back().level > level) {
		inst.fset.restore(inst.marks.back().members);
		inst.hwater = inst.marks.back().hwater;
		inst.marks.pop_back();
	}
	if (inst.last_run_level > level) {
		inst.wake_all = true;
		inst.last_run_level = level;
	}
}

}  // namespace setprop
