#include "setprop/models.hpp"

#include <algorithm>
#include <cassert>

#include "setprop/solver.hpp"

namespace setprop {

std::uint32_t ProblemModel::add_var(std::string name, std::uint32_t n) {
	if (finalized) throw BuildError("model already finalized");
	if (find_var(name) >= 0) throw BuildError("duplicate set variable '" + name + "'");
	vars.push_back({std::move(name), n, {}, false, {}});
	return static_cast<std::uint32_t>(vars.size() - 1);
}

std::uint32_t ProblemModel::add_view(std::string name,
									 std::vector<std::pair<std::uint32_t, std::uint32_t>> view_of) {
	if (finalized) throw BuildError("model already finalized");
	SetVarDecl d;
	d.name = std::move(name);
	d.universe = static_cast<std::uint32_t>(view_of.size());
	d.is_view = true;
	d.view_of = std::move(view_of);
	vars.push_back(std::move(d));
	return static_cast<std::uint32_t>(vars.size() - 1);
}

void ProblemModel::add_constraint(ConstraintSpec spec, std::vector<std::uint32_t> use_vars) {
	std::vector<std::uint32_t> formals(spec.arity());
	for (std::uint32_t i = 0; i < formals.size(); ++i) formals[i] = i;
	add_merged({{spec, std::move(formals)}}, std::move(use_vars));
}

void ProblemModel::add_merged(std::vector<ConstraintPart> parts,
							  std::vector<std::uint32_t> use_vars) {
	for (std::uint32_t v : use_vars)
		if (v >= vars.size()) throw BuildError("constraint references undeclared variable");
	ConstraintUse use{std::move(parts), std::move(use_vars)};
	std::uint32_t n = group_universe(use);
	for (const auto& part : use.parts) {
		part.spec.validate(n);
		if (part.formals.size() != part.spec.arity())
			throw BuildError("constraint arity mismatch");
		for (std::uint32_t f : part.formals)
			if (f >= use.vars.size()) throw BuildError("constraint formal out of range");
	}
	constraints.push_back(std::move(use));
}

std::uint32_t ProblemModel::group_universe(const ConstraintUse& use) const {
	if (use.vars.empty()) throw BuildError("constraint with no variables");
	std::uint32_t n = vars[use.vars[0]].universe;
	for (std::uint32_t v : use.vars)
		if (vars[v].universe != n)
			throw BuildError("constraint mixes universes of different size");
	return n;
}

void ProblemModel::fix(std::uint32_t var, std::uint32_t elem, bool in) {
	if (var >= vars.size()) throw BuildError("fix references undeclared variable");
	if (elem < 1 || elem > vars[var].universe) throw BuildError("fix element out of 1..N");
	fixes.emplace_back(var, elem, in);
}

int ProblemModel::find_var(const std::string& name) const {
	for (std::size_t i = 0; i < vars.size(); ++i)
		if (vars[i].name == name) return static_cast<int>(i);
	return -1;
}

void ProblemModel::finalize() {
	if (finalized) return;
	num_bools = 0;
	for (auto& v : vars) {
		if (v.is_view) continue;
		v.bools.resize(v.universe);
		for (std::uint32_t i = 0; i < v.universe; ++i) v.bools[i] = num_bools++;
	}
	for (auto& v : vars) {
		if (!v.is_view) continue;
		v.bools.resize(v.universe);
		for (std::uint32_t i = 0; i < v.universe; ++i) {
			auto [src, elem] = v.view_of[i];
			if (src >= vars.size() || vars[src].is_view)
				throw BuildError("view must alias a plain variable");
			if (elem < 1 || elem > vars[src].universe)
				throw BuildError("view element out of range");
			v.bools[i] = vars[src].bools[elem - 1];
		}
	}
	finalized = true;
}

// ---------------------------------------------------------------------
// Benchmark generators

ProblemModel gen_social_golfers(int w, int g, int s, bool fix_prefix) {
	if (w < 1 || g < 1 || s < 1) throw BuildError("golfers: w, g, s must be positive");
	ProblemModel m;
	m.universe = static_cast<std::uint32_t>(g) * static_cast<std::uint32_t>(s);
	std::vector<std::vector<std::uint32_t>> v(w, std::vector<std::uint32_t>(g));
	for (int i = 1; i <= w; ++i)
		for (int j = 1; j <= g; ++j)
			v[i - 1][j - 1] =
					m.add_var("v" + std::to_string(i) + "_" + std::to_string(j), m.universe);

	for (int i = 0; i < w; ++i)
		m.add_constraint({ConstraintKind::PartitionLex, 0, g}, v[i]);
	for (int i = 0; i < w; ++i)
		for (int j = 0; j < g; ++j)
			m.add_constraint({ConstraintKind::CardEq, s}, {v[i][j]});
	for (int i = 0; i < w; ++i)
		for (int j = i + 1; j < w; ++j)
			for (int k = 0; k < g; ++k)
				for (int l = 0; l < g; ++l)
					m.add_constraint({ConstraintKind::InterCardLe, 1}, {v[i][k], v[j][l]});
	for (int i = 0; i < w; ++i)
		for (int j = i + 1; j < w; ++j)
			m.add_constraint({ConstraintKind::LexLe, 0}, {v[i][0], v[j][0]});

	if (fix_prefix) {
		// Week 1 fully fixed: group j takes {(j-1)s+1 .. js}.
		for (int j = 0; j < g; ++j)
			for (int e = 1; e <= static_cast<int>(m.universe); ++e)
				m.fix(v[0][j], e, e > j * s && e <= (j + 1) * s);
		// Week 2, group 1 takes the first player of each of the first s
		// week-1 groups; only a full fixing is symmetry-safe, so partial
		// prefixes (s > g) leave week 2 untouched.
		if (w >= 2 && s <= g) {
			std::vector<bool> in(m.universe + 1, false);
			for (int k = 0; k < s; ++k) in[k * s + 1] = true;
			for (int e = 1; e <= static_cast<int>(m.universe); ++e) m.fix(v[1][0], e, in[e]);
		}
	}
	m.finalize();
	return m;
}

namespace {

std::uint64_t binom(int n, int k) {
	if (k < 0 || k > n) return 0;
	std::uint64_t r = 1;
	for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
	return r;
}

}  // namespace

std::uint64_t steiner_block_count(int t, int k, int n) {
	std::uint64_t num = binom(n, t), den = binom(k, t);
	if (den == 0 || num % den != 0)
		throw BuildError("no Steiner system of this shape: C(N,t) not divisible by C(k,t)");
	return num / den;
}

ProblemModel gen_steiner(int t, int k, int n, bool dual) {
	if (t < 1 || k < t || n < k) throw BuildError("steiner: need 1 <= t <= k <= N");
	std::uint64_t m_blocks = steiner_block_count(t, k, n);
	ProblemModel m;
	m.universe = static_cast<std::uint32_t>(n);
	std::vector<std::uint32_t> s(m_blocks);
	for (std::uint64_t i = 0; i < m_blocks; ++i)
		s[i] = m.add_var("s" + std::to_string(i + 1), m.universe);

	if (m_blocks == 1) {
		m.add_constraint({ConstraintKind::CardEq, k}, {s[0]});
	} else {
		for (std::uint64_t i = 0; i < m_blocks; ++i)
			for (std::uint64_t j = i + 1; j < m_blocks; ++j)
				m.add_merged({{{ConstraintKind::InterCardLe, t - 1}, {0, 1}},
							  {{ConstraintKind::LexLt, 0}, {0, 1}},
							  {{ConstraintKind::CardEq, k}, {0}},
							  {{ConstraintKind::CardEq, k}, {1}}},
							 {s[i], s[j]});
	}
	if (dual) {
		if ((m_blocks * k) % n != 0)
			throw BuildError("steiner dual: m*k not divisible by N");
		int dual_card = static_cast<int>(m_blocks * k / n);
		for (int j = 1; j <= n; ++j) {
			std::vector<std::pair<std::uint32_t, std::uint32_t>> view(m_blocks);
			for (std::uint64_t i = 0; i < m_blocks; ++i)
				view[i] = {s[i], static_cast<std::uint32_t>(j)};
			std::uint32_t d = m.add_view("d" + std::to_string(j), std::move(view));
			m.add_constraint({ConstraintKind::CardEq, dual_card}, {d});
		}
	}
	m.steiner_cover = std::make_pair(t, k);
	m.finalize();
	return m;
}

namespace {

// Weight-w subsets of {1..l} in ascending set order (= lexicographic on
// the sorted element tuples).
bool next_combination(std::vector<int>& c, int l) {
	int w = static_cast<int>(c.size());
	for (int i = w - 1; i >= 0; --i) {
		if (c[i] < l - (w - 1 - i)) {
			++c[i];
			for (int j = i + 1; j < w; ++j) c[j] = c[j - 1] + 1;
			return true;
		}
	}
	return false;
}

int symdiff_size(const std::vector<int>& a, const std::vector<int>& b, int l) {
	std::vector<bool> in_a(l + 1, false), in_b(l + 1, false);
	for (int e : a) in_a[e] = true;
	for (int e : b) in_b[e] = true;
	int d = 0;
	for (int e = 1; e <= l; ++e) d += in_a[e] != in_b[e];
	return d;
}

}  // namespace

ProblemModel gen_hamming(int l, int d, int w, int m_words, bool fix_prefix) {
	if (l < 0 || w < 0 || w > l || d < 0 || m_words < 1)
		throw BuildError("hamming: need 0 <= w <= l, d >= 0, m >= 1");
	ProblemModel m;
	m.universe = static_cast<std::uint32_t>(l);
	std::vector<std::uint32_t> s(m_words);
	for (int i = 0; i < m_words; ++i)
		s[i] = m.add_var("s" + std::to_string(i + 1), m.universe);

	if (m_words == 1) {
		m.add_constraint({ConstraintKind::CardEq, w}, {s[0]});
	} else {
		for (int i = 0; i < m_words; ++i)
			for (int j = i + 1; j < m_words; ++j)
				m.add_merged({{{ConstraintKind::SymdiffCardGe, d}, {0, 1}},
							  {{ConstraintKind::LexLt, 0}, {0, 1}},
							  {{ConstraintKind::CardEq, w}, {0}},
							  {{ConstraintKind::CardEq, w}, {1}}},
							 {s[i], s[j]});
	}

	if (fix_prefix) {
		// s1 = {1..w}, the least weight-w set; s2 = the least weight-w set
		// at distance >= d beyond it.
		std::vector<int> first(w);
		for (int i = 0; i < w; ++i) first[i] = i + 1;
		for (int e = 1; e <= l; ++e) m.fix(s[0], e, e <= w);
		if (m_words >= 2) {
			std::vector<int> c = first;
			bool found = false;
			while (next_combination(c, l)) {
				if (symdiff_size(first, c, l) >= d) {
					found = true;
					break;
				}
			}
			if (found) {
				std::vector<bool> in(l + 1, false);
				for (int e : c) in[e] = true;
				for (int e = 1; e <= l; ++e) m.fix(s[1], e, in[e]);
			} else if (l >= 1) {
				// No compatible second word exists at all, so the model is
				// unsatisfiable; record that as contradictory unit fixes.
				m.fix(s[1], 1, true);
				m.fix(s[1], 1, false);
			}
		}
	}
	m.finalize();
	return m;
}

// ---------------------------------------------------------------------
// Solution checking

std::vector<std::vector<int>> extract_sets(const ProblemModel& model,
											const std::vector<bool>& booleans) {
	std::vector<std::vector<int>> sets(model.vars.size());
	for (std::size_t v = 0; v < model.vars.size(); ++v)
		for (std::uint32_t i = 0; i < model.vars[v].universe; ++i)
			if (booleans[model.vars[v].bools[i]]) sets[v].push_back(static_cast<int>(i + 1));
	return sets;
}

bool set_lex_less(const std::vector<bool>& u, const std::vector<bool>& v) {
	for (std::size_t i = 0; i < u.size(); ++i)
		if (u[i] != v[i]) return u[i];
	return false;
}

namespace {

struct SetView {
	std::vector<bool> in;  // 1-based
	int card = 0;
};

SetView view_of(const ProblemModel& model, const std::vector<bool>& booleans, std::uint32_t v) {
	SetView sv;
	const auto& decl = model.vars[v];
	sv.in.assign(decl.universe + 1, false);
	for (std::uint32_t i = 0; i < decl.universe; ++i) {
		bool b = booleans[decl.bools[i]];
		sv.in[i + 1] = b;
		sv.card += b;
	}
	return sv;
}

bool lex_less_views(const SetView& a, const SetView& b, bool strict) {
	for (std::size_t i = 1; i < a.in.size(); ++i)
		if (a.in[i] != b.in[i]) return a.in[i];
	return !strict;
}

bool part_holds(const ConstraintSpec& spec, const std::vector<SetView>& args, int n) {
	switch (spec.kind) {
	case ConstraintKind::Member:
		return args[0].in[spec.param];
	case ConstraintKind::Eq:
		return args[0].in == args[1].in;
	case ConstraintKind::Subset:
		for (int e = 1; e <= n; ++e)
			if (args[0].in[e] && !args[1].in[e]) return false;
		return true;
	case ConstraintKind::Union:
		for (int e = 1; e <= n; ++e)
			if (args[0].in[e] != (args[1].in[e] || args[2].in[e])) return false;
		return true;
	case ConstraintKind::Inter:
		for (int e = 1; e <= n; ++e)
			if (args[0].in[e] != (args[1].in[e] && args[2].in[e])) return false;
		return true;
	case ConstraintKind::CardEq:
		return args[0].card == spec.param;
	case ConstraintKind::CardLe:
		return args[0].card <= spec.param;
	case ConstraintKind::LexLt:
		return lex_less_views(args[0], args[1], true);
	case ConstraintKind::LexLe:
		return lex_less_views(args[0], args[1], false);
	case ConstraintKind::InterCardLe: {
		int c = 0;
		for (int e = 1; e <= n; ++e) c += args[0].in[e] && args[1].in[e];
		return c <= spec.param;
	}
	case ConstraintKind::SymdiffCardGe: {
		int c = 0;
		for (int e = 1; e <= n; ++e) c += args[0].in[e] != args[1].in[e];
		return c >= spec.param;
	}
	case ConstraintKind::PartitionLex:
		for (std::size_t i = 0; i < args.size(); ++i)
			for (std::size_t j = i + 1; j < args.size(); ++j)
				for (int e = 1; e <= n; ++e)
					if (args[i].in[e] && args[j].in[e]) return false;
		for (std::size_t i = 0; i + 1 < args.size(); ++i)
			if (!lex_less_views(args[i], args[i + 1], true)) return false;
		return true;
	}
	return false;
}

}  // namespace

CheckResult check_solution(const ProblemModel& model, const std::vector<bool>& booleans) {
	for (auto [var, elem, in] : model.fixes) {
		if (booleans[model.vars[var].bools[elem - 1]] != in)
			return {false, "fixed element " + std::to_string(elem) + " of " +
								   model.vars[var].name + " violated"};
	}
	for (std::size_t c = 0; c < model.constraints.size(); ++c) {
		const auto& use = model.constraints[c];
		int n = static_cast<int>(model.group_universe(use));
		std::vector<SetView> group;
		group.reserve(use.vars.size());
		for (std::uint32_t v : use.vars) group.push_back(view_of(model, booleans, v));
		for (const auto& part : use.parts) {
			std::vector<SetView> args;
			for (std::uint32_t f : part.formals) args.push_back(group[f]);
			if (part.spec.kind == ConstraintKind::PartitionLex) args = group;
			if (!part_holds(part.spec, args, n))
				return {false, std::string(kind_name(part.spec.kind)) + " violated (constraint " +
									   std::to_string(c) + ")"};
		}
	}
	if (model.steiner_cover) {
		auto [t, k] = *model.steiner_cover;
		int n = static_cast<int>(model.universe);
		std::vector<SetView> blocks;
		for (std::size_t v = 0; v < model.vars.size(); ++v)
			if (!model.vars[v].is_view) blocks.push_back(view_of(model, booleans, v));
		// Every t-subset must lie in exactly one block; t in {2,3} covers
		// the generated systems.
		if (t == 2) {
			for (int a = 1; a <= n; ++a)
				for (int b = a + 1; b <= n; ++b) {
					int cover = 0;
					for (const auto& blk : blocks) cover += blk.in[a] && blk.in[b];
					if (cover != 1)
						return {false, "pair {" + std::to_string(a) + "," + std::to_string(b) +
											   "} covered " + std::to_string(cover) + " times"};
				}
		} else if (t == 3) {
			for (int a = 1; a <= n; ++a)
				for (int b = a + 1; b <= n; ++b)
					for (int c2 = b + 1; c2 <= n; ++c2) {
						int cover = 0;
						for (const auto& blk : blocks)
							cover += blk.in[a] && blk.in[b] && blk.in[c2];
						if (cover != 1) return {false, "triple covered != once"};
					}
		} else {
			return {false, "coverage check unsupported for t=" + std::to_string(t)};
		}
	}
	return {};
}

MaxCodeResult maximal_hamming(int l, int d, int w, const SolverConfig& cfg) {
	MaxCodeResult out;
	std::uint64_t all_words = binom(l, w);
	for (int m = 1;; ++m) {
		if (static_cast<std::uint64_t>(m) > all_words + 1) break;  // unreachable guard
		ProblemModel model = gen_hamming(l, d, w, m);
		Solver solver(model, cfg);
		SolveResult r = solver.solve();
		out.stats += r.stats;
		if (r.status == SolveStatus::Timeout) {
			out.timed_out = true;
			out.max_size = m - 1;
			return out;
		}
		if (r.status == SolveStatus::Unsat) {
			out.max_size = m - 1;
			return out;
		}
	}
	out.max_size = static_cast<int>(all_words);
	return out;
}

}  // namespace setprop
