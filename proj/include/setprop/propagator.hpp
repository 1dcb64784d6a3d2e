#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "setprop/constraints.hpp"
#include "setprop/sparse_set.hpp"

namespace setprop {

inline constexpr std::uint32_t rank_inf = 0xffffffffu;

// One constraint bound to actual Boolean variables. The frozen graph and
// its stamp arrays are shared through the template; everything here is
// private per-instance search state.
struct PropagatorInstance {
	std::shared_ptr<ConstraintTemplate> tmpl;
	std::vector<std::uint32_t> actual;  // rank -> external Boolean variable

	SparseSet fset;                  // nodes with no remaining path to TRUE
	std::uint32_t hwater = rank_inf; // least rank whose suffix is fully supported
	std::vector<std::uint8_t> wake;  // per rank; bit0 wake on v:=0, bit1 on v:=1
	bool wake_all = true;            // never ran, or stale after backtracking
	int last_run_level = -1;
	bool in_queue = false;

	struct LevelMark {
		int level;
		std::uint32_t members;
		std::uint32_t hwater;
	};
	std::vector<LevelMark> marks;
};

// pre: one block per formal variable, each of the template's universe size.
PropagatorInstance instantiate(std::shared_ptr<ConstraintTemplate> tmpl,
							   const std::vector<std::vector<std::uint32_t>>& actual_blocks,
							   SparseVariant variant = SparseVariant::Mod);

struct PropConfig {
	bool filter = true;          // maintain wake sets
	bool memoize = true;         // dead-subgraph memoization via fset
	bool shortcut = true;        // high-water-mark shortcutting (needs memoize)
	bool literal_matters = false;  // wake per literal instead of per variable
};

struct PropCounters {
	std::uint64_t propagations = 0;
	std::uint64_t node_visits = 0;
	std::uint64_t fset_hits = 0;
	std::uint64_t shortcut_entries = 0;
	std::uint64_t failures = 0;
};

struct PropOutcome {
	bool failed = false;
	std::vector<std::pair<BoolVarIndex, bool>> fixes;  // (rank, value), rank ascending
	std::uint32_t visited = 0;                         // nodes touched this run
};

class PropEngine {
public:
	explicit PropEngine(PropConfig cfg = {}) : cfg_(cfg) {
		if (cfg_.shortcut) cfg_.memoize = true;
	}

	// Runs one propagation of `inst` against `domain` (indexed by external
	// Boolean variable). Does not write to `domain`; newly fixed values are
	// reported through the outcome.
	PropOutcome run(PropagatorInstance& inst, const std::vector<DomainBits>& domain,
					int level = 0);

	bool should_wake(const PropagatorInstance& inst, BoolVarIndex rank, bool value) const;
	void on_backtrack(PropagatorInstance& inst, int level) const;

	const PropConfig& config() const { return cfg_; }
	PropCounters counters;

private:
	std::pair<bool, bool> base_rec(std::uint32_t n);
	std::pair<bool, bool> imp_rec(std::uint32_t n);
	std::pair<bool, bool> shortcut_rec(std::uint32_t n);
	void span_support(BoolVarIndex v, std::uint32_t bound);
	std::uint32_t top_of(std::uint32_t n) const {
		return n <= 1 ? rank_inf : g_->var[n];
	}
	void fset_insert(std::uint32_t n);
	void mark_matters(BoolVarIndex v);

	PropConfig cfg_;
	const StaticGraph* g_ = nullptr;
	PropScratch* sc_ = nullptr;
	PropagatorInstance* inst_ = nullptr;
	const ConstraintTemplate* tm_ = nullptr;
	std::uint32_t visited_ = 0;
};

}  // namespace setprop
