#pragma once

#include <cstdint>
#include <string>

#include "setprop/sparse_set.hpp"

namespace setprop {

enum class SearchMode : std::uint8_t { Static, Vsids };
enum class ReasonMode : std::uint8_t { Lazy, Eager };
enum class MattersMode : std::uint8_t { Var, Literal };

struct SolverConfig {
	SearchMode search = SearchMode::Vsids;
	ReasonMode reasons = ReasonMode::Lazy;
	bool filter = true;
	bool memoize = true;
	bool shortcut = true;
	SparseVariant sparse = SparseVariant::Mod;
	MattersMode matters = MattersMode::Var;
	bool tseitin = false;
	bool decide_polarity = false;  // VSIDS decision polarity (false = exclude element)
	std::uint64_t seed = 0;
	double timeout_s = 0;           // 0 = unlimited
	std::uint64_t max_conflicts = 0;  // 0 = unlimited

	// shortcutting reads the failure set, so it implies memoization
	void normalize() {
		if (shortcut && !memoize) shortcut = false;
	}
};

struct Stats {
	std::uint64_t decisions = 0;
	std::uint64_t conflicts = 0;
	std::uint64_t propagations = 0;      // literals fixed by unit propagation
	std::uint64_t bdd_propagations = 0;  // propagator executions
	std::uint64_t reasons = 0;           // explanation clauses generated
	std::uint64_t learnts = 0;           // clauses learnt by conflict analysis
	std::uint64_t restarts = 0;
	double time_ms = 0;
	// instrumentation
	std::uint64_t node_visits = 0;
	std::uint64_t fset_hits = 0;
	std::uint64_t shortcut_entries = 0;

	std::string line() const;
	std::string json() const;

	Stats& operator+=(const Stats& o) {
		decisions += o.decisions;
		conflicts += o.conflicts;
		propagations += o.propagations;
		bdd_propagations += o.bdd_propagations;
		reasons += o.reasons;
		learnts += o.learnts;
		restarts += o.restarts;
		time_ms += o.time_ms;
		node_visits += o.node_visits;
		fset_hits += o.fset_hits;
		shortcut_entries += o.shortcut_entries;
		return *this;
	}
};

enum class SolveStatus : std::uint8_t { Sat, Unsat, Timeout };

const char* status_name(SolveStatus status);

}  // namespace setprop
