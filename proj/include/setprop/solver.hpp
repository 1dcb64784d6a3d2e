#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "setprop/config.hpp"
#include "setprop/explain.hpp"
#include "setprop/models.hpp"
#include "setprop/propagator.hpp"

namespace setprop {

struct Lit {
	std::uint32_t x = 0;
	friend bool operator==(Lit a, Lit b) { return a.x == b.x; }
	friend bool operator!=(Lit a, Lit b) { return a.x != b.x; }
};

// sign = true makes the variable true.
inline Lit mk_lit(std::uint32_t var, bool sign) { return Lit{2 * var + (sign ? 0u : 1u)}; }
inline Lit neg(Lit l) { return Lit{l.x ^ 1u}; }
inline std::uint32_t lit_var(Lit l) { return l.x >> 1; }
inline bool lit_sign(Lit l) { return (l.x & 1) == 0; }
inline constexpr Lit lit_undef{0xffffffffu};

struct SolveResult {
	SolveStatus status = SolveStatus::Timeout;
	std::vector<bool> booleans;          // model Booleans only (SAT)
	std::vector<std::vector<int>> sets;  // per declared variable (SAT)
	Stats stats;
};

// CDCL engine hosting BDD set-bounds propagators. Unit propagation runs
// at higher priority; propagators wake through per-variable watcher lists
// filtered by their matters sets, and either attach eager reason clauses
// or explain lazily during conflict analysis.
class Solver {
public:
	Solver(const ProblemModel& model, SolverConfig cfg);
	// Pure CNF entry point (also used for the Tseitin baseline).
	Solver(std::uint32_t num_vars, const std::vector<std::vector<int>>& dimacs, SolverConfig cfg);
	~Solver();

	SolveResult solve();

	// Tseitin export: the full clause set plus variable count.
	std::uint32_t num_vars() const { return static_cast<std::uint32_t>(assigns_.size()); }
	std::vector<std::vector<int>> dimacs_clauses() const;

	const Stats& stats() const { return stats_; }
	const PropCounters& prop_counters() const { return engine_.counters; }

private:
	static constexpr std::uint32_t cref_undef = 0xffffffffu;

	struct Clause {
		float activity = 0;
		bool learnt = false;
		std::vector<Lit> lits;
	};
	struct Watcher {
		std::uint32_t cref;
		Lit blocker;
	};
	enum class ReasonKind : std::uint8_t { None, Clause, Propagator };
	struct Reason {
		ReasonKind kind = ReasonKind::None;
		std::uint32_t ref = 0;
		BoolVarIndex rank = 0;
	};

	// setup
	void init_vars(std::uint32_t n);
	void compile(const ProblemModel& model);
	void compile_tseitin(const ProblemModel& model);
	std::vector<std::uint32_t> actual_of(const ProblemModel& model, const ConstraintUse& use,
										 std::uint32_t arity, std::uint32_t universe) const;
	bool add_input_clause(std::vector<Lit> lits);  // false on immediate conflict

	// core
	int value_of(Lit l) const {
		std::int8_t a = assigns_[lit_var(l)];
		return a == 0 ? 0 : (lit_sign(l) ? a : -a);
	}
	int level() const { return static_cast<int>(trail_lim_.size()); }
	void enqueue(Lit l, Reason r);
	std::uint32_t unit_propagate();  // returns conflict cref or cref_undef
	std::uint32_t propagate_all();
	void new_decision_level() { trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size())); }
	void backtrack(int target);
	std::uint32_t add_clause(std::vector<Lit> lits, bool learnt);
	void attach(std::uint32_t cref);
	void detach(std::uint32_t cref);
	bool locked(std::uint32_t cref) const;
	void analyze(std::uint32_t confl, std::vector<Lit>& learnt, int& backjump);
	std::uint32_t reason_cref(std::uint32_t var);  // materializes lazy explanations
	std::uint32_t explain_propagation(std::uint32_t var);
	std::uint32_t materialize_failure(std::uint32_t inst_id);
	std::vector<Lit> explanation_to_clause(const PropagatorInstance& inst, const Explanation& ex,
										   Lit inferred);
	Lit decide();
	void bump_var(std::uint32_t v);
	void decay_var_activity() { var_inc_ /= 0.95; }
	void bump_clause(Clause& c);
	void reduce_db();
	bool out_of_budget();

	// vsids heap
	void heap_insert(std::uint32_t v);
	void heap_sift_up(std::uint32_t i);
	void heap_sift_down(std::uint32_t i);
	bool heap_less(std::uint32_t a, std::uint32_t b) const;
	std::uint32_t heap_pop();

	SolverConfig cfg_;
	const ProblemModel* model_ = nullptr;
	TemplateStore store_;
	PropEngine engine_;

	std::vector<std::unique_ptr<Clause>> clauses_;
	std::vector<std::uint32_t> learnt_refs_;
	std::vector<std::vector<Watcher>> watches_;
	std::uint32_t num_problem_clauses_ = 0;

	std::vector<std::int8_t> assigns_;
	std::vector<DomainBits> domain_;
	std::vector<int> var_level_;
	std::vector<std::uint32_t> trail_pos_;
	std::vector<Reason> var_reason_;
	std::vector<Lit> trail_;
	std::vector<std::uint32_t> trail_lim_;
	std::uint32_t qhead_ = 0;
	std::uint32_t bdd_qhead_ = 0;

	std::vector<PropagatorInstance> instances_;
	std::vector<std::vector<std::pair<std::uint32_t, BoolVarIndex>>> var_instances_;
	std::deque<std::uint32_t> prop_queue_;
	bool hard_unsat_ = false;

	std::vector<double> activity_;
	double var_inc_ = 1.0;
	double cla_inc_ = 1.0;
	std::vector<std::uint32_t> heap_;
	std::vector<std::uint32_t> heap_pos_;
	std::vector<std::uint32_t> static_order_;

	std::vector<std::uint8_t> seen_;
	Stats stats_;
	std::uint64_t restart_limit_ = 100;
	double max_learnts_ = 0;
	std::chrono::steady_clock::time_point start_;
	std::uint32_t model_bools_ = 0;
};

}  // namespace setprop
