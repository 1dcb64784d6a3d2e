#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "setprop/config.hpp"
#include "setprop/constraints.hpp"

namespace setprop {

struct SetVarDecl {
	std::string name;
	std::uint32_t universe = 0;
	std::vector<std::uint32_t> bools;  // global Boolean per element, filled by finalize()
	bool is_view = false;
	// For views: (source variable, element) per own element.
	std::vector<std::pair<std::uint32_t, std::uint32_t>> view_of;
};

// A constraint occurrence: one or more conjoined parts compiled into a
// single propagator over `vars`.
struct ConstraintUse {
	std::vector<ConstraintPart> parts;
	std::vector<std::uint32_t> vars;  // indices into ProblemModel::vars
};

struct ProblemModel {
	std::uint32_t universe = 0;
	std::vector<SetVarDecl> vars;
	std::vector<ConstraintUse> constraints;
	std::vector<std::tuple<std::uint32_t, std::uint32_t, bool>> fixes;  // (var, elem, in)
	std::optional<std::pair<int, int>> steiner_cover;  // (t, k): verify exact coverage
	std::uint32_t num_bools = 0;
	bool finalized = false;

	std::uint32_t add_var(std::string name, std::uint32_t n);
	std::uint32_t add_view(std::string name,
						   std::vector<std::pair<std::uint32_t, std::uint32_t>> view_of);
	void add_constraint(ConstraintSpec spec, std::vector<std::uint32_t> use_vars);
	void add_merged(std::vector<ConstraintPart> parts, std::vector<std::uint32_t> use_vars);
	void fix(std::uint32_t var, std::uint32_t elem, bool in);
	int find_var(const std::string& name) const;

	// Assigns global Boolean indices; must run before solving.
	void finalize();
	std::uint32_t group_universe(const ConstraintUse& use) const;
};

// Social golfers: w weeks, g groups, s players per group, N = g*s.
ProblemModel gen_social_golfers(int w, int g, int s, bool fix_prefix = false);

// Steiner system S(t, k, N) with m = C(N,t)/C(k,t) blocks. The dual model
// aliases block membership Booleans into element variables.
ProblemModel gen_steiner(int t, int k, int n, bool dual = false);
std::uint64_t steiner_block_count(int t, int k, int n);

// Constant-weight Hamming code: m codewords of length l, weight w,
// pairwise distance >= d.
ProblemModel gen_hamming(int l, int d, int w, int m, bool fix_prefix = false);

struct CheckResult {
	bool ok = true;
	std::string violation;
};

// Independent set-theoretic evaluation of every constraint (no BDDs).
CheckResult check_solution(const ProblemModel& model, const std::vector<bool>& booleans);

std::vector<std::vector<int>> extract_sets(const ProblemModel& model,
										   const std::vector<bool>& booleans);

// First differing element decides; the set containing it is smaller.
bool set_lex_less(const std::vector<bool>& u, const std::vector<bool>& v);

struct MaxCodeResult {
	int max_size = 0;
	bool timed_out = false;
	Stats stats;
};

// Grows m until the code is unsatisfiable; the last satisfiable m is the
// maximal code size.
MaxCodeResult maximal_hamming(int l, int d, int w, const SolverConfig& cfg = {});

}  // namespace setprop
