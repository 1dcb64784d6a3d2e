#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "setprop/bdd.hpp"
#include "setprop/common.hpp"

namespace setprop {

// Tseitin encoding of a frozen graph: one auxiliary variable per internal
// node, local DIMACS-style numbering with the graph's ranks first.
// Literal |l| in [1, num_inputs] is rank |l|-1; larger values are node
// auxiliaries in node-id order.
struct CnfEncoding {
	std::uint32_t num_inputs = 0;
	std::uint32_t num_aux = 0;
	std::vector<std::vector<std::int32_t>> clauses;
	std::int32_t root_lit = 0;            // assert this to enforce the constraint; 0 if trivial
	std::uint32_t raw_clause_count = 0;   // six per node, before constant simplification

	std::uint32_t aux_lit(std::uint32_t node_id) const { return num_inputs + node_id - 1; }
};

// pre: g.root is internal or TRUE.
CnfEncoding bdd_to_cnf(const StaticGraph& g);

void write_dimacs(std::ostream& os, std::uint32_t num_vars,
				  const std::vector<std::vector<std::int32_t>>& clauses);

// A minimal antecedent set: (rank, value it is fixed to). Dropping any
// entry breaks entailment of the explained inference.
struct Explanation {
	std::vector<std::pair<BoolVarIndex, bool>> antecedents;
};

// Minimal reason for `var = sign` being forced by g under dom. dom is the
// per-rank domain state at inference time with var still unfixed; it is
// flipped internally and restored before returning.
Explanation explain_inference(const StaticGraph& g, std::vector<DomainBits>& dom,
							  BoolVarIndex var, bool sign);

// Minimal subset of the fixed ranks in dom that already makes g
// unsatisfiable (propagation returned FAILED).
Explanation explain_failure(const StaticGraph& g, std::vector<DomainBits>& dom);

}  // namespace setprop
