#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "setprop/bdd.hpp"
#include "setprop/common.hpp"

namespace setprop {

// Primitive set constraints over set variables drawn from subsets of
// {1..N}. Lexicographic comparisons order two sets by their first
// differing element: the set containing it is the smaller one.
enum class ConstraintKind : std::uint8_t {
	Member,         // param ∈ v
	Eq,             // u = v
	Subset,         // u ⊆ w
	Union,          // u = v ∪ w
	Inter,          // u = v ∩ w
	CardEq,         // |v| = param
	CardLe,         // |v| ≤ param
	LexLt,          // u < v
	LexLe,          // u ≤ v
	InterCardLe,    // |u ∩ v| ≤ param
	SymdiffCardGe,  // |u ⊕ v| ≥ param
	PartitionLex,   // pairwise disjoint ∧ v1 < v2 < ... < vg
};

const char* kind_name(ConstraintKind kind);
std::optional<ConstraintKind> kind_from_name(std::string_view name);

struct ConstraintSpec {
	ConstraintKind kind;
	int param = 0;   // element for Member, bound for Card*/InterCardLe/SymdiffCardGe
	int blocks = 0;  // block count for PartitionLex

	std::uint32_t arity() const;
	void validate(std::uint32_t universe) const;
	std::string key() const;
};

// One conjunct of a (possibly merged) constraint, bound to a subset of
// the group's formal set variables. `formals` must be strictly ascending.
struct ConstraintPart {
	ConstraintSpec spec;
	std::vector<std::uint32_t> formals;
};

// Pointwise variable order: element-major, then variable rank, so for
// set variables u,v,w the Boolean order is u1,v1,w1,u2,v2,w2,...
inline BoolVarIndex pointwise_rank(std::uint32_t arity, std::uint32_t element,
								   std::uint32_t var) {
	return (element - 1) * arity + var;
}

// The order as a list of (variable index, element) pairs.
std::vector<std::pair<std::uint32_t, std::uint32_t>> pointwise_order(std::uint32_t arity,
																	 std::uint32_t universe);

// R(theta): conjunction of literals fixing every block variable of every
// set in theta. theta[j] is the subset assigned to formal variable j.
NodeRef encode_valuation(BddBuilder& builder, const std::vector<std::vector<int>>& theta,
						 std::uint32_t universe);

// Propagation workspace shared by all instances of one template. Exactly
// one propagation runs at a time, so per-node and per-rank stamp arrays
// can live with the graph instead of with each instance.
struct PropScratch {
	std::vector<std::uint64_t> visit;  // per node
	std::vector<std::uint8_t> save;    // per node; bit0 reach-FALSE, bit1 reach-TRUE
	std::vector<std::uint64_t> matters_fix0;  // per rank: waking on v:=0 is useful
	std::vector<std::uint64_t> matters_fix1;  // per rank: waking on v:=1 is useful
	std::vector<DomainBits> e;                // per rank, copy-in domain
	std::vector<DomainBits> eprime;           // per rank, supported values
	std::uint64_t time = 0;
};

struct ConstraintTemplate {
	StaticGraph graph;
	std::uint32_t arity = 0;
	std::uint32_t universe = 0;
	std::vector<std::vector<BoolVarIndex>> formal_blocks;  // [var][element-1] = rank
	std::vector<std::uint32_t> varset_pos;  // rank -> index into graph.varset, or npos
	bool is_false = false;
	std::string key;
	PropScratch scratch;

	static constexpr std::uint32_t npos = 0xffffffffu;
	std::uint32_t num_ranks() const { return arity * universe; }
	void init_runtime();
};

std::shared_ptr<ConstraintTemplate> build_template(const ConstraintSpec& spec,
												   std::uint32_t universe);
std::shared_ptr<ConstraintTemplate> conjoin_templates(const std::vector<ConstraintPart>& parts,
													  std::uint32_t group_arity,
													  std::uint32_t universe);

// Cache keyed by (parts, arity, N) so every instance of the same
// constraint shape shares one frozen graph.
class TemplateStore {
public:
	std::shared_ptr<ConstraintTemplate> get(const std::vector<ConstraintPart>& parts,
											std::uint32_t group_arity, std::uint32_t universe);
	std::shared_ptr<ConstraintTemplate> get(const ConstraintSpec& spec, std::uint32_t universe);
	std::size_t size() const { return cache_.size(); }

private:
	std::unordered_map<std::string, std::shared_ptr<ConstraintTemplate>> cache_;
};

}  // namespace setprop
