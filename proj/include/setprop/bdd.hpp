#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <utility>
#include <vector>

#include "setprop/common.hpp"

namespace setprop {

using BoolVarIndex = std::uint32_t;
inline constexpr BoolVarIndex no_var = 0xffffffffu;

struct NodeRef {
	std::uint32_t id = 0;
	friend bool operator==(NodeRef a, NodeRef b) { return a.id == b.id; }
	friend bool operator!=(NodeRef a, NodeRef b) { return a.id != b.id; }
	bool terminal() const { return id <= 1; }
	bool is_false() const { return id == 0; }
	bool is_true() const { return id == 1; }
};

inline constexpr NodeRef bdd_false{0};
inline constexpr NodeRef bdd_true{1};

// Immutable array form of one BDD, used for propagation after the build
// arena is dropped. Node ids 0 and 1 are the FALSE/TRUE terminals;
// internal nodes follow in an order where children precede parents, so
// plain arrays indexed by node id serve as memo tables.
struct StaticGraph {
	std::vector<BoolVarIndex> var;  // var[0], var[1] are no_var
	std::vector<std::uint32_t> low;
	std::vector<std::uint32_t> high;
	std::uint32_t root = 1;
	std::vector<BoolVarIndex> varset;  // sorted, == VAR(root)

	std::uint32_t node_count() const { return static_cast<std::uint32_t>(var.size()) - 2; }
	bool trivial_true() const { return root == 1; }

	// One line per internal node: `node <id> var=<v> f=<id> t=<id>`.
	void dump(std::ostream& os) const;
};

// Hash-consed BDD arena. All nodes built through one builder share a
// variable order given by the numeric order of BoolVarIndex. The arena
// is append-only; there is no garbage collection, callers drop the whole
// builder once the graphs they need are frozen.
class BddBuilder {
public:
	explicit BddBuilder(std::size_t node_limit = std::size_t(1) << 24);

	// Canonical node constructor: collapses redundant tests (f == t) and
	// hash-conses structurally equal nodes. Children must be terminals or
	// labelled with strictly larger variables.
	NodeRef mk(BoolVarIndex v, NodeRef f, NodeRef t);

	NodeRef literal(BoolVarIndex v, bool sign) {
		return sign ? mk(v, bdd_false, bdd_true) : mk(v, bdd_true, bdd_false);
	}

	NodeRef apply_and(NodeRef a, NodeRef b);
	NodeRef apply_or(NodeRef a, NodeRef b);
	NodeRef negate(NodeRef a);

	// Existential quantification over a set of variables.
	NodeRef exists(NodeRef a, const std::vector<BoolVarIndex>& vars);

	BoolVarIndex var(NodeRef n) const { return nodes_[n.id].var; }
	NodeRef low(NodeRef n) const { return NodeRef{nodes_[n.id].low}; }
	NodeRef high(NodeRef n) const { return NodeRef{nodes_[n.id].high}; }
	std::size_t num_nodes() const { return nodes_.size() - 2; }

	// VAR(a): variables labelling some node reachable from a, sorted.
	std::vector<BoolVarIndex> support(NodeRef a) const;

	// Variables taking the same value in every model of a, with that value.
	// pre: a != FALSE. Linear scan over the graph.
	std::vector<std::pair<BoolVarIndex, bool>> fixed_vars(NodeRef a) const;

	// pre: a != FALSE (a false constraint is rejected upstream).
	StaticGraph freeze(NodeRef a) const;

	template <class ValueOf>
	bool evaluate(NodeRef n, ValueOf&& value_of) const {
		while (!n.terminal()) n = value_of(var(n)) ? high(n) : low(n);
		return n.is_true();
	}

private:
	struct Node {
		BoolVarIndex var;
		std::uint32_t low, high;
	};
	struct NodeKey {
		BoolVarIndex var;
		std::uint32_t low, high;
		bool operator==(const NodeKey&) const = default;
	};
	struct NodeKeyHash {
		std::size_t operator()(const NodeKey& k) const {
			std::uint64_t h = k.var;
			h = h * 0x9e3779b97f4a7c15ull + k.low;
			h = h * 0x9e3779b97f4a7c15ull + k.high;
			return static_cast<std::size_t>(h ^ (h >> 32));
		}
	};

	enum class Op { And, Or };
	NodeRef apply(Op op, NodeRef a, NodeRef b);

	std::vector<Node> nodes_;
	std::size_t limit_;
	std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash> unique_;
	std::unordered_map<std::uint64_t, std::uint32_t> and_cache_;
	std::unordered_map<std::uint64_t, std::uint32_t> or_cache_;
	std::unordered_map<std::uint32_t, std::uint32_t> not_cache_;
};

}  // namespace setprop
