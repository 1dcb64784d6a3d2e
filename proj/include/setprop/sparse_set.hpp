#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "setprop/common.hpp"

namespace setprop {

enum class SparseVariant : std::uint8_t { Std, Mod };

// Backtrackable set of node ids in [0, capacity). Membership is
// O(1), insertion is O(1), and undoing any suffix of insertions is a
// single write to `members`.
//
// Std keeps the conventional representation where n is a member iff
// sparse[n] < members and dense[sparse[n]] == n. Mod additionally keeps
// dense[sparse[v]] == v for every v, so membership needs only the
// sparse[n] < members test at the cost of a swap on insertion.
class SparseSet {
public:
	using Checkpoint = std::uint32_t;

	SparseSet() = default;

	SparseSet(std::uint32_t capacity, SparseVariant variant)
			: sparse_(capacity), dense_(capacity), variant_(variant) {
		// Identity permutation satisfies the Mod invariant from the start.
		std::iota(sparse_.begin(), sparse_.end(), 0u);
		std::iota(dense_.begin(), dense_.end(), 0u);
	}

	bool member(std::uint32_t n) const {
		assert(n < sparse_.size());
		if (variant_ == SparseVariant::Mod) return sparse_[n] < members_;
		std::uint32_t s = sparse_[n];
		return s < members_ && dense_[s] == n;
	}

	// pre: !member(n)
	void insert(std::uint32_t n) {
		assert(n < sparse_.size());
		assert(!member(n));
		if (variant_ == SparseVariant::Std) {
			dense_[members_] = n;
			sparse_[n] = members_;
		} else {
			std::uint32_t slot = sparse_[n];
			std::uint32_t occupant = dense_[members_];
			std::swap(sparse_[n], sparse_[occupant]);
			std::swap(dense_[members_], dense_[slot]);
		}
		++members_;
	}

	Checkpoint mark() const { return members_; }

	void restore(Checkpoint cp) {
		if (cp > members_)
			throw BuildError("SparseSet::restore: checkpoint beyond current size");
		members_ = cp;
	}

	std::uint32_t size() const { return members_; }
	std::uint32_t capacity() const { return static_cast<std::uint32_t>(sparse_.size()); }
	SparseVariant variant() const { return variant_; }

	// Mod invariant check, for tests.
	bool dense_sparse_consistent() const {
		for (std::uint32_t v = 0; v < sparse_.size(); ++v)
			if (dense_[sparse_[v]] != v) return false;
		return true;
	}

private:
	std::vector<std::uint32_t> sparse_;
	std::vector<std::uint32_t> dense_;
	std::uint32_t members_ = 0;
	SparseVariant variant_ = SparseVariant::Mod;
};

}  // namespace setprop
