#pragma once

#include <string>
#include <vector>

namespace see::setpart {

/// A partition of {1,...,n} into disjoint nonempty blocks.
///
/// Canonical form: indices strictly increasing inside each block and blocks
/// ordered by their minima.
struct SetPartition {
    int n = 0;
    std::vector<std::vector<int>> blocks;

    int block_count() const { return static_cast<int>(blocks.size()); }
    bool valid() const;
    std::string to_string() const;

    bool operator==(const SetPartition& other) const = default;
};

struct PartitionFamily {
    int n = 0;
    std::vector<SetPartition> members;

    std::size_t size() const { return members.size(); }
};

inline constexpr int kEnumerationCap = 12;  // Bell(12) ~ 4.2e6

/// All partitions of {1..n}, canonical, sorted lexicographically on the
/// block lists.  n = 0 yields the empty family.
PartitionFamily enumerate_partitions(int n, bool allow_large = false);

/// Builds the partitions of {1..n+1} from those of {1..n}: append {n+1} as a
/// singleton, or insert n+1 into each existing block.  Input must be a
/// nonempty, structurally valid family (n >= 1).
PartitionFamily extend_recursive(const PartitionFamily& family);

/// Subfamily whose members have every block of size <= 2.
PartitionFamily pair_partitions(const PartitionFamily& family);

/// Number of singleton blocks of a partition with all blocks of size <= 2.
/// Equals 2 * #blocks - n.
int singleton_count(const SetPartition& p);

}  // namespace see::setpart
