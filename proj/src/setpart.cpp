#include "see/setpart.hpp"

#include <algorithm>
#include <stdexcept>

namespace see::setpart {

bool SetPartition::valid() const {
    if (n < 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    int covered = 0;
    int prev_min = 0;
    for (const auto& block : blocks) {
        if (block.empty()) return false;
        if (block.front() <= prev_min) return false;  // block-min ordering
        prev_min = block.front();
        int prev = 0;
        for (int idx : block) {
            if (idx < 1 || idx > n || idx <= prev) return false;
            if (seen[static_cast<std::size_t>(idx)]) return false;
            seen[static_cast<std::size_t>(idx)] = 1;
            prev = idx;
            ++covered;
        }
    }
    return covered == n;
}

std::string SetPartition::to_string() const {
    std::string out = "{";
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        out += "{";
        for (std::size_t i = 0; i < blocks[b].size(); ++i) {
            if (i) out += ",";
            out += std::to_string(blocks[b][i]);
        }
        out += "}";
        if (b + 1 < blocks.size()) out += ",";
    }
    out += "}";
    return out;
}

namespace {

SetPartition from_growth_string(const std::vector<int>& rgs) {
    SetPartition p;
    p.n = static_cast<int>(rgs.size());
    int nblocks = 0;
    for (int b : rgs) nblocks = std::max(nblocks, b + 1);
    p.blocks.resize(static_cast<std::size_t>(nblocks));
    for (int i = 0; i < p.n; ++i)
        p.blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i + 1);
    // restricted growth already yields block-min order and sorted blocks
    return p;
}

}  // namespace

PartitionFamily enumerate_partitions(int n, bool allow_large) {
    if (n < 0) throw std::invalid_argument("enumerate_partitions: n must be >= 0");
    if (n > kEnumerationCap && !allow_large)
        throw std::invalid_argument("enumerate_partitions: n exceeds the cap of " +
                                    std::to_string(kEnumerationCap) +
                                    " (pass allow_large to override)");
    PartitionFamily family;
    family.n = n;
    if (n == 0) return family;

    // restricted growth strings: a[0] = 0, a[i] <= max(a[0..i-1]) + 1
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::vector<int> maxprefix(static_cast<std::size_t>(n), 0);
    while (true) {
        family.members.push_back(from_growth_string(a));
        int i = n - 1;
        while (i > 0) {
            if (a[static_cast<std::size_t>(i)] <= maxprefix[static_cast<std::size_t>(i - 1)]) break;
            --i;
        }
        if (i == 0) break;
        ++a[static_cast<std::size_t>(i)];
        maxprefix[static_cast<std::size_t>(i)] =
            std::max(maxprefix[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            a[static_cast<std::size_t>(j)] = 0;
            maxprefix[static_cast<std::size_t>(j)] = maxprefix[static_cast<std::size_t>(j - 1)];
        }
    }
    std::sort(family.members.begin(), family.members.end(),
              [](const SetPartition& x, const SetPartition& y) { return x.blocks < y.blocks; });
    return family;
}

PartitionFamily extend_recursive(const PartitionFamily& family) {
    if (family.n < 1 || family.members.empty())
        throw std::invalid_argument(
            "extend_recursive: needs a family over n >= 1 (base cases belong to enumerate_partitions)");
    for (const auto& p : family.members)
        if (p.n != family.n || !p.valid())
            throw std::invalid_argument("extend_recursive: malformed input family");

    PartitionFamily out;
    out.n = family.n + 1;
    out.members.reserve(family.members.size() * 2);
    const int elem = out.n;
    for (const auto& p : family.members) {
        SetPartition grown = p;
        grown.n = out.n;
        grown.blocks.push_back({elem});
        out.members.push_back(std::move(grown));
        for (std::size_t b = 0; b < p.blocks.size(); ++b) {
            SetPartition inserted = p;
            inserted.n = out.n;
            inserted.blocks[b].push_back(elem);
            out.members.push_back(std::move(inserted));
        }
    }
    return out;
}

PartitionFamily pair_partitions(const PartitionFamily& family) {
    PartitionFamily out;
    out.n = family.n;
    for (const auto& p : family.members) {
        bool ok = true;
        for (const auto& block : p.blocks)
            if (block.size() > 2) { ok = false; break; }
        if (ok) out.members.push_back(p);
    }
    return out;
}

int singleton_count(const SetPartition& p) {
    int singles = 0;
    for (const auto& block : p.blocks) {
        if (block.size() > 2)
            throw std::invalid_argument("singleton_count: partition has a block of size > 2");
        if (block.size() == 1) ++singles;
    }
    return singles;
}

}  // namespace see::setpart
