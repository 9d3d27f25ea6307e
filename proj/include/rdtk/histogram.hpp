#ifndef RDTK_HISTOGRAM_HPP
#define RDTK_HISTOGRAM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace rdtk {

// Distances larger than the cutoff are folded into the last bin; the cutoff
// bin therefore aggregates every finite distance >= cutoff.
inline constexpr std::size_t kDefaultCutoff = 1024;

/// Distance histogram with bins 0..=cutoff plus a separate first-touch
/// (infinite distance) counter. Counts are integral while profiling and
/// real-valued once the model starts producing expected counts.
template <class Count>
class BasicHistogram {
public:
    explicit BasicHistogram(std::size_t cutoff = kDefaultCutoff)
        : bins_(cutoff + 1, Count{}) {}

    std::size_t cutoff() const { return bins_.size() - 1; }

    void add(std::uint64_t distance, Count weight = Count{1}) {
        bins_[std::min<std::uint64_t>(distance, cutoff())] += weight;
    }
    void add_cold(Count weight = Count{1}) { cold_ += weight; }

    Count& operator[](std::size_t bin) { return bins_[bin]; }
    const Count& operator[](std::size_t bin) const { return bins_[bin]; }

    const std::vector<Count>& bins() const { return bins_; }
    std::vector<Count>& bins() { return bins_; }

    Count cold() const { return cold_; }
    Count& cold() { return cold_; }

    Count finite_total() const {
        return std::accumulate(bins_.begin(), bins_.end(), Count{});
    }
    Count total() const { return finite_total() + cold_; }

    bool operator==(const BasicHistogram&) const = default;

private:
    std::vector<Count> bins_;
    Count cold_{};
};

using CountHistogram = BasicHistogram<std::uint64_t>;
using RealHistogram = BasicHistogram<double>;

inline RealHistogram to_real(const CountHistogram& h) {
    RealHistogram out(h.cutoff());
    for (std::size_t i = 0; i < h.bins().size(); ++i)
        out[i] = static_cast<double>(h[i]);
    out.cold() = static_cast<double>(h.cold());
    return out;
}

/// Square count matrix indexed [reuse distance][second distance], both
/// clamped to the cutoff. Lower-triangular by construction: the second
/// index (stack distance, or hit count) never exceeds the first.
class TriangularCounts {
public:
    explicit TriangularCounts(std::size_t cutoff = kDefaultCutoff)
        : dim_(cutoff + 1), cells_(dim_ * dim_, 0) {}

    std::size_t cutoff() const { return dim_ - 1; }
    std::size_t dim() const { return dim_; }

    std::uint64_t& at(std::size_t i, std::size_t j) { return cells_[i * dim_ + j]; }
    const std::uint64_t& at(std::size_t i, std::size_t j) const {
        return cells_[i * dim_ + j];
    }

    std::uint64_t row_sum(std::size_t i) const {
        const auto* row = cells_.data() + i * dim_;
        return std::accumulate(row, row + dim_, std::uint64_t{0});
    }

    bool is_lower_triangular() const {
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i + 1; j < dim_; ++j)
                if (at(i, j) != 0) return false;
        return true;
    }

    bool operator==(const TriangularCounts&) const = default;

private:
    std::size_t dim_;
    std::vector<std::uint64_t> cells_;
};

// Both locality tables share the shape and invariants; they differ only in
// what the second index means (stack distance vs. in-epoch hit count).
using RstTable = TriangularCounts;
using HitRdhTable = TriangularCounts;

} // namespace rdtk

#endif // RDTK_HISTOGRAM_HPP
