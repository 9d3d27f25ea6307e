#ifndef RDTK_TRACE_HPP
#define RDTK_TRACE_HPP

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdtk/cache_config.hpp"
#include "rdtk/errors.hpp"
#include "rdtk/rng.hpp"

namespace rdtk {

/// One memory reference. Addresses are raw byte addresses; line alignment
/// is applied downstream so the line size stays a free parameter.
struct TraceRecord {
    std::uint64_t address = 0;
    bool operator==(const TraceRecord&) const = default;
};

enum class TraceFormat { kBinaryU64Le, kHexText };

inline std::string to_string(TraceFormat f) {
    return f == TraceFormat::kBinaryU64Le ? "bin" : "hex";
}

inline TraceFormat parse_trace_format(const std::string& s) {
    if (s == "bin" || s == "binary" || s == "binary_u64_le") return TraceFormat::kBinaryU64Le;
    if (s == "hex" || s == "hex_text") return TraceFormat::kHexText;
    throw ConfigError("unknown trace format '" + s + "' (expected bin or hex)");
}

/// Drops the offset bits: address / line_size.
inline std::uint64_t line_address(std::uint64_t address, std::uint32_t line_size) {
    if (line_size == 0 || !is_power_of_two(line_size))
        throw ConfigError("line size must be a power of two, got " +
                          std::to_string(line_size));
    return address >> log2_exact(line_size);
}

// ---------------------------------------------------------------------------
// Synthetic traces

enum class SyntheticPattern { kSequential, kStrided, kLoop, kUniformRandom, kPointerChase };

inline std::string to_string(SyntheticPattern p) {
    switch (p) {
    case SyntheticPattern::kSequential: return "sequential";
    case SyntheticPattern::kStrided: return "strided";
    case SyntheticPattern::kLoop: return "loop";
    case SyntheticPattern::kUniformRandom: return "uniform_random";
    case SyntheticPattern::kPointerChase: return "pointer_chase";
    }
    return "?";
}

inline SyntheticPattern parse_pattern(const std::string& s) {
    if (s == "sequential") return SyntheticPattern::kSequential;
    if (s == "strided") return SyntheticPattern::kStrided;
    if (s == "loop") return SyntheticPattern::kLoop;
    if (s == "uniform_random" || s == "random") return SyntheticPattern::kUniformRandom;
    if (s == "pointer_chase" || s == "chase") return SyntheticPattern::kPointerChase;
    throw ConfigError("unknown synthetic pattern '" + s + "'");
}

// sequential/loop/pointer_chase emit 64-byte-line-granular addresses.
inline constexpr std::uint64_t kSyntheticLineBytes = 64;

struct SyntheticSpec {
    SyntheticPattern pattern = SyntheticPattern::kSequential;
    std::uint64_t length = 0;      // number of references
    std::uint64_t working_set = 0; // bytes (loop, uniform_random)
    std::uint64_t stride = kSyntheticLineBytes; // bytes (strided)
    std::uint64_t nodes = 0;       // pointer_chase
    std::uint64_t seed = 0;

    bool operator==(const SyntheticSpec&) const = default;
};

/// Deterministic generator: the same spec always yields the identical
/// sequence, byte for byte.
inline std::vector<TraceRecord> gen_synthetic(const SyntheticSpec& spec) {
    std::vector<TraceRecord> out;
    out.reserve(spec.length);
    SplitMix64 rng(spec.seed);
    switch (spec.pattern) {
    case SyntheticPattern::kSequential:
        for (std::uint64_t i = 0; i < spec.length; ++i)
            out.push_back({i * kSyntheticLineBytes});
        break;
    case SyntheticPattern::kStrided:
        if (spec.stride == 0) throw ConfigError("strided pattern needs a nonzero stride");
        for (std::uint64_t i = 0; i < spec.length; ++i)
            out.push_back({i * spec.stride});
        break;
    case SyntheticPattern::kLoop: {
        const std::uint64_t lines = spec.working_set / kSyntheticLineBytes;
        if (lines == 0)
            throw ConfigError("loop pattern needs a working set of at least " +
                              std::to_string(kSyntheticLineBytes) + " bytes");
        for (std::uint64_t i = 0; i < spec.length; ++i)
            out.push_back({(i % lines) * kSyntheticLineBytes});
        break;
    }
    case SyntheticPattern::kUniformRandom:
        if (spec.working_set == 0)
            throw ConfigError("uniform_random pattern needs a nonzero working set");
        for (std::uint64_t i = 0; i < spec.length; ++i)
            out.push_back({rng.next_below(spec.working_set)});
        break;
    case SyntheticPattern::kPointerChase: {
        if (spec.nodes == 0) throw ConfigError("pointer_chase pattern needs nodes >= 1");
        // Sattolo shuffle: a single cycle visiting every node.
        std::vector<std::uint64_t> next_node(spec.nodes);
        for (std::uint64_t i = 0; i < spec.nodes; ++i) next_node[i] = i;
        for (std::uint64_t i = spec.nodes - 1; i > 0; --i) {
            const std::uint64_t j = rng.next_below(i);
            std::swap(next_node[i], next_node[j]);
        }
        std::uint64_t node = 0;
        for (std::uint64_t i = 0; i < spec.length; ++i) {
            out.push_back({node * kSyntheticLineBytes});
            node = next_node[node];
        }
        break;
    }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trace files
//
// Binary format: little-endian unsigned 64-bit addresses, no header.
// Hex format: one address per line as 0x-prefixed lowercase hex.

inline void write_trace(const std::filesystem::path& path,
                        std::span<const TraceRecord> records, TraceFormat format) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    if (format == TraceFormat::kBinaryU64Le) {
        for (const auto& r : records) {
            char buf[8];
            for (int b = 0; b < 8; ++b)
                buf[b] = static_cast<char>((r.address >> (8 * b)) & 0xff);
            os.write(buf, 8);
        }
    } else {
        char buf[32];
        for (const auto& r : records) {
            auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), r.address, 16);
            os << "0x" << std::string_view(buf, end) << '\n';
        }
    }
    if (!os) throw IoError("write to '" + path.string() + "' failed");
}

/// Streaming trace file reader. Usable as a single-pass input range, so a
/// trace never has to fit in memory to be profiled.
class TraceFileReader {
public:
    TraceFileReader(const std::filesystem::path& path, TraceFormat format)
        : is_(path, std::ios::binary), format_(format), path_(path.string()) {
        if (!is_) throw IoError("cannot open trace file '" + path_ + "'");
    }

    std::optional<TraceRecord> next() {
        if (format_ == TraceFormat::kBinaryU64Le) {
            char buf[8];
            is_.read(buf, 8);
            const auto got = is_.gcount();
            if (got == 0) return std::nullopt;
            if (got != 8)
                throw IoError("truncated binary trace '" + path_ + "': trailing " +
                              std::to_string(got) + " bytes");
            std::uint64_t addr = 0;
            for (int b = 0; b < 8; ++b)
                addr |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[b]))
                        << (8 * b);
            return TraceRecord{addr};
        }
        std::string line;
        while (std::getline(is_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::string_view v(line);
            if (v.starts_with("0x") || v.starts_with("0X")) v.remove_prefix(2);
            std::uint64_t addr = 0;
            auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), addr, 16);
            if (ec != std::errc{} || ptr != v.data() + v.size())
                throw IoError("malformed hex address in '" + path_ + "' line " +
                              std::to_string(line_no_));
            return TraceRecord{addr};
        }
        return std::nullopt;
    }

    struct sentinel {};

    class iterator {
    public:
        using value_type = TraceRecord;
        using difference_type = std::ptrdiff_t;
        using iterator_concept = std::input_iterator_tag;

        iterator() = default;
        explicit iterator(TraceFileReader* r) : reader_(r) { advance(); }

        const TraceRecord& operator*() const { return *current_; }
        iterator& operator++() {
            advance();
            return *this;
        }
        void operator++(int) { advance(); }
        bool operator==(sentinel) const { return !current_.has_value(); }

    private:
        void advance() { current_ = reader_->next(); }
        TraceFileReader* reader_ = nullptr;
        std::optional<TraceRecord> current_;
    };

    iterator begin() { return iterator(this); }
    sentinel end() { return {}; }

private:
    std::ifstream is_;
    TraceFormat format_;
    std::string path_;
    std::size_t line_no_ = 0;
};

/// Reads a whole trace into memory (convenience for multi-pass workflows).
inline std::vector<TraceRecord> read_trace(const std::filesystem::path& path,
                                           TraceFormat format) {
    TraceFileReader reader(path, format);
    std::vector<TraceRecord> out;
    while (auto r = reader.next()) out.push_back(*r);
    return out;
}

} // namespace rdtk

#endif // RDTK_TRACE_HPP
