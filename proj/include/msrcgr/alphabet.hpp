#pragma once

#include "msrcgr/rational.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace msrcgr {

enum class Kind { Dna, Protein };

const char* kind_name(Kind kind) noexcept;
Kind parse_kind(std::string_view name);

// Base symbol orders. DNA follows the A,T,G,C corner layout; protein residues
// are the 20 standard one-letter codes in alphabetical order.
inline constexpr std::string_view kDnaSymbols = "ATGC";
inline constexpr std::string_view kProteinSymbols = "ACDEFGHIKLMNPQRSTVWY";

std::string_view base_symbols(Kind kind) noexcept;

// Maps an (upper- or lower-case) character to its base index, or -1.
int symbol_index(Kind kind, char c) noexcept;

// Extended alphabets above this size need an explicit override.
inline constexpr std::uint64_t kMaxAlphabetSize = 65536;

struct AlphabetOptions {
    bool allow_large = false;
};

// All m^k tokens of length k over the base order, lexicographically ranked.
// Tokens are materialised on demand; rank <-> string is base-m positional.
class Alphabet {
public:
    Kind kind() const noexcept { return kind_; }
    unsigned k() const noexcept { return k_; }
    std::uint64_t base_size() const noexcept { return base_size_; }
    std::uint64_t size() const noexcept { return size_; }

    std::string token(std::uint64_t index) const;
    std::vector<std::string> tokens() const;
    std::uint64_t token_index(std::string_view token) const;

    friend Alphabet build_alphabet(Kind, unsigned, AlphabetOptions);

private:
    Kind kind_ = Kind::Dna;
    unsigned k_ = 1;
    std::uint64_t base_size_ = 4;
    std::uint64_t size_ = 4;
};

// Size of the k-mer alphabet without building it; throws if it overflows.
std::uint64_t alphabet_size(Kind kind, unsigned k);

Alphabet build_alphabet(Kind kind, unsigned k, AlphabetOptions options = {});

inline std::uint64_t token_index(const Alphabet& alphabet, std::string_view token) {
    return alphabet.token_index(token);
}

// Exact corner points c_i on the q-grid, plus a reverse lookup keyed by the
// integer grid coordinates (q*x, q*y).
class CornerTable {
public:
    explicit CornerTable(Alphabet alphabet);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::uint64_t q() const noexcept { return q_; }
    std::size_t size() const noexcept { return corners_.size(); }
    const Point2& operator[](std::size_t i) const { return corners_[i]; }
    const std::vector<Point2>& corners() const noexcept { return corners_; }

    // Index of the corner equal to p, or -1 when p is not a corner.
    std::int64_t find(const Point2& p) const;

private:
    Alphabet alphabet_;
    std::uint64_t q_;
    std::vector<Point2> corners_;
    std::unordered_map<std::uint64_t, std::uint32_t> lookup_;
};

CornerTable corner_points(const Alphabet& alphabet);

// Process-wide immutable table for (kind, k); built once, shareable across threads.
std::shared_ptr<const CornerTable> shared_corner_table(Kind kind, unsigned k, AlphabetOptions options = {});

// Double-precision corner coordinates (exact copies of the grid values).
// Not subject to the size cap; used by the fixed-precision feature path.
struct FloatCorners {
    std::uint64_t q = 0;
    std::vector<double> x;
    std::vector<double> y;
};

const FloatCorners& float_corners(Kind kind, unsigned k);

// Angle-based corner i of an M-symbol alphabet, as doubles on the q-grid.
std::array<double, 2> corner_coordinates(std::uint64_t index, std::uint64_t alphabet_size, std::uint64_t q);

}  // namespace msrcgr
