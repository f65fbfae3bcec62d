#include "msrcgr/alphabet.hpp"

#include "msrcgr/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace msrcgr {

const char* kind_name(Kind kind) noexcept {
    return kind == Kind::Dna ? "DNA" : "PROTEIN";
}

Kind parse_kind(std::string_view name) {
    if (name == "DNA" || name == "dna") return Kind::Dna;
    if (name == "PROTEIN" || name == "protein") return Kind::Protein;
    throw Error(ErrorCode::InvalidArgument, "unknown sequence kind '" + std::string(name) + "'");
}

std::string_view base_symbols(Kind kind) noexcept {
    return kind == Kind::Dna ? kDnaSymbols : kProteinSymbols;
}

namespace {

struct SymbolMaps {
    std::array<std::int8_t, 256> dna{};
    std::array<std::int8_t, 256> protein{};

    SymbolMaps() {
        dna.fill(-1);
        protein.fill(-1);
        auto fill = [](std::array<std::int8_t, 256>& map, std::string_view symbols) {
            for (std::size_t i = 0; i < symbols.size(); ++i) {
                const auto upper = static_cast<unsigned char>(symbols[i]);
                map[upper] = static_cast<std::int8_t>(i);
                map[upper - 'A' + 'a'] = static_cast<std::int8_t>(i);
            }
        };
        fill(dna, kDnaSymbols);
        fill(protein, kProteinSymbols);
    }
};

const SymbolMaps& symbol_maps() {
    static const SymbolMaps maps;
    return maps;
}

}  // namespace

int symbol_index(Kind kind, char c) noexcept {
    const auto& maps = symbol_maps();
    const auto& map = kind == Kind::Dna ? maps.dna : maps.protein;
    return map[static_cast<unsigned char>(c)];
}

std::uint64_t alphabet_size(Kind kind, unsigned k) {
    if (k == 0) throw Error(ErrorCode::InvalidAlphabet, "token length k must be at least 1");
    const std::uint64_t m = base_symbols(kind).size();
    std::uint64_t size = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (size > (std::uint64_t{1} << 40) / m)
            throw Error(ErrorCode::AlphabetTooLarge, "k-mer alphabet size overflows");
        size *= m;
    }
    return size;
}

Alphabet build_alphabet(Kind kind, unsigned k, AlphabetOptions options) {
    const std::uint64_t size = alphabet_size(kind, k);
    if (size > kMaxAlphabetSize && !options.allow_large)
        throw Error(ErrorCode::AlphabetTooLarge,
                    std::string(kind_name(kind)) + " alphabet at k=" + std::to_string(k) + " has " +
                        std::to_string(size) + " tokens (limit " + std::to_string(kMaxAlphabetSize) +
                        "); pass the large-alphabet override to allow it");
    Alphabet a;
    a.kind_ = kind;
    a.k_ = k;
    a.base_size_ = base_symbols(kind).size();
    a.size_ = size;
    return a;
}

std::string Alphabet::token(std::uint64_t index) const {
    if (index >= size_) throw Error(ErrorCode::InvalidToken, "token index out of range");
    const auto symbols = base_symbols(kind_);
    std::string out(k_, ' ');
    for (unsigned i = k_; i-- > 0;) {
        out[i] = symbols[index % base_size_];
        index /= base_size_;
    }
    return out;
}

std::vector<std::string> Alphabet::tokens() const {
    std::vector<std::string> out;
    out.reserve(size_);
    for (std::uint64_t i = 0; i < size_; ++i) out.push_back(token(i));
    return out;
}

std::uint64_t Alphabet::token_index(std::string_view token) const {
    if (token.size() != k_)
        throw Error(ErrorCode::InvalidToken,
                    "token '" + std::string(token) + "' has length " + std::to_string(token.size()) +
                        ", expected " + std::to_string(k_),
                    token.size() < k_ ? token.size() : k_);
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < token.size(); ++i) {
        const int s = symbol_index(kind_, token[i]);
        if (s < 0)
            throw Error(ErrorCode::InvalidToken,
                        "invalid " + std::string(kind_name(kind_)) + " symbol '" + std::string(1, token[i]) +
                            "' at position " + std::to_string(i),
                        i);
        index = index * base_size_ + static_cast<std::uint64_t>(s);
    }
    return index;
}

std::array<double, 2> corner_coordinates(std::uint64_t index, std::uint64_t alphabet_size, std::uint64_t q) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(index) / static_cast<double>(alphabet_size);
    return {snap_round_q_double(std::cos(angle), q), snap_round_q_double(std::sin(angle), q)};
}

namespace {

std::uint64_t grid_key(const mpz_class& gx, const mpz_class& gy, std::uint64_t q) {
    const std::uint64_t span = 2 * q + 1;
    return (gx.get_si() + static_cast<long>(q)) * span + static_cast<std::uint64_t>(gy.get_si() + static_cast<long>(q));
}

}  // namespace

CornerTable::CornerTable(Alphabet alphabet) : alphabet_(alphabet), q_(grid_modulus(alphabet.size())) {
    const std::uint64_t m = alphabet_.size();
    corners_.reserve(m);
    lookup_.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
        Point2 c{snap_round_q(std::cos(angle), q_), snap_round_q(std::sin(angle), q_)};
        const mpz_class gx = c.x.num() * (q_ / c.x.den());
        const mpz_class gy = c.y.num() * (q_ / c.y.den());
        lookup_.emplace(grid_key(gx, gy, q_), static_cast<std::uint32_t>(i));
        corners_.push_back(std::move(c));
    }
}

std::int64_t CornerTable::find(const Point2& p) const {
    const mpz_class qz(static_cast<unsigned long>(q_));
    if (!mpz_divisible_p(qz.get_mpz_t(), p.x.den().get_mpz_t()) ||
        !mpz_divisible_p(qz.get_mpz_t(), p.y.den().get_mpz_t()))
        return -1;
    const mpz_class gx = p.x.num() * (qz / p.x.den());
    const mpz_class gy = p.y.num() * (qz / p.y.den());
    const mpz_class limit(static_cast<unsigned long>(q_));
    if (abs(gx) > limit || abs(gy) > limit) return -1;
    const auto it = lookup_.find(grid_key(gx, gy, q_));
    if (it == lookup_.end()) return -1;
    return it->second;
}

CornerTable corner_points(const Alphabet& alphabet) {
    return CornerTable(alphabet);
}

std::shared_ptr<const CornerTable> shared_corner_table(Kind kind, unsigned k, AlphabetOptions options) {
    // Validate (and apply the cap) before touching the cache.
    const Alphabet alphabet = build_alphabet(kind, k, options);
    static std::mutex mutex;
    static std::map<std::pair<int, unsigned>, std::shared_ptr<const CornerTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{static_cast<int>(kind), k}];
    if (!slot) slot = std::make_shared<const CornerTable>(alphabet);
    return slot;
}

const FloatCorners& float_corners(Kind kind, unsigned k) {
    static std::mutex mutex;
    static std::map<std::pair<int, unsigned>, std::unique_ptr<FloatCorners>> cache;
    const std::uint64_t m = alphabet_size(kind, k);
    if (m > (std::uint64_t{1} << 24))
        throw Error(ErrorCode::AlphabetTooLarge, "alphabet too large for the fixed-precision corner cache");
    std::lock_guard lock(mutex);
    auto& slot = cache[{static_cast<int>(kind), k}];
    if (!slot) {
        auto table = std::make_unique<FloatCorners>();
        table->q = grid_modulus(m);
        table->x.resize(m);
        table->y.resize(m);
        for (std::uint64_t i = 0; i < m; ++i) {
            const auto c = corner_coordinates(i, m, table->q);
            table->x[i] = c[0];
            table->y[i] = c[1];
        }
        slot = std::move(table);
    }
    return *slot;
}

}  // namespace msrcgr
