#pragma once

#include "msrcgr/alphabet.hpp"
#include "msrcgr/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace msrcgr {

inline const std::vector<unsigned> kDefaultScales{1, 2, 3, 4};

// One scale of the exact CGR encoding: p_0 = origin and
// p_t = (p_{t-1} + c[token_t]) / 2 for t = 1..n_k.
struct Trajectory {
    Kind kind = Kind::Dna;
    unsigned scale = 1;
    std::size_t source_length = 0;        // n
    std::vector<Point2> points;           // n_k + 1 points
    std::vector<std::uint64_t> tokens;    // n_k token indices

    std::size_t steps() const noexcept { return points.empty() ? 0 : points.size() - 1; }
};

// Sliding windows of length k, stride 1.
std::vector<std::string> kmer_stream(std::string_view sequence, unsigned k);

// Token indices of the k-mer stream under the table's alphabet.
// Invalid symbols raise InvalidToken with their sequence position.
std::vector<std::uint64_t> kmer_indices(std::string_view sequence, const Alphabet& alphabet);

Trajectory encode_scale(std::string_view sequence, unsigned k, const CornerTable& corners);

std::map<unsigned, Trajectory> encode_multiscale(std::string_view sequence, Kind kind,
                                                 const std::vector<unsigned>& scales = kDefaultScales,
                                                 AlphabetOptions options = {});

// Exact inverse of encode_scale. Recovers every corner as 2 p_t - p_{t-1};
// for k > 1 the k-mers are checked for (k-1)-overlap and stitched together.
std::string decode(const Trajectory& trajectory, const CornerTable& corners);

struct PrecisionReport {
    mpz_class max_denominator;
    mpz_class bound;  // q * 2^{n_k}
    bool satisfied = true;  // every den(p_t) divides q * 2^t
};

PrecisionReport check_precision_bound(const Trajectory& trajectory, std::uint64_t q);

// {"scale":k,"n":n,"points":[["num/den","num/den"],...],"tokens":[...]}
std::string trajectory_to_json(const Trajectory& trajectory, const Alphabet& alphabet);

// Parses the export above. Tokens, when present, are validated against the
// alphabet; points are not checked (decode does that).
Trajectory trajectory_from_json(std::string_view json, Kind kind, AlphabetOptions options = {});

}  // namespace msrcgr
