#pragma once

#include "msrcgr/alphabet.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace msrcgr {

enum class Label : int {
    DnaUniform = 0,
    DnaAtRich,
    DnaGcRich,
    DnaRepetitive,
    ProtHydrophobic,
    ProtHydrophilic,
    ProtMixed,
};

inline constexpr std::size_t kLabelCount = 7;
inline constexpr std::array<Label, kLabelCount> kAllLabels{
    Label::DnaUniform,      Label::DnaAtRich,       Label::DnaGcRich, Label::DnaRepetitive,
    Label::ProtHydrophobic, Label::ProtHydrophilic, Label::ProtMixed,
};

const char* label_name(Label label) noexcept;
Label parse_label(std::string_view name);
Kind label_kind(Label label) noexcept;

struct SequenceRecord {
    std::string id;
    Label label = Label::DnaUniform;
    Kind kind = Kind::Dna;
    std::string residues;

    friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

// Inclusive length ranges per kind.
inline constexpr std::size_t kDnaMinLength = 50;
inline constexpr std::size_t kDnaMaxLength = 201;
inline constexpr std::size_t kProteinMinLength = 30;
inline constexpr std::size_t kProteinMaxLength = 150;

// SplitMix64. Used both as the stream generator and to derive per-record seeds,
// so datasets depend only on (seed, label, index).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }
    // Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;

    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// mix(mix(mix(seed) ^ (label + 1)) ^ (index + 1))
std::uint64_t record_seed(std::uint64_t seed, Label label, std::uint64_t index) noexcept;

struct GeneratorConfig {
    std::string hydrophobic = "AVLIMFWCP";
    std::string polar = "DEKRHSTNQY";
    double hydrophobic_mass = 0.64;
    double polar_mass = 0.72;
    // Repetitive records tile one motif drawn from a dataset-wide pool.
    std::size_t motif_pool = 16;
};

// Per-symbol probabilities (in base symbol order) for the composition classes.
// The repetitive class has no fixed composition and returns an empty vector.
std::vector<double> class_composition(Label label, const GeneratorConfig& config = {});

// The seeded pool of 4-mer motifs shared by all repetitive records.
std::vector<std::string> repeat_motifs(std::uint64_t seed, const GeneratorConfig& config = {});

SequenceRecord generate_record(std::uint64_t seed, Label label, std::uint64_t index,
                               const GeneratorConfig& config = {});

// per_class records for each of the seven labels, ordered by label then index.
std::vector<SequenceRecord> generate_dataset(std::uint64_t seed, std::size_t per_class = 1000,
                                             const GeneratorConfig& config = {});

struct SplitDataset {
    std::vector<SequenceRecord> train;
    std::vector<SequenceRecord> test;
    // Labels whose test share came out empty.
    std::vector<Label> empty_test_classes;
};

// Per label: seeded Fisher-Yates shuffle, first ceil(ratio * count) to train.
// Output keeps the input order within each side.
SplitDataset stratified_split(const std::vector<SequenceRecord>& records, double ratio, std::uint64_t seed);

// Headers are ">id|label|kind"; bodies wrap at 60 columns. Lines starting
// with ';' are comments.
std::vector<SequenceRecord> read_fasta(const std::filesystem::path& path);
std::vector<SequenceRecord> parse_fasta(std::string_view text);
void write_fasta(const std::vector<SequenceRecord>& records, const std::filesystem::path& path,
                 std::string_view comment = {});
std::string format_fasta(const std::vector<SequenceRecord>& records, std::string_view comment = {});

inline constexpr std::size_t kFastaLineWidth = 60;

}  // namespace msrcgr
