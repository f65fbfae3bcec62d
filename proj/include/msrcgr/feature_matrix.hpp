#pragma once

#include "msrcgr/dataset.hpp"
#include "msrcgr/features.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace msrcgr {

// Labelled feature rows in CSR form. Dense blocks simply store every
// non-zero entry; tri-mer count rows stay sparse.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    explicit FeatureMatrix(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    std::size_t rows() const noexcept { return ids_.size(); }
    std::size_t cols() const noexcept { return columns_.size(); }

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }

    // (column, value) pairs must have strictly increasing columns.
    void add_sparse_row(std::string id, std::string label,
                        const std::vector<std::pair<std::uint32_t, double>>& entries);
    void add_dense_row(std::string id, std::string label, std::span<const double> values);

    struct RowView {
        std::span<const std::uint32_t> cols;
        std::span<const double> values;
    };
    RowView row(std::size_t r) const {
        const auto b = row_ptr_[r];
        const auto e = row_ptr_[r + 1];
        return {{col_idx_.data() + b, e - b}, {values_.data() + b, e - b}};
    }
    std::size_t nonzeros() const noexcept { return values_.size(); }

    DenseMatrix to_dense() const;

private:
    std::vector<std::string> ids_;
    std::vector<std::string> labels_;
    std::vector<std::string> columns_;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::uint32_t> col_idx_;
    std::vector<double> values_;
};

// Column statistics over all rows (zeros included), population std.
NormStats zscore_fit(const FeatureMatrix& x);

// CSV: "id,label,<columns...>", values with 12 significant digits.
// Lines starting with '#' are comments.
void write_feature_csv(const FeatureMatrix& m, const std::filesystem::path& path, std::string_view comment = {});
FeatureMatrix read_feature_csv(const std::filesystem::path& path);
FeatureMatrix parse_feature_csv(std::string_view text);

// Tri-mer vocabulary: lexicographically sorted tokens observed in training rows.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> tokens);

    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    std::size_t size() const noexcept { return tokens_.size(); }
    std::optional<std::uint32_t> find(std::string_view token) const;

    void write(const std::filesystem::path& path) const;
    static Vocabulary read(const std::filesystem::path& path);

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

inline constexpr unsigned kTrimerLength = 3;

struct TrimerFeatures {
    FeatureMatrix matrix;
    Vocabulary vocabulary;
    std::vector<std::string> warnings;
};

// Raw overlapping tri-mer counts. Without a vocabulary one is built from the
// given records; with one, unseen tri-mers are dropped.
TrimerFeatures trimer_features(const std::vector<SequenceRecord>& records,
                               const Vocabulary* vocabulary = nullptr);

FeatureMatrix cgr_features(const std::vector<SequenceRecord>& records, FeaturePath path = FeaturePath::Fast);

// Arithmetic mean over rows of an n x d matrix.
std::vector<double> mean_pool(const DenseMatrix& per_residue);

struct EmbeddingTable {
    std::size_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> rows;
};

// Pooled form "id,e1..ed" or per-residue form "id,t,e1..ed" (detected from
// the header); per-residue rows are mean-pooled per id.
EmbeddingTable read_embeddings_csv(const std::filesystem::path& path);
EmbeddingTable parse_embeddings_csv(std::string_view text);
void write_embeddings_csv(const EmbeddingTable& table, const std::vector<std::string>& id_order,
                          const std::filesystem::path& path);

// Reproducible signal-free embeddings: uniform in [-1, 1), seeded per id
// by FNV-1a(id) mixed with the seed.
EmbeddingTable random_embeddings(const std::vector<std::string>& ids, std::size_t dim, std::uint64_t seed);

FeatureMatrix embedding_features(const std::vector<SequenceRecord>& records, const EmbeddingTable& table);

// Horizontal concatenation; row counts and id order must agree.
FeatureMatrix fuse(const std::vector<const FeatureMatrix*>& blocks);

enum class FeatureSet { Kmer, Cgr, Embed, EmbedCgr, KmerCgr };

FeatureSet parse_feature_set(std::string_view name);
const char* feature_set_name(FeatureSet set) noexcept;
bool needs_embeddings(FeatureSet set) noexcept;
bool needs_vocabulary(FeatureSet set) noexcept;

struct FeaturizeResult {
    FeatureMatrix matrix;
    std::optional<Vocabulary> vocabulary;
    std::vector<std::string> warnings;
};

FeaturizeResult featurize(const std::vector<SequenceRecord>& records, FeatureSet set,
                          const Vocabulary* vocabulary = nullptr, const EmbeddingTable* embeddings = nullptr);

}  // namespace msrcgr
