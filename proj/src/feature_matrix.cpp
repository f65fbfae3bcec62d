#include "msrcgr/feature_matrix.hpp"

#include "msrcgr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace msrcgr {

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    return out;
}

// Splits on ',' without allocating.
void split_fields(std::string_view line, std::vector<std::string_view>& fields) {
    fields.clear();
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(std::string_view text, std::size_t line_no) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw Error(ErrorCode::Parse,
                    "line " + std::to_string(line_no) + ": bad number '" + std::string(text) + "'", line_no);
    return v;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        fn(line, line_no);
    }
}

void append_number(std::string& out, double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.12g", v);
    out.append(buf, static_cast<std::size_t>(n));
}

void write_comment(std::ostream& out, std::string_view comment) {
    if (comment.empty()) return;
    std::istringstream lines{std::string(comment)};
    for (std::string line; std::getline(lines, line);) out << '#' << line << '\n';
}

}  // namespace

void FeatureMatrix::add_sparse_row(std::string id, std::string label,
                                   const std::vector<std::pair<std::uint32_t, double>>& entries) {
    std::int64_t last = -1;
    for (const auto& [c, v] : entries) {
        if (c >= columns_.size() || static_cast<std::int64_t>(c) <= last)
            throw Error(ErrorCode::Dimension, "sparse row entries out of order or out of range");
        last = c;
        if (v == 0.0) continue;
        col_idx_.push_back(c);
        values_.push_back(v);
    }
    ids_.push_back(std::move(id));
    labels_.push_back(std::move(label));
    row_ptr_.push_back(values_.size());
}

void FeatureMatrix::add_dense_row(std::string id, std::string label, std::span<const double> values) {
    if (values.size() != columns_.size())
        throw Error(ErrorCode::Dimension, "row has " + std::to_string(values.size()) + " values, expected " +
                                              std::to_string(columns_.size()));
    for (std::size_t c = 0; c < values.size(); ++c) {
        if (values[c] == 0.0) continue;
        col_idx_.push_back(static_cast<std::uint32_t>(c));
        values_.push_back(values[c]);
    }
    ids_.push_back(std::move(id));
    labels_.push_back(std::move(label));
    row_ptr_.push_back(values_.size());
}

DenseMatrix FeatureMatrix::to_dense() const {
    DenseMatrix out(rows(), cols());
    for (std::size_t r = 0; r < rows(); ++r) {
        const auto view = row(r);
        for (std::size_t i = 0; i < view.cols.size(); ++i) out(r, view.cols[i]) = view.values[i];
    }
    return out;
}

NormStats zscore_fit(const FeatureMatrix& x) {
    const std::size_t d = x.cols();
    NormStats stats;
    stats.mean.assign(d, 0.0);
    stats.std.assign(d, 0.0);
    if (x.rows() == 0) return stats;
    const auto n = static_cast<double>(x.rows());
    std::vector<std::size_t> nnz(d, 0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto view = x.row(r);
        for (std::size_t i = 0; i < view.cols.size(); ++i) {
            stats.mean[view.cols[i]] += view.values[i];
            ++nnz[view.cols[i]];
        }
    }
    for (auto& m : stats.mean) m /= n;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto view = x.row(r);
        for (std::size_t i = 0; i < view.cols.size(); ++i) {
            const double dev = view.values[i] - stats.mean[view.cols[i]];
            stats.std[view.cols[i]] += dev * dev;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        const double zeros = n - static_cast<double>(nnz[j]);
        stats.std[j] = std::sqrt((stats.std[j] + zeros * stats.mean[j] * stats.mean[j]) / n);
    }
    return stats;
}

void write_feature_csv(const FeatureMatrix& m, const std::filesystem::path& path, std::string_view comment) {
    auto out = open_for_write(path);
    write_comment(out, comment);
    std::string line = "id,label";
    for (const auto& c : m.columns()) line += "," + c;
    out << line << '\n';
    std::vector<double> dense(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::fill(dense.begin(), dense.end(), 0.0);
        const auto view = m.row(r);
        for (std::size_t i = 0; i < view.cols.size(); ++i) dense[view.cols[i]] = view.values[i];
        line = m.ids()[r] + "," + m.labels()[r];
        for (const double v : dense) {
            line.push_back(',');
            append_number(line, v);
        }
        out << line << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

FeatureMatrix parse_feature_csv(std::string_view text) {
    FeatureMatrix m;
    bool have_header = false;
    std::vector<std::string_view> fields;
    std::vector<std::pair<std::uint32_t, double>> entries;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        split_fields(line, fields);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "id" || fields[1] != "label")
                throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": header must start with 'id,label'",
                            line_no);
            std::vector<std::string> columns(fields.begin() + 2, fields.end());
            m = FeatureMatrix(std::move(columns));
            have_header = true;
            return;
        }
        if (fields.size() != m.cols() + 2)
            throw Error(ErrorCode::Parse,
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(m.cols() + 2) +
                            " fields, found " + std::to_string(fields.size()),
                        line_no);
        entries.clear();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double v = parse_double(fields[c + 2], line_no);
            if (v != 0.0) entries.emplace_back(static_cast<std::uint32_t>(c), v);
        }
        m.add_sparse_row(std::string(fields[0]), std::string(fields[1]), entries);
    });
    if (!have_header) throw Error(ErrorCode::Parse, "feature CSV has no header");
    return m;
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
    return parse_feature_csv(slurp(path));
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    std::sort(tokens_.begin(), tokens_.end());
    tokens_.erase(std::unique(tokens_.begin(), tokens_.end()), tokens_.end());
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], static_cast<std::uint32_t>(i));
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view token) const {
    const auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Vocabulary::write(const std::filesystem::path& path) const {
    auto out = open_for_write(path);
    for (const auto& t : tokens_) out << t << '\n';
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

Vocabulary Vocabulary::read(const std::filesystem::path& path) {
    std::vector<std::string> tokens;
    for_each_line(slurp(path), [&](std::string_view line, std::size_t line_no) {
        if (line.size() != kTrimerLength || line.find(',') != std::string_view::npos)
            throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": bad vocabulary token", line_no);
        tokens.emplace_back(line);
    });
    return Vocabulary(std::move(tokens));
}

TrimerFeatures trimer_features(const std::vector<SequenceRecord>& records, const Vocabulary* vocabulary) {
    TrimerFeatures out;
    if (vocabulary) {
        out.vocabulary = *vocabulary;
    } else {
        std::set<std::string> seen;
        for (const auto& r : records)
            for (std::size_t t = 0; t + kTrimerLength <= r.residues.size(); ++t)
                seen.emplace(r.residues.substr(t, kTrimerLength));
        out.vocabulary = Vocabulary(std::vector<std::string>(seen.begin(), seen.end()));
    }
    std::vector<std::string> columns;
    columns.reserve(out.vocabulary.size());
    for (const auto& t : out.vocabulary.tokens()) columns.push_back("kmer_" + t);
    out.matrix = FeatureMatrix(std::move(columns));

    std::map<std::uint32_t, double> counts;
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (const auto& r : records) {
        counts.clear();
        if (r.residues.size() < kTrimerLength)
            out.warnings.push_back("record '" + r.id + "' is shorter than " + std::to_string(kTrimerLength) +
                                   " symbols; emitting a zero row");
        for (std::size_t t = 0; t + kTrimerLength <= r.residues.size(); ++t)
            if (const auto j = out.vocabulary.find(std::string_view(r.residues).substr(t, kTrimerLength)))
                counts[*j] += 1.0;
        entries.assign(counts.begin(), counts.end());
        out.matrix.add_sparse_row(r.id, label_name(r.label), entries);
    }
    return out;
}

FeatureMatrix cgr_features(const std::vector<SequenceRecord>& records, FeaturePath path) {
    FeatureMatrix m(cgr_feature_names());
    for (const auto& r : records) {
        const auto v = cgr_feature_vector(r.residues, r.kind, path, {.allow_large = true});
        m.add_dense_row(r.id, label_name(r.label), v);
    }
    return m;
}

std::vector<double> mean_pool(const DenseMatrix& per_residue) {
    if (per_residue.rows == 0) throw Error(ErrorCode::EmptyEmbedding, "cannot mean-pool an empty embedding");
    std::vector<double> out(per_residue.cols, 0.0);
    for (std::size_t r = 0; r < per_residue.rows; ++r)
        for (std::size_t c = 0; c < per_residue.cols; ++c) out[c] += per_residue(r, c);
    for (auto& v : out) v /= static_cast<double>(per_residue.rows);
    return out;
}

EmbeddingTable parse_embeddings_csv(std::string_view text) {
    EmbeddingTable table;
    bool have_header = false;
    bool per_residue = false;
    std::vector<std::string_view> fields;
    std::vector<std::string> order;
    std::unordered_map<std::string, DenseMatrix> grouped;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        split_fields(line, fields);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "id")
                throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": embedding header must start with 'id'",
                            line_no);
            per_residue = fields[1] == "t";
            table.dim = fields.size() - (per_residue ? 2 : 1);
            if (table.dim == 0)
                throw Error(ErrorCode::Parse, "embedding file declares no dimensions", line_no);
            have_header = true;
            return;
        }
        const std::size_t skip = per_residue ? 2 : 1;
        if (fields.size() != table.dim + skip)
            throw Error(ErrorCode::Parse,
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(table.dim + skip) +
                            " fields, found " + std::to_string(fields.size()),
                        line_no);
        std::string id(fields[0]);
        auto [it, inserted] = grouped.try_emplace(id, DenseMatrix(0, table.dim));
        if (inserted) order.push_back(id);
        else if (!per_residue)
            throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": duplicate embedding id '" + id + "'",
                        line_no);
        if (per_residue) parse_double(fields[1], line_no);
        auto& block = it->second;
        for (std::size_t c = 0; c < table.dim; ++c) block.data.push_back(parse_double(fields[c + skip], line_no));
        ++block.rows;
    });
    if (!have_header) throw Error(ErrorCode::Parse, "embedding CSV has no header");
    for (const auto& id : order) table.rows.emplace(id, mean_pool(grouped.at(id)));
    return table;
}

EmbeddingTable read_embeddings_csv(const std::filesystem::path& path) {
    return parse_embeddings_csv(slurp(path));
}

void write_embeddings_csv(const EmbeddingTable& table, const std::vector<std::string>& id_order,
                          const std::filesystem::path& path) {
    auto out = open_for_write(path);
    std::string line = "id";
    for (std::size_t j = 1; j <= table.dim; ++j) line += ",e" + std::to_string(j);
    out << line << '\n';
    for (const auto& id : id_order) {
        const auto it = table.rows.find(id);
        if (it == table.rows.end()) throw Error(ErrorCode::Alignment, "no embedding for id '" + id + "'");
        line = id;
        for (const double v : it->second) {
            line.push_back(',');
            append_number(line, v);
        }
        out << line << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

EmbeddingTable random_embeddings(const std::vector<std::string>& ids, std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be positive");
    EmbeddingTable table;
    table.dim = dim;
    for (const auto& id : ids) {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (const char c : id) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
        SplitMix64 rng(SplitMix64::mix(SplitMix64::mix(seed) ^ h));
        std::vector<double> row(dim);
        for (auto& v : row) v = 2.0 * rng.uniform() - 1.0;
        table.rows.insert_or_assign(id, std::move(row));
    }
    return table;
}

FeatureMatrix embedding_features(const std::vector<SequenceRecord>& records, const EmbeddingTable& table) {
    std::vector<std::string> columns;
    for (std::size_t j = 1; j <= table.dim; ++j) columns.push_back("e" + std::to_string(j));
    FeatureMatrix m(std::move(columns));
    for (const auto& r : records) {
        const auto it = table.rows.find(r.id);
        if (it == table.rows.end()) throw Error(ErrorCode::Alignment, "no embedding for record id '" + r.id + "'");
        m.add_dense_row(r.id, label_name(r.label), it->second);
    }
    return m;
}

FeatureMatrix fuse(const std::vector<const FeatureMatrix*>& blocks) {
    if (blocks.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to fuse");
    const FeatureMatrix& first = *blocks.front();
    std::vector<std::string> columns;
    for (const auto* b : blocks) {
        if (b->rows() != first.rows())
            throw Error(ErrorCode::Alignment, "feature blocks have " + std::to_string(first.rows()) + " and " +
                                                  std::to_string(b->rows()) + " rows");
        for (std::size_t r = 0; r < first.rows(); ++r)
            if (b->ids()[r] != first.ids()[r])
                throw Error(ErrorCode::Alignment, "feature blocks disagree at row " + std::to_string(r) + ": id '" +
                                                      b->ids()[r] + "' vs '" + first.ids()[r] + "'");
        columns.insert(columns.end(), b->columns().begin(), b->columns().end());
    }
    FeatureMatrix out(std::move(columns));
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (std::size_t r = 0; r < first.rows(); ++r) {
        entries.clear();
        std::uint32_t offset = 0;
        for (const auto* b : blocks) {
            const auto view = b->row(r);
            for (std::size_t i = 0; i < view.cols.size(); ++i) entries.emplace_back(offset + view.cols[i], view.values[i]);
            offset += static_cast<std::uint32_t>(b->cols());
        }
        out.add_sparse_row(first.ids()[r], first.labels()[r], entries);
    }
    return out;
}

FeatureSet parse_feature_set(std::string_view name) {
    if (name == "kmer") return FeatureSet::Kmer;
    if (name == "cgr") return FeatureSet::Cgr;
    if (name == "embed") return FeatureSet::Embed;
    if (name == "embed+cgr") return FeatureSet::EmbedCgr;
    if (name == "kmer+cgr") return FeatureSet::KmerCgr;
    throw Error(ErrorCode::InvalidArgument, "unknown feature set '" + std::string(name) +
                                                "' (expected kmer, cgr, embed, embed+cgr or kmer+cgr)");
}

const char* feature_set_name(FeatureSet set) noexcept {
    switch (set) {
        case FeatureSet::Kmer: return "kmer";
        case FeatureSet::Cgr: return "cgr";
        case FeatureSet::Embed: return "embed";
        case FeatureSet::EmbedCgr: return "embed+cgr";
        case FeatureSet::KmerCgr: return "kmer+cgr";
    }
    return "unknown";
}

bool needs_embeddings(FeatureSet set) noexcept {
    return set == FeatureSet::Embed || set == FeatureSet::EmbedCgr;
}

bool needs_vocabulary(FeatureSet set) noexcept {
    return set == FeatureSet::Kmer || set == FeatureSet::KmerCgr;
}

FeaturizeResult featurize(const std::vector<SequenceRecord>& records, FeatureSet set, const Vocabulary* vocabulary,
                          const EmbeddingTable* embeddings) {
    if (needs_embeddings(set) && !embeddings)
        throw Error(ErrorCode::InvalidArgument, std::string("feature set '") + feature_set_name(set) +
                                                    "' requires an embedding file");
    FeaturizeResult out;
    std::optional<FeatureMatrix> kmer_block, embed_block, cgr_block;
    if (needs_vocabulary(set)) {
        auto t = trimer_features(records, vocabulary);
        kmer_block = std::move(t.matrix);
        out.vocabulary = std::move(t.vocabulary);
        out.warnings = std::move(t.warnings);
    }
    if (needs_embeddings(set)) embed_block = embedding_features(records, *embeddings);
    if (set == FeatureSet::Cgr || set == FeatureSet::EmbedCgr || set == FeatureSet::KmerCgr)
        cgr_block = cgr_features(records);

    switch (set) {
        case FeatureSet::Kmer: out.matrix = std::move(*kmer_block); break;
        case FeatureSet::Cgr: out.matrix = std::move(*cgr_block); break;
        case FeatureSet::Embed: out.matrix = std::move(*embed_block); break;
        case FeatureSet::EmbedCgr: out.matrix = fuse({&*embed_block, &*cgr_block}); break;
        case FeatureSet::KmerCgr: out.matrix = fuse({&*kmer_block, &*cgr_block}); break;
    }
    return out;
}

}  // namespace msrcgr
