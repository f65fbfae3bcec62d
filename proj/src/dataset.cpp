#include "msrcgr/dataset.hpp"

#include "msrcgr/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace msrcgr {

const char* label_name(Label label) noexcept {
    switch (label) {
        case Label::DnaUniform: return "DNA_UNIFORM";
        case Label::DnaAtRich: return "DNA_AT_RICH";
        case Label::DnaGcRich: return "DNA_GC_RICH";
        case Label::DnaRepetitive: return "DNA_REPETITIVE";
        case Label::ProtHydrophobic: return "PROT_HYDROPHOBIC";
        case Label::ProtHydrophilic: return "PROT_HYDROPHILIC";
        case Label::ProtMixed: return "PROT_MIXED";
    }
    return "UNKNOWN";
}

Label parse_label(std::string_view name) {
    for (const Label l : kAllLabels)
        if (name == label_name(l)) return l;
    throw Error(ErrorCode::Parse, "unknown label '" + std::string(name) + "'");
}

Kind label_kind(Label label) noexcept {
    return static_cast<int>(label) <= static_cast<int>(Label::DnaRepetitive) ? Kind::Dna : Kind::Protein;
}

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do v = next();
    while (v >= limit);
    return v % bound;
}

std::uint64_t record_seed(std::uint64_t seed, Label label, std::uint64_t index) noexcept {
    std::uint64_t h = SplitMix64::mix(seed);
    h = SplitMix64::mix(h ^ (static_cast<std::uint64_t>(label) + 1));
    return SplitMix64::mix(h ^ (index + 1));
}

namespace {

std::vector<double> favoured_mass(std::string_view symbols, std::string_view favoured, double mass) {
    const auto n_fav = static_cast<double>(favoured.size());
    const auto n_rest = static_cast<double>(symbols.size() - favoured.size());
    std::vector<double> p(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i)
        p[i] = favoured.find(symbols[i]) != std::string_view::npos ? mass / n_fav : (1.0 - mass) / n_rest;
    return p;
}

void check_residue_set(std::string_view set) {
    if (set.empty() || set.size() >= kProteinSymbols.size())
        throw Error(ErrorCode::InvalidArgument, "residue set must be a non-empty proper subset");
    for (const char c : set)
        if (kProteinSymbols.find(c) == std::string_view::npos || std::count(set.begin(), set.end(), c) != 1)
            throw Error(ErrorCode::InvalidArgument, "bad residue '" + std::string(1, c) + "' in residue set");
}

char draw(SplitMix64& rng, std::string_view symbols, const std::vector<double>& p) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        acc += p[i];
        if (u < acc) return symbols[i];
    }
    return symbols.back();
}

}  // namespace

std::vector<double> class_composition(Label label, const GeneratorConfig& sets) {
    switch (label) {
        // Base order A,T,G,C.
        case Label::DnaUniform: return {0.25, 0.25, 0.25, 0.25};
        case Label::DnaAtRich: return {0.40, 0.40, 0.10, 0.10};
        case Label::DnaGcRich: return {0.10, 0.10, 0.40, 0.40};
        case Label::DnaRepetitive: return {};
        case Label::ProtHydrophobic:
            check_residue_set(sets.hydrophobic);
            return favoured_mass(kProteinSymbols, sets.hydrophobic, sets.hydrophobic_mass);
        case Label::ProtHydrophilic:
            check_residue_set(sets.polar);
            return favoured_mass(kProteinSymbols, sets.polar, sets.polar_mass);
        case Label::ProtMixed: return std::vector<double>(kProteinSymbols.size(), 1.0 / 20.0);
    }
    return {};
}

std::vector<std::string> repeat_motifs(std::uint64_t seed, const GeneratorConfig& config) {
    if (config.motif_pool == 0) throw Error(ErrorCode::InvalidArgument, "motif pool must not be empty");
    // Fixed stream tag so the pool never collides with a record stream.
    SplitMix64 rng(SplitMix64::mix(SplitMix64::mix(seed) ^ 0x4D4F544946504F4FULL));
    std::vector<std::string> pool(config.motif_pool);
    for (auto& motif : pool)
        for (int i = 0; i < 4; ++i) motif.push_back(kDnaSymbols[rng.below(kDnaSymbols.size())]);
    return pool;
}

SequenceRecord generate_record(std::uint64_t seed, Label label, std::uint64_t index, const GeneratorConfig& sets) {
    SplitMix64 rng(record_seed(seed, label, index));
    SequenceRecord rec;
    rec.label = label;
    rec.kind = label_kind(label);
    rec.id = std::string(label_name(label)) + "-" + std::to_string(index);

    const bool dna = rec.kind == Kind::Dna;
    const std::size_t lo = dna ? kDnaMinLength : kProteinMinLength;
    const std::size_t hi = dna ? kDnaMaxLength : kProteinMaxLength;
    const std::size_t length = lo + rng.below(hi - lo + 1);
    const std::string_view symbols = base_symbols(rec.kind);

    rec.residues.reserve(length);
    if (label == Label::DnaRepetitive) {
        const auto pool = repeat_motifs(seed, sets);
        const std::string& motif = pool[rng.below(pool.size())];
        for (std::size_t i = 0; i < length; ++i) rec.residues.push_back(motif[i % 4]);
    } else {
        const auto p = class_composition(label, sets);
        for (std::size_t i = 0; i < length; ++i) rec.residues.push_back(draw(rng, symbols, p));
    }
    return rec;
}

std::vector<SequenceRecord> generate_dataset(std::uint64_t seed, std::size_t per_class,
                                             const GeneratorConfig& sets) {
    if (per_class == 0) throw Error(ErrorCode::InvalidArgument, "per_class must be at least 1");
    std::vector<SequenceRecord> out;
    out.reserve(per_class * kLabelCount);
    for (const Label label : kAllLabels)
        for (std::size_t i = 0; i < per_class; ++i) out.push_back(generate_record(seed, label, i, sets));
    return out;
}

SplitDataset stratified_split(const std::vector<SequenceRecord>& records, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::InvalidArgument, "split ratio must lie in (0, 1)");
    std::map<Label, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < records.size(); ++i) by_label[records[i].label].push_back(i);
    if (by_label.empty()) throw Error(ErrorCode::DegenerateClass, "cannot split an empty record list");

    std::vector<bool> to_train(records.size(), false);
    SplitDataset split;
    for (auto& [label, members] : by_label) {
        SplitMix64 rng(SplitMix64::mix(SplitMix64::mix(seed) ^ (static_cast<std::uint64_t>(label) + 1)));
        for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng.below(i)]);
        const auto n_train = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(members.size()) - 1e-9));
        for (std::size_t i = 0; i < n_train; ++i) to_train[members[i]] = true;
        if (n_train == members.size()) split.empty_test_classes.push_back(label);
    }
    for (std::size_t i = 0; i < records.size(); ++i) (to_train[i] ? split.train : split.test).push_back(records[i]);
    return split;
}

std::string format_fasta(const std::vector<SequenceRecord>& records, std::string_view comment) {
    std::string out;
    if (!comment.empty()) {
        std::istringstream lines{std::string(comment)};
        for (std::string line; std::getline(lines, line);) out += ";" + line + "\n";
    }
    for (const auto& r : records) {
        out += ">" + r.id + "|" + label_name(r.label) + "|" + kind_name(r.kind) + "\n";
        for (std::size_t i = 0; i < r.residues.size(); i += kFastaLineWidth) {
            out.append(r.residues, i, kFastaLineWidth);
            out.push_back('\n');
        }
    }
    return out;
}

void write_fasta(const std::vector<SequenceRecord>& records, const std::filesystem::path& path,
                 std::string_view comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    out << format_fasta(records, comment);
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

std::vector<SequenceRecord> parse_fasta(std::string_view text) {
    std::vector<SequenceRecord> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == ';') continue;

        if (line.front() == '>') {
            const std::string_view header = line.substr(1);
            const auto bar1 = header.find('|');
            const auto bar2 = bar1 == std::string_view::npos ? bar1 : header.find('|', bar1 + 1);
            if (bar2 == std::string_view::npos || header.find('|', bar2 + 1) != std::string_view::npos || bar1 == 0)
                throw Error(ErrorCode::Parse,
                            "line " + std::to_string(line_no) + ": header must be '>id|label|kind'", line_no);
            SequenceRecord rec;
            rec.id = std::string(header.substr(0, bar1));
            try {
                rec.label = parse_label(header.substr(bar1 + 1, bar2 - bar1 - 1));
                rec.kind = parse_kind(header.substr(bar2 + 1));
            } catch (const Error& e) {
                throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what(), line_no);
            }
            if (label_kind(rec.label) != rec.kind)
                throw Error(ErrorCode::Parse,
                            "line " + std::to_string(line_no) + ": label " + label_name(rec.label) +
                                " is inconsistent with kind " + kind_name(rec.kind),
                            line_no);
            records.push_back(std::move(rec));
            continue;
        }

        if (records.empty())
            throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": sequence data before any header",
                        line_no);
        auto& rec = records.back();
        for (std::size_t col = 0; col < line.size(); ++col) {
            const int s = symbol_index(rec.kind, line[col]);
            if (s < 0)
                throw Error(ErrorCode::Parse,
                            "line " + std::to_string(line_no) + ", column " + std::to_string(col + 1) +
                                ": illegal " + kind_name(rec.kind) + " symbol '" + std::string(1, line[col]) + "'",
                            line_no);
            rec.residues.push_back(base_symbols(rec.kind)[static_cast<std::size_t>(s)]);
        }
    }
    return records;
}

std::vector<SequenceRecord> read_fasta(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_fasta(buf.str());
}

}  // namespace msrcgr
