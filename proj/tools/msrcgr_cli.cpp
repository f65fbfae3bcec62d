#include "msrcgr/msrcgr.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kFormatVersion = "msrcgr-cli/1";

// A failed library call or a CLI-level validation problem.
struct Failure {
    msrcgr_status status;
    std::string message;
    std::int64_t position = -1;
};

void check(msrcgr_status status) {
    if (status != MSRCGR_OK) throw Failure{status, msrcgr_last_error(), msrcgr_last_error_position()};
}

[[noreturn]] void invalid(const std::string& message) {
    throw Failure{MSRCGR_ERR_INVALID_ARGUMENT, message};
}

int exit_code(msrcgr_status status) {
    return status == MSRCGR_ERR_IO ? 2 : 1;
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Records = std::unique_ptr<msrcgr_records, Deleter<msrcgr_records, msrcgr_records_free>>;
using Trajectory = std::unique_ptr<msrcgr_trajectory, Deleter<msrcgr_trajectory, msrcgr_trajectory_free>>;
using Vocab = std::unique_ptr<msrcgr_vocab, Deleter<msrcgr_vocab, msrcgr_vocab_free>>;
using Matrix = std::unique_ptr<msrcgr_matrix, Deleter<msrcgr_matrix, msrcgr_matrix_free>>;
using Model = std::unique_ptr<msrcgr_model, Deleter<msrcgr_model, msrcgr_model_free>>;

std::string take(char* s) {
    std::string out = s ? s : "";
    msrcgr_string_free(s);
    return out;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{MSRCGR_ERR_IO, "cannot open '" + path.string() + "'"};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{MSRCGR_ERR_IO, "cannot open '" + path.string() + "' for writing"};
    out << text;
    if (!out) throw Failure{MSRCGR_ERR_IO, "failed writing '" + path.string() + "'"};
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Failure{MSRCGR_ERR_IO, "cannot create directory '" + dir.string() + "'"};
}

ojson parse_json(const std::string& text, const std::string& what) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Failure{MSRCGR_ERR_PARSE, what + ": " + e.what()};
    }
}

// One-line provenance header for text artifacts.
std::string provenance(const ojson& config) {
    return "format_version=" + std::string(kFormatVersion) + " config=" + config.dump();
}

ojson envelope(const ojson& config) {
    ojson j;
    j["format_version"] = kFormatVersion;
    j["library_version"] = msrcgr_version();
    j["config"] = config;
    return j;
}

msrcgr_kind parse_kind(const std::string& name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper == "DNA") return MSRCGR_DNA;
    if (upper == "PROTEIN") return MSRCGR_PROTEIN;
    invalid("unknown sequence kind '" + name + "' (expected DNA or PROTEIN)");
}

const char* kind_name(msrcgr_kind kind) {
    return kind == MSRCGR_DNA ? "DNA" : "PROTEIN";
}

void validate_scales(const std::vector<unsigned>& scales) {
    if (scales.empty()) invalid("at least one scale is required");
    for (const unsigned k : scales)
        if (k == 0) invalid("scales must be positive");
}

ojson scales_json(const std::vector<unsigned>& scales) {
    return ojson(scales);
}

struct RecordView {
    std::string id;
    std::string label;
    msrcgr_kind kind;
    std::string residues;
};

RecordView record_at(const msrcgr_records* records, std::size_t i) {
    const char *id = nullptr, *label = nullptr, *residues = nullptr;
    msrcgr_kind kind{};
    check(msrcgr_records_get(records, i, &id, &label, &kind, &residues));
    return {id, label, kind, residues};
}

Records read_records(const fs::path& path) {
    msrcgr_records* r = nullptr;
    check(msrcgr_records_read_fasta(path.string().c_str(), &r));
    return Records(r);
}

std::map<std::string, std::size_t> label_counts(const msrcgr_records* records) {
    std::map<std::string, std::size_t> counts;
    const auto n = msrcgr_records_count(records);
    for (std::size_t i = 0; i < n; ++i) ++counts[record_at(records, i).label];
    return counts;
}

// ---- gen -------------------------------------------------------------------

struct GenOptions {
    std::uint64_t seed = 42;
    std::size_t per_class = 1000;
    double train_ratio = 0.8;
    std::size_t random_embeddings = 0;
    std::string out = "data";

    ojson config() const {
        ojson c;
        c["command"] = "gen";
        c["seed"] = seed;
        c["per_class"] = per_class;
        c["train_ratio"] = train_ratio;
        c["random_embeddings"] = random_embeddings;
        c["out"] = out;
        return c;
    }
};

struct GenResult {
    fs::path train;
    fs::path test;
    fs::path embeddings;
    std::size_t train_count = 0;
    std::size_t test_count = 0;
};

GenResult run_gen(const GenOptions& o) {
    if (o.per_class == 0) invalid("--per-class must be at least 1");
    const fs::path dir(o.out);
    ensure_dir(dir);
    const ojson config = o.config();
    const std::string comment = provenance(config);

    msrcgr_records* all_raw = nullptr;
    check(msrcgr_records_generate(o.seed, o.per_class, &all_raw));
    const Records all(all_raw);
    msrcgr_records *train_raw = nullptr, *test_raw = nullptr;
    std::size_t empty_classes = 0;
    check(msrcgr_records_split(all.get(), o.train_ratio, o.seed, &train_raw, &test_raw, &empty_classes));
    const Records train(train_raw), test(test_raw);

    GenResult result;
    result.train = dir / "train.fasta";
    result.test = dir / "test.fasta";
    result.train_count = msrcgr_records_count(train.get());
    result.test_count = msrcgr_records_count(test.get());
    check(msrcgr_records_write_fasta(train.get(), result.train.string().c_str(), comment.c_str()));
    check(msrcgr_records_write_fasta(test.get(), result.test.string().c_str(), comment.c_str()));

    ojson manifest = envelope(config);
    manifest["seed"] = o.seed;
    manifest["per_class"] = o.per_class;
    ojson counts;
    counts["train"] = result.train_count;
    counts["test"] = result.test_count;
    counts["train_by_label"] = label_counts(train.get());
    counts["test_by_label"] = label_counts(test.get());
    manifest["counts"] = counts;
    manifest["empty_test_classes"] = empty_classes;
    ojson files;
    files["train"] = "train.fasta";
    files["test"] = "test.fasta";

    if (o.random_embeddings > 0) {
        result.embeddings = dir / "embeddings.csv";
        check(msrcgr_random_embeddings(all.get(), o.random_embeddings, o.seed, result.embeddings.string().c_str()));
        write_text(result.embeddings, "# " + comment + "\n" + read_text(result.embeddings));
        files["embeddings"] = "embeddings.csv";
    }
    manifest["files"] = files;
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    if (empty_classes > 0)
        std::cerr << "warning: " << empty_classes << " class(es) have an empty test share\n";
    return result;
}

// ---- roundtrip -------------------------------------------------------------

struct RoundtripOptions {
    std::string in;
    std::vector<unsigned> scales{1, 2, 3, 4};
    bool override_large = false;
    std::vector<std::string> trajectories;
    std::string kind;
    std::string out = "-";

    ojson config() const {
        ojson c;
        c["command"] = "roundtrip";
        c["in"] = in;
        c["scales"] = scales_json(scales);
        c["override_large_alphabet"] = override_large;
        c["trajectory"] = trajectories;
        c["kind"] = kind;
        c["out"] = out;
        return c;
    }
};

// Decimal strings of non-negative integers, compared by value.
bool decimal_less(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

struct ScaleTally {
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t precision_ok = 0;
    std::string max_denominator = "0";
};

// Trajectories in a file: a bare trajectory object, a {"kind", "trajectory"}
// wrapper, or plotdata output with a "trajectories" list.
std::vector<std::pair<msrcgr_kind, ojson>> load_trajectories(const std::string& path, const std::string& kind_flag) {
    const ojson j = parse_json(read_text(path), "trajectory file '" + path + "'");
    auto kind_of = [&](const ojson& holder) {
        if (holder.contains("kind")) return parse_kind(holder.at("kind").get<std::string>());
        if (kind_flag.empty()) invalid("trajectory file '" + path + "' has no kind; pass --kind");
        return parse_kind(kind_flag);
    };
    std::vector<std::pair<msrcgr_kind, ojson>> out;
    if (j.contains("trajectories")) {
        const auto kind = kind_of(j);
        for (const auto& entry : j.at("trajectories"))
            out.emplace_back(kind, entry.contains("trajectory") ? entry.at("trajectory") : entry);
    } else if (j.contains("trajectory")) {
        out.emplace_back(kind_of(j), j.at("trajectory"));
    } else {
        out.emplace_back(kind_of(j), j);
    }
    return out;
}

int run_roundtrip(const RoundtripOptions& o) {
    validate_scales(o.scales);
    if (o.in.empty() && o.trajectories.empty()) invalid("roundtrip needs --in and/or --trajectory");
    const unsigned flags = o.override_large ? MSRCGR_ALLOW_LARGE_ALPHABET : 0u;

    ojson report = envelope(o.config());
    ojson failures = ojson::array();
    std::size_t failure_count = 0;

    if (!o.in.empty()) {
        const Records records = read_records(o.in);
        const auto n = msrcgr_records_count(records.get());
        std::map<unsigned, ScaleTally> tally;
        for (std::size_t i = 0; i < n; ++i) {
            const auto rec = record_at(records.get(), i);
            for (const unsigned k : o.scales) {
                msrcgr_trajectory* raw = nullptr;
                check(msrcgr_encode(rec.residues.c_str(), rec.kind, k, flags, &raw));
                const Trajectory traj(raw);
                auto& t = tally[k];

                const ojson precision = parse_json(
                    [&] {
                        char* s = nullptr;
                        check(msrcgr_trajectory_precision(traj.get(), &s));
                        return take(s);
                    }(),
                    "precision report");
                if (precision.at("satisfied").get<bool>()) ++t.precision_ok;
                const auto den = precision.at("max_denominator").get<std::string>();
                if (decimal_less(t.max_denominator, den)) t.max_denominator = den;

                char* decoded = nullptr;
                const auto status = msrcgr_decode(traj.get(), flags, &decoded);
                const std::string back = take(decoded);
                if (status == MSRCGR_OK && back == rec.residues) {
                    ++t.pass;
                    continue;
                }
                ++t.fail;
                ++failure_count;
                ojson f;
                f["id"] = rec.id;
                f["scale"] = k;
                f["error"] = status == MSRCGR_OK ? "mismatch" : msrcgr_status_name(status);
                f["step"] = status == MSRCGR_OK ? -1 : msrcgr_last_error_position();
                failures.push_back(f);
            }
        }
        ojson scales = ojson::array();
        for (const auto& [k, t] : tally) {
            ojson s;
            s["scale"] = k;
            s["records"] = t.pass + t.fail;
            s["pass"] = t.pass;
            s["fail"] = t.fail;
            s["precision_bound_ok"] = t.precision_ok;
            s["max_denominator"] = t.max_denominator;
            scales.push_back(s);
            std::cerr << "scale " << k << ": " << t.pass << "/" << (t.pass + t.fail) << " pass, precision bound held for "
                      << t.precision_ok << ", max denominator " << t.max_denominator << "\n";
        }
        report["scales"] = scales;
    }

    if (!o.trajectories.empty()) {
        ojson checked = ojson::array();
        for (const auto& path : o.trajectories) {
            for (const auto& [kind, tj] : load_trajectories(path, o.kind)) {
                msrcgr_trajectory* raw = nullptr;
                check(msrcgr_trajectory_from_json(tj.dump().c_str(), kind, flags, &raw));
                const Trajectory traj(raw);
                char* decoded = nullptr;
                const auto status = msrcgr_decode(traj.get(), flags, &decoded);
                ojson entry;
                entry["file"] = path;
                entry["scale"] = msrcgr_trajectory_scale(traj.get());
                entry["status"] = msrcgr_status_name(status);
                if (status == MSRCGR_OK) {
                    entry["sequence"] = take(decoded);
                } else {
                    entry["step"] = msrcgr_last_error_position();
                    entry["error"] = msrcgr_last_error();
                    ++failure_count;
                    ojson f;
                    f["id"] = path;
                    f["scale"] = entry["scale"];
                    f["error"] = msrcgr_status_name(status);
                    f["step"] = entry["step"];
                    failures.push_back(f);
                }
                checked.push_back(entry);
            }
        }
        report["trajectory_files"] = checked;
    }

    for (const auto& f : failures)
        std::cerr << "decode failure: id=" << f["id"].get<std::string>() << " scale=" << f["scale"]
                  << " step=" << f["step"] << " (" << f["error"].get<std::string>() << ")\n";
    report["failures"] = failures;
    report["ok"] = failure_count == 0;
    write_text(o.out, report.dump(2) + "\n");
    return failure_count == 0 ? 0 : 1;
}

// ---- featurize -------------------------------------------------------------

struct FeaturizeOptions {
    std::string in;
    std::string set = "cgr";
    std::string out = "features.csv";
    std::string embeddings;
    std::string vocab;
    std::string write_vocab;

    ojson config() const {
        ojson c;
        c["command"] = "featurize";
        c["in"] = in;
        c["set"] = set;
        c["out"] = out;
        c["embeddings"] = embeddings;
        c["vocab"] = vocab;
        c["write_vocab"] = write_vocab;
        return c;
    }
};

std::size_t run_featurize(const FeaturizeOptions& o) {
    const Records records = read_records(o.in);
    Vocab vocab;
    if (!o.vocab.empty()) {
        msrcgr_vocab* v = nullptr;
        check(msrcgr_vocab_read(o.vocab.c_str(), &v));
        vocab.reset(v);
    }
    msrcgr_matrix* m_raw = nullptr;
    msrcgr_vocab* built_raw = nullptr;
    check(msrcgr_featurize(records.get(), o.set.c_str(), vocab.get(),
                           o.embeddings.empty() ? nullptr : o.embeddings.c_str(), &m_raw, &built_raw));
    const Matrix m(m_raw);
    const Vocab built(built_raw);
    if (*msrcgr_last_error()) std::cerr << "warning: " << msrcgr_last_error() << "\n";
    check(msrcgr_matrix_write_csv(m.get(), o.out.c_str(), provenance(o.config()).c_str()));
    if (!o.write_vocab.empty()) {
        if (!built) invalid("feature set '" + o.set + "' has no tri-mer vocabulary to write");
        check(msrcgr_vocab_write(built.get(), o.write_vocab.c_str()));
    }
    return msrcgr_matrix_cols(m.get());
}

// ---- train / eval ----------------------------------------------------------

struct TrainOptions {
    std::string train;
    double lambda = 1.0;
    unsigned max_iter = 500;
    double tol = 1e-6;
    std::string out = "model.json";

    ojson config() const {
        ojson c;
        c["command"] = "train";
        c["train"] = train;
        c["lambda"] = lambda;
        c["max_iter"] = max_iter;
        c["tol"] = tol;
        c["out"] = out;
        return c;
    }
};

Matrix read_matrix(const std::string& path) {
    msrcgr_matrix* m = nullptr;
    check(msrcgr_matrix_read_csv(path.c_str(), &m));
    return Matrix(m);
}

void run_train(const TrainOptions& o) {
    if (!(o.lambda >= 0)) invalid("--lambda must be non-negative");
    const Matrix x = read_matrix(o.train);
    msrcgr_model* raw = nullptr;
    check(msrcgr_model_train(x.get(), o.lambda, o.max_iter, o.tol, &raw));
    const Model model(raw);
    char* json = nullptr;
    check(msrcgr_model_to_json(model.get(), &json));
    ojson out = envelope(o.config());
    out["model"] = parse_json(take(json), "model");
    write_text(o.out, out.dump() + "\n");
}

struct EvalOptions {
    std::string model;
    std::string test;
    std::string out = "metrics.json";

    ojson config() const {
        ojson c;
        c["command"] = "eval";
        c["model"] = model;
        c["test"] = test;
        c["out"] = out;
        return c;
    }
};

ojson run_eval(const EvalOptions& o) {
    const ojson wrapped = parse_json(read_text(o.model), "model file '" + o.model + "'");
    const ojson& model_json = wrapped.contains("model") ? wrapped.at("model") : wrapped;
    msrcgr_model* raw = nullptr;
    check(msrcgr_model_from_json(model_json.dump().c_str(), &raw));
    const Model model(raw);
    const Matrix x = read_matrix(o.test);
    char* metrics = nullptr;
    double accuracy = 0;
    check(msrcgr_model_evaluate(model.get(), x.get(), &metrics, &accuracy));
    ojson out = envelope(o.config());
    if (wrapped.contains("config")) out["train_config"] = wrapped.at("config");
    out["metrics"] = parse_json(take(metrics), "metrics");
    write_text(o.out, out.dump(2) + "\n");
    return out["metrics"];
}

// ---- plotdata --------------------------------------------------------------

struct PlotOptions {
    std::string sequence;
    std::string kind = "DNA";
    std::vector<unsigned> scales{1, 2, 3, 4};
    bool override_large = false;
    std::string out = "-";

    ojson config() const {
        ojson c;
        c["command"] = "plotdata";
        c["sequence"] = sequence;
        c["kind"] = kind;
        c["scales"] = scales_json(scales);
        c["override_large_alphabet"] = override_large;
        c["out"] = out;
        return c;
    }
};

void run_plotdata(const PlotOptions& o) {
    validate_scales(o.scales);
    const auto kind = parse_kind(o.kind);
    const unsigned flags = o.override_large ? MSRCGR_ALLOW_LARGE_ALPHABET : 0u;
    ojson out = envelope(o.config());
    out["kind"] = kind_name(kind);
    out["sequence"] = o.sequence;

    ojson trajectories = ojson::array();
    for (const unsigned k : o.scales) {
        msrcgr_trajectory* raw = nullptr;
        check(msrcgr_encode(o.sequence.c_str(), kind, k, flags, &raw));
        const Trajectory traj(raw);
        char* json = nullptr;
        check(msrcgr_trajectory_to_json(traj.get(), &json));
        ojson entry;
        entry["scale"] = k;
        entry["trajectory"] = parse_json(take(json), "trajectory");
        ojson floats = ojson::array();
        const auto steps = msrcgr_trajectory_steps(traj.get());
        for (std::size_t t = 0; t <= steps; ++t) {
            double x = 0, y = 0;
            check(msrcgr_trajectory_point(traj.get(), t, &x, &y));
            floats.push_back({x, y});
        }
        entry["points_float"] = floats;
        trajectories.push_back(entry);
    }
    out["trajectories"] = trajectories;

    double features[MSRCGR_CGR_FEATURES];
    const auto status = msrcgr_cgr_features(o.sequence.c_str(), kind, features);
    if (status == MSRCGR_OK) {
        ojson f;
        ojson names = ojson::array();
        for (std::size_t i = 0; i < MSRCGR_CGR_FEATURES; ++i) names.push_back(msrcgr_cgr_feature_name(i));
        f["names"] = names;
        f["values"] = std::vector<double>(features, features + MSRCGR_CGR_FEATURES);
        out["features"] = f;
    } else if (status == MSRCGR_ERR_SEQUENCE_TOO_SHORT) {
        out["features"] = nullptr;  // the 24-vector needs at least four symbols
    } else {
        check(status);
    }
    write_text(o.out, out.dump() + "\n");
}

// ---- repro -----------------------------------------------------------------

struct ReproOptions {
    std::uint64_t seed = 42;
    std::size_t per_class = 1000;
    std::vector<std::string> sets{"kmer", "cgr", "kmer+cgr", "embed+cgr"};
    double lambda = 1.0;
    unsigned max_iter = 500;
    double tol = 1e-6;
    std::size_t random_embeddings = 320;
    std::string embeddings;
    std::string out = "repro";

    ojson config() const {
        ojson c;
        c["command"] = "repro";
        c["seed"] = seed;
        c["per_class"] = per_class;
        c["sets"] = sets;
        c["lambda"] = lambda;
        c["max_iter"] = max_iter;
        c["tol"] = tol;
        c["random_embeddings"] = random_embeddings;
        c["embeddings"] = embeddings;
        c["out"] = out;
        return c;
    }
};

void run_repro(const ReproOptions& o) {
    const fs::path dir(o.out);
    GenOptions g;
    g.seed = o.seed;
    g.per_class = o.per_class;
    g.out = o.out;
    const bool any_embed = std::any_of(o.sets.begin(), o.sets.end(),
                                       [](const std::string& s) { return s.rfind("embed", 0) == 0; });
    g.random_embeddings = any_embed && o.embeddings.empty() ? o.random_embeddings : 0;
    const auto data = run_gen(g);
    const std::string embeddings = !o.embeddings.empty() ? o.embeddings : data.embeddings.string();
    std::cerr << "generated " << data.train_count << " train / " << data.test_count << " test records\n";

    ojson summary = envelope(o.config());
    ojson results = ojson::array();
    for (const auto& set : o.sets) {
        std::string stem = set;
        std::replace(stem.begin(), stem.end(), '+', '_');
        FeaturizeOptions f;
        f.set = set;
        f.embeddings = set.rfind("embed", 0) == 0 ? embeddings : "";
        f.in = data.train.string();
        f.out = (dir / (stem + "_train.csv")).string();
        if (set.find("kmer") != std::string::npos) f.write_vocab = (dir / (stem + "_vocab.txt")).string();
        const auto columns = run_featurize(f);
        f.in = data.test.string();
        f.out = (dir / (stem + "_test.csv")).string();
        f.vocab = f.write_vocab;
        f.write_vocab.clear();
        run_featurize(f);

        TrainOptions t;
        t.train = (dir / (stem + "_train.csv")).string();
        t.lambda = o.lambda;
        t.max_iter = o.max_iter;
        t.tol = o.tol;
        t.out = (dir / (stem + "_model.json")).string();
        run_train(t);

        EvalOptions e;
        e.model = t.out;
        e.test = f.out;
        e.out = (dir / (stem + "_metrics.json")).string();
        const ojson m = run_eval(e);

        ojson r;
        r["set"] = set;
        r["columns"] = columns;
        r["accuracy"] = m.at("accuracy");
        r["precision"] = m.at("precision");
        r["recall"] = m.at("recall");
        r["f1"] = m.at("f1");
        results.push_back(r);
        std::printf("%-10s columns=%-5zu accuracy=%.4f precision=%.4f recall=%.4f f1=%.4f\n", set.c_str(), columns,
                    m.at("accuracy").get<double>(), m.at("precision").get<double>(), m.at("recall").get<double>(),
                    m.at("f1").get<double>());
        std::fflush(stdout);
    }
    summary["results"] = results;
    write_text(dir / "summary.json", summary.dump(2) + "\n");
}

// ---- wiring ----------------------------------------------------------------

// Config files hold flat "key = value" lines using the long option names of
// the chosen subcommand; [section] headers or dotted keys are also accepted.
class SubcommandConfig : public CLI::ConfigTOML {
public:
    std::string subcommand;

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigTOML::from_config(input);
        for (auto& item : items)
            if (item.parents.empty() && !subcommand.empty() && item.name != subcommand) item.parents = {subcommand};
        return items;
    }
};

CLI::App* with_config(CLI::App* sub) {
    sub->fallthrough();
    sub->allow_config_extras(CLI::config_extras_mode::error);
    return sub;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-scale reversible chaos game representation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(msrcgr_version()));
    auto config_format = std::make_shared<SubcommandConfig>();
    app.config_formatter(config_format);
    app.set_config("--config", "", "Read options from a key=value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    GenOptions gen;
    auto* gen_cmd = with_config(app.add_subcommand("gen", "Generate the synthetic dataset and its train/test split"));
    gen_cmd->add_option("--seed", gen.seed, "Dataset seed")->capture_default_str();
    gen_cmd->add_option("--per-class", gen.per_class, "Records per class")->capture_default_str();
    gen_cmd->add_option("--train-ratio", gen.train_ratio, "Training share per class")->capture_default_str();
    gen_cmd->add_option("--random-embeddings", gen.random_embeddings,
                        "Also write embeddings.csv with this many signal-free dimensions (0 = none)")
        ->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();

    RoundtripOptions rt;
    auto* rt_cmd = with_config(app.add_subcommand("roundtrip", "Encode and decode every record at every scale"));
    rt_cmd->add_option("--in", rt.in, "FASTA input");
    rt_cmd->add_option("--scales", rt.scales, "Scales, comma separated")->delimiter(',')->capture_default_str();
    rt_cmd->add_flag("--override-large-alphabet", rt.override_large, "Allow alphabets above 65536 tokens");
    rt_cmd->add_option("--trajectory", rt.trajectories, "Trajectory JSON file(s) to decode");
    rt_cmd->add_option("--kind", rt.kind, "Kind of bare trajectory files (DNA or PROTEIN)");
    rt_cmd->add_option("--out", rt.out, "Report path ('-' for stdout)")->capture_default_str();

    FeaturizeOptions fz;
    auto* fz_cmd = with_config(app.add_subcommand("featurize", "Write a feature CSV for a FASTA file"));
    fz_cmd->add_option("--in", fz.in, "FASTA input")->required();
    fz_cmd->add_option("--set", fz.set, "kmer, cgr, embed, embed+cgr or kmer+cgr")->capture_default_str();
    fz_cmd->add_option("--out", fz.out, "Feature CSV path")->capture_default_str();
    fz_cmd->add_option("--embeddings", fz.embeddings, "Embedding CSV (pooled or per-residue)");
    fz_cmd->add_option("--vocab", fz.vocab, "Reuse this tri-mer vocabulary (built from training data)");
    fz_cmd->add_option("--write-vocab", fz.write_vocab, "Write the tri-mer vocabulary used");

    TrainOptions tr;
    auto* tr_cmd = with_config(app.add_subcommand("train", "Fit z-scoring and logistic regression on a feature CSV"));
    tr_cmd->add_option("--train", tr.train, "Training feature CSV")->required();
    tr_cmd->add_option("--lambda", tr.lambda, "L2 strength")->capture_default_str();
    tr_cmd->add_option("--max-iter", tr.max_iter, "Gradient-descent iterations")->capture_default_str();
    tr_cmd->add_option("--tol", tr.tol, "Gradient-norm stopping tolerance")->capture_default_str();
    tr_cmd->add_option("--out", tr.out, "Model JSON path")->capture_default_str();

    EvalOptions ev;
    auto* ev_cmd = with_config(app.add_subcommand("eval", "Evaluate a model on a feature CSV"));
    ev_cmd->add_option("--model", ev.model, "Model JSON")->required();
    ev_cmd->add_option("--test", ev.test, "Test feature CSV")->required();
    ev_cmd->add_option("--out", ev.out, "Metrics JSON path ('-' for stdout)")->capture_default_str();

    PlotOptions pd;
    auto* pd_cmd = with_config(app.add_subcommand("plotdata", "Export trajectories and features for plotting"));
    pd_cmd->add_option("--sequence", pd.sequence, "Sequence to encode")->required();
    pd_cmd->add_option("--kind", pd.kind, "DNA or PROTEIN")->capture_default_str();
    pd_cmd->add_option("--scales", pd.scales, "Scales, comma separated")->delimiter(',')->capture_default_str();
    pd_cmd->add_flag("--override-large-alphabet", pd.override_large, "Allow alphabets above 65536 tokens");
    pd_cmd->add_option("--out", pd.out, "JSON path ('-' for stdout)")->capture_default_str();

    ReproOptions rp;
    auto* rp_cmd = with_config(app.add_subcommand("repro", "Run gen, featurize, train and eval in one go"));
    rp_cmd->add_option("--seed", rp.seed, "Dataset seed")->capture_default_str();
    rp_cmd->add_option("--per-class", rp.per_class, "Records per class")->capture_default_str();
    rp_cmd->add_option("--set", rp.sets, "Feature sets, comma separated")->delimiter(',')->capture_default_str();
    rp_cmd->add_option("--lambda", rp.lambda, "L2 strength")->capture_default_str();
    rp_cmd->add_option("--max-iter", rp.max_iter, "Gradient-descent iterations")->capture_default_str();
    rp_cmd->add_option("--tol", rp.tol, "Gradient-norm stopping tolerance")->capture_default_str();
    rp_cmd->add_option("--random-embeddings", rp.random_embeddings,
                       "Dimension of generated signal-free embeddings")
        ->capture_default_str();
    rp_cmd->add_option("--embeddings", rp.embeddings, "Use this embedding CSV instead of generated ones");
    rp_cmd->add_option("--out", rp.out, "Output directory")->capture_default_str();

    for (int i = 1; i < argc && config_format->subcommand.empty(); ++i)
        for (const auto* sub : app.get_subcommands({}))
            if (sub->get_name() == argv[i]) config_format->subcommand = argv[i];

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*gen_cmd) {
            const auto r = run_gen(gen);
            std::printf("wrote %zu train and %zu test records to %s\n", r.train_count, r.test_count, gen.out.c_str());
        } else if (*rt_cmd) {
            return run_roundtrip(rt);
        } else if (*fz_cmd) {
            const auto cols = run_featurize(fz);
            std::printf("wrote %zu feature columns to %s\n", cols, fz.out.c_str());
        } else if (*tr_cmd) {
            run_train(tr);
            std::printf("wrote model to %s\n", tr.out.c_str());
        } else if (*ev_cmd) {
            const auto m = run_eval(ev);
            if (ev.out != "-")
                std::printf("accuracy=%.4f precision=%.4f recall=%.4f f1=%.4f\n", m.at("accuracy").get<double>(),
                            m.at("precision").get<double>(), m.at("recall").get<double>(), m.at("f1").get<double>());
        } else if (*pd_cmd) {
            run_plotdata(pd);
        } else if (*rp_cmd) {
            run_repro(rp);
        }
    } catch (const Failure& f) {
        ojson err;
        err["error"] = msrcgr_status_name(f.status);
        err["message"] = f.message;
        if (f.position >= 0) err["position"] = f.position;
        std::cerr << err.dump() << "\n";
        return exit_code(f.status);
    }
    return 0;
}
