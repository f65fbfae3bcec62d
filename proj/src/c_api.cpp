#include "msrcgr/msrcgr.h"

#include "msrcgr/cgr.hpp"
#include "msrcgr/dataset.hpp"
#include "msrcgr/error.hpp"
#include "msrcgr/feature_matrix.hpp"
#include "msrcgr/features.hpp"
#include "msrcgr/logreg.hpp"

#include "json.hpp"

#include <cstring>
#include <new>
#include <string>

struct msrcgr_trajectory {
    msrcgr::Trajectory value;
};
struct msrcgr_records {
    std::vector<msrcgr::SequenceRecord> value;
};
struct msrcgr_vocab {
    msrcgr::Vocabulary value;
};
struct msrcgr_matrix {
    msrcgr::FeatureMatrix value;
};
struct msrcgr_model {
    msrcgr::LogRegModel value;
};

namespace {

thread_local std::string g_last_error;
thread_local std::int64_t g_last_position = -1;

msrcgr_status fail(msrcgr_status status, std::string message, std::int64_t position = -1) {
    g_last_error = std::move(message);
    g_last_position = position;
    return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
msrcgr_status guarded(Fn&& fn) {
    g_last_error.clear();
    g_last_position = -1;
    try {
        fn();
        return MSRCGR_OK;
    } catch (const msrcgr::Error& e) {
        const auto pos = e.position();
        return fail(static_cast<msrcgr_status>(e.code()), e.what(), pos ? static_cast<std::int64_t>(*pos) : -1);
    } catch (const std::bad_alloc&) {
        return fail(MSRCGR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MSRCGR_ERR_INTERNAL, e.what());
    }
}

char* duplicate(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool condition, const char* what) {
    if (!condition) throw msrcgr::Error(msrcgr::ErrorCode::InvalidArgument, what);
}

msrcgr::Kind to_kind(msrcgr_kind kind) {
    if (kind == MSRCGR_DNA) return msrcgr::Kind::Dna;
    if (kind == MSRCGR_PROTEIN) return msrcgr::Kind::Protein;
    throw msrcgr::Error(msrcgr::ErrorCode::InvalidArgument, "unknown sequence kind");
}

msrcgr::AlphabetOptions to_options(unsigned flags) {
    return {.allow_large = (flags & MSRCGR_ALLOW_LARGE_ALPHABET) != 0};
}

}  // namespace

extern "C" {

const char* msrcgr_version(void) {
    return "msrcgr-1.0";
}

const char* msrcgr_last_error(void) {
    return g_last_error.c_str();
}

int64_t msrcgr_last_error_position(void) {
    return g_last_position;
}

const char* msrcgr_status_name(msrcgr_status status) {
    if (status == MSRCGR_OK) return "ok";
    if (status == MSRCGR_ERR_INTERNAL) return "internal";
    return msrcgr::error_code_name(static_cast<msrcgr::ErrorCode>(status));
}

void msrcgr_string_free(char* s) {
    std::free(s);
}

msrcgr_status msrcgr_encode(const char* sequence, msrcgr_kind kind, unsigned k, unsigned flags,
                            msrcgr_trajectory** out) {
    return guarded([&] {
        require(sequence && out, "null argument");
        const auto table = msrcgr::shared_corner_table(to_kind(kind), k, to_options(flags));
        *out = new msrcgr_trajectory{msrcgr::encode_scale(sequence, k, *table)};
    });
}

msrcgr_status msrcgr_decode(const msrcgr_trajectory* traj, unsigned flags, char** out_sequence) {
    return guarded([&] {
        require(traj && out_sequence, "null argument");
        const auto table = msrcgr::shared_corner_table(traj->value.kind, traj->value.scale, to_options(flags));
        *out_sequence = duplicate(msrcgr::decode(traj->value, *table));
    });
}

size_t msrcgr_trajectory_steps(const msrcgr_trajectory* traj) {
    return traj ? traj->value.steps() : 0;
}

unsigned msrcgr_trajectory_scale(const msrcgr_trajectory* traj) {
    return traj ? traj->value.scale : 0;
}

msrcgr_status msrcgr_trajectory_point(const msrcgr_trajectory* traj, size_t t, double* x, double* y) {
    return guarded([&] {
        require(traj && x && y, "null argument");
        if (t >= traj->value.points.size())
            throw msrcgr::Error(msrcgr::ErrorCode::OutOfRange, "point index past the end of the trajectory");
        *x = traj->value.points[t].x.to_double();
        *y = traj->value.points[t].y.to_double();
    });
}

msrcgr_status msrcgr_trajectory_precision(const msrcgr_trajectory* traj, char** out_json) {
    return guarded([&] {
        require(traj && out_json, "null argument");
        const auto q = msrcgr::grid_modulus(msrcgr::alphabet_size(traj->value.kind, traj->value.scale));
        const auto report = msrcgr::check_precision_bound(traj->value, q);
        nlohmann::ordered_json j;
        j["max_denominator"] = report.max_denominator.get_str();
        j["bound"] = report.bound.get_str();
        j["satisfied"] = report.satisfied;
        *out_json = duplicate(j.dump());
    });
}

msrcgr_status msrcgr_trajectory_to_json(const msrcgr_trajectory* traj, char** out_json) {
    return guarded([&] {
        require(traj && out_json, "null argument");
        const auto alphabet = msrcgr::build_alphabet(traj->value.kind, traj->value.scale, {.allow_large = true});
        *out_json = duplicate(msrcgr::trajectory_to_json(traj->value, alphabet));
    });
}

msrcgr_status msrcgr_trajectory_from_json(const char* json, msrcgr_kind kind, unsigned flags,
                                          msrcgr_trajectory** out) {
    return guarded([&] {
        require(json && out, "null argument");
        *out = new msrcgr_trajectory{msrcgr::trajectory_from_json(json, to_kind(kind), to_options(flags))};
    });
}

void msrcgr_trajectory_free(msrcgr_trajectory* traj) {
    delete traj;
}

msrcgr_status msrcgr_cgr_features(const char* sequence, msrcgr_kind kind, double out[MSRCGR_CGR_FEATURES]) {
    return guarded([&] {
        require(sequence && out, "null argument");
        const auto v = msrcgr::cgr_feature_vector(sequence, to_kind(kind));
        std::copy(v.begin(), v.end(), out);
    });
}

const char* msrcgr_cgr_feature_name(size_t index) {
    static const std::vector<std::string> names = msrcgr::cgr_feature_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

msrcgr_status msrcgr_records_generate(uint64_t seed, size_t per_class, msrcgr_records** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = new msrcgr_records{msrcgr::generate_dataset(seed, per_class)};
    });
}

msrcgr_status msrcgr_records_read_fasta(const char* path, msrcgr_records** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new msrcgr_records{msrcgr::read_fasta(path)};
    });
}

msrcgr_status msrcgr_records_write_fasta(const msrcgr_records* records, const char* path, const char* comment) {
    return guarded([&] {
        require(records && path, "null argument");
        msrcgr::write_fasta(records->value, path, comment ? comment : "");
    });
}

msrcgr_status msrcgr_records_split(const msrcgr_records* records, double ratio, uint64_t seed,
                                   msrcgr_records** train, msrcgr_records** test, size_t* empty_test_classes) {
    return guarded([&] {
        require(records && train && test, "null argument");
        auto split = msrcgr::stratified_split(records->value, ratio, seed);
        auto* tr = new msrcgr_records{std::move(split.train)};
        *test = new msrcgr_records{std::move(split.test)};
        *train = tr;
        if (empty_test_classes) *empty_test_classes = split.empty_test_classes.size();
    });
}

size_t msrcgr_records_count(const msrcgr_records* records) {
    return records ? records->value.size() : 0;
}

msrcgr_status msrcgr_records_get(const msrcgr_records* records, size_t index, const char** id, const char** label,
                                 msrcgr_kind* kind, const char** residues) {
    return guarded([&] {
        require(records != nullptr, "null argument");
        if (index >= records->value.size())
            throw msrcgr::Error(msrcgr::ErrorCode::OutOfRange, "record index out of range");
        const auto& r = records->value[index];
        if (id) *id = r.id.c_str();
        if (label) *label = msrcgr::label_name(r.label);
        if (kind) *kind = r.kind == msrcgr::Kind::Dna ? MSRCGR_DNA : MSRCGR_PROTEIN;
        if (residues) *residues = r.residues.c_str();
    });
}

void msrcgr_records_free(msrcgr_records* records) {
    delete records;
}

msrcgr_status msrcgr_random_embeddings(const msrcgr_records* records, size_t dim, uint64_t seed, const char* path) {
    return guarded([&] {
        require(records && path, "null argument");
        std::vector<std::string> ids;
        ids.reserve(records->value.size());
        for (const auto& r : records->value) ids.push_back(r.id);
        msrcgr::write_embeddings_csv(msrcgr::random_embeddings(ids, dim, seed), ids, path);
    });
}

msrcgr_status msrcgr_featurize(const msrcgr_records* records, const char* feature_set, const msrcgr_vocab* vocab,
                               const char* embeddings_path, msrcgr_matrix** out, msrcgr_vocab** vocab_out) {
    return guarded([&] {
        require(records && feature_set && out, "null argument");
        const auto set = msrcgr::parse_feature_set(feature_set);
        std::optional<msrcgr::EmbeddingTable> embeddings;
        if (msrcgr::needs_embeddings(set)) {
            require(embeddings_path != nullptr, "this feature set needs an embedding file");
            embeddings = msrcgr::read_embeddings_csv(embeddings_path);
        }
        auto result = msrcgr::featurize(records->value, set, vocab ? &vocab->value : nullptr,
                                        embeddings ? &*embeddings : nullptr);
        auto* matrix = new msrcgr_matrix{std::move(result.matrix)};
        if (vocab_out) {
            *vocab_out = result.vocabulary ? new msrcgr_vocab{std::move(*result.vocabulary)} : nullptr;
        }
        *out = matrix;
        for (const auto& w : result.warnings) g_last_error += (g_last_error.empty() ? "" : "\n") + w;
    });
}

msrcgr_status msrcgr_vocab_read(const char* path, msrcgr_vocab** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new msrcgr_vocab{msrcgr::Vocabulary::read(path)};
    });
}

msrcgr_status msrcgr_vocab_write(const msrcgr_vocab* vocab, const char* path) {
    return guarded([&] {
        require(vocab && path, "null argument");
        vocab->value.write(path);
    });
}

size_t msrcgr_vocab_size(const msrcgr_vocab* vocab) {
    return vocab ? vocab->value.size() : 0;
}

void msrcgr_vocab_free(msrcgr_vocab* vocab) {
    delete vocab;
}

msrcgr_status msrcgr_matrix_read_csv(const char* path, msrcgr_matrix** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new msrcgr_matrix{msrcgr::read_feature_csv(path)};
    });
}

msrcgr_status msrcgr_matrix_write_csv(const msrcgr_matrix* matrix, const char* path, const char* comment) {
    return guarded([&] {
        require(matrix && path, "null argument");
        msrcgr::write_feature_csv(matrix->value, path, comment ? comment : "");
    });
}

size_t msrcgr_matrix_rows(const msrcgr_matrix* matrix) {
    return matrix ? matrix->value.rows() : 0;
}

size_t msrcgr_matrix_cols(const msrcgr_matrix* matrix) {
    return matrix ? matrix->value.cols() : 0;
}

void msrcgr_matrix_free(msrcgr_matrix* matrix) {
    delete matrix;
}

msrcgr_status msrcgr_model_train(const msrcgr_matrix* train, double lambda, unsigned max_iter, double tol,
                                 msrcgr_model** out) {
    return guarded([&] {
        require(train && out, "null argument");
        *out = new msrcgr_model{msrcgr::train_logreg(train->value, {.lambda = lambda, .max_iter = max_iter, .tol = tol})};
    });
}

msrcgr_status msrcgr_model_to_json(const msrcgr_model* model, char** out_json) {
    return guarded([&] {
        require(model && out_json, "null argument");
        *out_json = duplicate(model->value.to_json());
    });
}

msrcgr_status msrcgr_model_from_json(const char* json, msrcgr_model** out) {
    return guarded([&] {
        require(json && out, "null argument");
        *out = new msrcgr_model{msrcgr::LogRegModel::from_json(json)};
    });
}

msrcgr_status msrcgr_model_evaluate(const msrcgr_model* model, const msrcgr_matrix* test, char** out_metrics_json,
                                    double* accuracy) {
    return guarded([&] {
        require(model && test, "null argument");
        const auto metrics = msrcgr::evaluate(model->value, test->value);
        if (accuracy) *accuracy = metrics.accuracy;
        if (out_metrics_json) *out_metrics_json = duplicate(metrics.to_json());
    });
}

void msrcgr_model_free(msrcgr_model* model) {
    delete model;
}

}  // extern "C"
