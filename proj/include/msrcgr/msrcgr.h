/*
 * msrcgr — C interface.
 *
 * Every function returns an msrcgr_status. On failure a description is
 * available from msrcgr_last_error() (thread-local, valid until the next call
 * on the same thread). Objects are opaque handles released with their
 * matching *_free function; strings returned through char** are released with
 * msrcgr_string_free.
 */
#ifndef MSRCGR_H
#define MSRCGR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MSRCGR_BUILDING)
#    define MSRCGR_API __declspec(dllexport)
#  else
#    define MSRCGR_API __declspec(dllimport)
#  endif
#else
#  define MSRCGR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msrcgr_status {
    MSRCGR_OK = 0,
    MSRCGR_ERR_INVALID_ARGUMENT = 1,
    MSRCGR_ERR_INVALID_ALPHABET,
    MSRCGR_ERR_OUT_OF_RANGE,
    MSRCGR_ERR_ALPHABET_TOO_LARGE,
    MSRCGR_ERR_INVALID_TOKEN,
    MSRCGR_ERR_SEQUENCE_TOO_SHORT,
    MSRCGR_ERR_CORRUPTED_TRAJECTORY,
    MSRCGR_ERR_INCONSISTENT_STREAM,
    MSRCGR_ERR_EMPTY_TRAJECTORY,
    MSRCGR_ERR_DIMENSION,
    MSRCGR_ERR_ALIGNMENT,
    MSRCGR_ERR_EMPTY_EMBEDDING,
    MSRCGR_ERR_DEGENERATE_CLASS,
    MSRCGR_ERR_DEGENERATE_LABELS,
    MSRCGR_ERR_DIVERGENCE,
    MSRCGR_ERR_PARSE,
    MSRCGR_ERR_IO,
    MSRCGR_ERR_INTERNAL = 99
} msrcgr_status;

typedef enum msrcgr_kind {
    MSRCGR_DNA = 0,
    MSRCGR_PROTEIN = 1
} msrcgr_kind;

/* Flags for functions that build k-mer alphabets. */
#define MSRCGR_ALLOW_LARGE_ALPHABET 0x1u

#define MSRCGR_CGR_FEATURES 24

typedef struct msrcgr_trajectory msrcgr_trajectory;
typedef struct msrcgr_records msrcgr_records;
typedef struct msrcgr_vocab msrcgr_vocab;
typedef struct msrcgr_matrix msrcgr_matrix;
typedef struct msrcgr_model msrcgr_model;

MSRCGR_API const char* msrcgr_version(void);
MSRCGR_API const char* msrcgr_last_error(void);
/* Step, sequence position or line number attached to the last error, or -1. */
MSRCGR_API int64_t msrcgr_last_error_position(void);
MSRCGR_API const char* msrcgr_status_name(msrcgr_status status);
MSRCGR_API void msrcgr_string_free(char* s);

/* ---- Exact encoding ---------------------------------------------------- */

MSRCGR_API msrcgr_status msrcgr_encode(const char* sequence, msrcgr_kind kind, unsigned k, unsigned flags,
                                       msrcgr_trajectory** out);
MSRCGR_API msrcgr_status msrcgr_decode(const msrcgr_trajectory* traj, unsigned flags, char** out_sequence);
MSRCGR_API size_t msrcgr_trajectory_steps(const msrcgr_trajectory* traj);
MSRCGR_API unsigned msrcgr_trajectory_scale(const msrcgr_trajectory* traj);
MSRCGR_API msrcgr_status msrcgr_trajectory_point(const msrcgr_trajectory* traj, size_t t, double* x, double* y);
/* {"max_denominator":"...","bound":"...","satisfied":true} */
MSRCGR_API msrcgr_status msrcgr_trajectory_precision(const msrcgr_trajectory* traj, char** out_json);
MSRCGR_API msrcgr_status msrcgr_trajectory_to_json(const msrcgr_trajectory* traj, char** out_json);
MSRCGR_API msrcgr_status msrcgr_trajectory_from_json(const char* json, msrcgr_kind kind, unsigned flags,
                                                     msrcgr_trajectory** out);
MSRCGR_API void msrcgr_trajectory_free(msrcgr_trajectory* traj);

/* Scales 1..4, six statistics each. */
MSRCGR_API msrcgr_status msrcgr_cgr_features(const char* sequence, msrcgr_kind kind,
                                             double out[MSRCGR_CGR_FEATURES]);
/* Column name of feature i ("k1_fx" ... "k4_d"), or NULL when out of range. */
MSRCGR_API const char* msrcgr_cgr_feature_name(size_t index);

/* ---- Records ----------------------------------------------------------- */

MSRCGR_API msrcgr_status msrcgr_records_generate(uint64_t seed, size_t per_class, msrcgr_records** out);
MSRCGR_API msrcgr_status msrcgr_records_read_fasta(const char* path, msrcgr_records** out);
/* comment may be NULL; each of its lines is written as a ';' line. */
MSRCGR_API msrcgr_status msrcgr_records_write_fasta(const msrcgr_records* records, const char* path,
                                                    const char* comment);
/* Stratified split; *empty_test_classes (optional) receives the number of
 * classes whose test share is empty. */
MSRCGR_API msrcgr_status msrcgr_records_split(const msrcgr_records* records, double ratio, uint64_t seed,
                                              msrcgr_records** train, msrcgr_records** test,
                                              size_t* empty_test_classes);
MSRCGR_API size_t msrcgr_records_count(const msrcgr_records* records);
/* Returned pointers stay valid until the records handle is freed. */
MSRCGR_API msrcgr_status msrcgr_records_get(const msrcgr_records* records, size_t index, const char** id,
                                            const char** label, msrcgr_kind* kind, const char** residues);
MSRCGR_API void msrcgr_records_free(msrcgr_records* records);

/* Writes a pooled embedding CSV of signal-free vectors for every record. */
MSRCGR_API msrcgr_status msrcgr_random_embeddings(const msrcgr_records* records, size_t dim, uint64_t seed,
                                                  const char* path);

/* ---- Features ---------------------------------------------------------- */

/* feature_set: "kmer", "cgr", "embed", "embed+cgr" or "kmer+cgr".
 * vocab may be NULL (built from these records); embeddings_path may be NULL
 * unless the set needs it; vocab_out may be NULL. On success, msrcgr_last_error()
 * holds any warnings (newline separated) or is empty. */
MSRCGR_API msrcgr_status msrcgr_featurize(const msrcgr_records* records, const char* feature_set,
                                          const msrcgr_vocab* vocab, const char* embeddings_path,
                                          msrcgr_matrix** out, msrcgr_vocab** vocab_out);
MSRCGR_API msrcgr_status msrcgr_vocab_read(const char* path, msrcgr_vocab** out);
MSRCGR_API msrcgr_status msrcgr_vocab_write(const msrcgr_vocab* vocab, const char* path);
MSRCGR_API size_t msrcgr_vocab_size(const msrcgr_vocab* vocab);
MSRCGR_API void msrcgr_vocab_free(msrcgr_vocab* vocab);

MSRCGR_API msrcgr_status msrcgr_matrix_read_csv(const char* path, msrcgr_matrix** out);
/* comment may be NULL; each of its lines is written as a '#' line. */
MSRCGR_API msrcgr_status msrcgr_matrix_write_csv(const msrcgr_matrix* matrix, const char* path,
                                                 const char* comment);
MSRCGR_API size_t msrcgr_matrix_rows(const msrcgr_matrix* matrix);
MSRCGR_API size_t msrcgr_matrix_cols(const msrcgr_matrix* matrix);
MSRCGR_API void msrcgr_matrix_free(msrcgr_matrix* matrix);

/* ---- Classifier -------------------------------------------------------- */

MSRCGR_API msrcgr_status msrcgr_model_train(const msrcgr_matrix* train, double lambda, unsigned max_iter,
                                            double tol, msrcgr_model** out);
MSRCGR_API msrcgr_status msrcgr_model_to_json(const msrcgr_model* model, char** out_json);
MSRCGR_API msrcgr_status msrcgr_model_from_json(const char* json, msrcgr_model** out);
/* Metrics JSON: classes, accuracy, precision, recall, f1, confusion. */
MSRCGR_API msrcgr_status msrcgr_model_evaluate(const msrcgr_model* model, const msrcgr_matrix* test,
                                               char** out_metrics_json, double* accuracy);
MSRCGR_API void msrcgr_model_free(msrcgr_model* model);

#ifdef __cplusplus
}
#endif

#endif /* MSRCGR_H */
