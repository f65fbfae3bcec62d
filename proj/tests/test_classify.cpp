#include "doctest.h"

#include "msrcgr/error.hpp"
#include "msrcgr/feature_matrix.hpp"
#include "msrcgr/logreg.hpp"
#include "oracles.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <numeric>

using doctest::Approx;
using msrcgr::Error;
using msrcgr::ErrorCode;
using msrcgr::FeatureMatrix;
using msrcgr::Kind;
using msrcgr::Label;
using msrcgr::SequenceRecord;

namespace {

SequenceRecord dna(std::string id, std::string residues, Label label = Label::DnaUniform) {
    return {std::move(id), label, Kind::Dna, std::move(residues)};
}

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode{};
}

double at(const FeatureMatrix& m, std::size_t r, const std::string& column) {
    const auto& cols = m.columns();
    const auto j = static_cast<std::uint32_t>(std::find(cols.begin(), cols.end(), column) - cols.begin());
    const auto row = m.row(r);
    for (std::size_t i = 0; i < row.cols.size(); ++i)
        if (row.cols[i] == j) return row.values[i];
    return 0.0;
}

}  // namespace

TEST_CASE("tri-mer counts") {
    const auto t = msrcgr::trimer_features({dna("a", "AAA"), dna("b", "AAAA"), dna("c", "AT")});
    CHECK(t.vocabulary.tokens() == std::vector<std::string>{"AAA"});
    CHECK(t.matrix.columns() == std::vector<std::string>{"kmer_AAA"});
    CHECK(at(t.matrix, 0, "kmer_AAA") == 1.0);
    CHECK(at(t.matrix, 1, "kmer_AAA") == 2.0);
    CHECK(at(t.matrix, 2, "kmer_AAA") == 0.0);
    REQUIRE(t.warnings.size() == 1);
    CHECK(t.warnings[0].find("'c'") != std::string::npos);

    // A fixed vocabulary drops unseen tri-mers.
    const msrcgr::Vocabulary vocab({"ACG", "CGT"});
    const auto u = msrcgr::trimer_features({dna("x", "ACGTTT")}, &vocab);
    CHECK(u.matrix.cols() == 2);
    CHECK(at(u.matrix, 0, "kmer_ACG") == 1.0);
    CHECK(at(u.matrix, 0, "kmer_CGT") == 1.0);
    CHECK(u.matrix.nonzeros() == 2);
}

TEST_CASE("tri-mer vocabulary over a mixed corpus") {
    const auto records = msrcgr::generate_dataset(3, 30);
    const auto t = msrcgr::trimer_features(records);
    const auto& tokens = t.vocabulary.tokens();
    CHECK(std::is_sorted(tokens.begin(), tokens.end()));
    CHECK(std::adjacent_find(tokens.begin(), tokens.end()) == tokens.end());
    CHECK(tokens.size() > 64);
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto row = t.matrix.row(r);
        const double total = std::accumulate(row.values.begin(), row.values.end(), 0.0);
        CHECK(total == static_cast<double>(records[r].residues.size() - 2));
    }

    const auto path = std::filesystem::temp_directory_path() / "msrcgr_test_vocab.txt";
    t.vocabulary.write(path);
    CHECK(msrcgr::Vocabulary::read(path).tokens() == tokens);
    std::filesystem::remove(path);
}

TEST_CASE("mean pooling and embeddings") {
    msrcgr::DenseMatrix m(2, 3);
    m(0, 0) = 1, m(0, 1) = 2, m(0, 2) = 3;
    m(1, 0) = 3, m(1, 1) = 4, m(1, 2) = 5;
    CHECK(msrcgr::mean_pool(m) == std::vector<double>{2, 3, 4});
    CHECK(code_of([] { msrcgr::mean_pool(msrcgr::DenseMatrix(0, 3)); }) == ErrorCode::EmptyEmbedding);

    const auto pooled = msrcgr::parse_embeddings_csv("id,e1,e2\na,1,2\nb,3,4\n");
    CHECK(pooled.dim == 2);
    CHECK(pooled.rows.at("b") == std::vector<double>{3, 4});

    const auto per_res = msrcgr::parse_embeddings_csv("id,t,e1,e2\na,0,1,2\na,1,3,6\nb,0,5,5\n");
    CHECK(per_res.dim == 2);
    CHECK(per_res.rows.at("a") == std::vector<double>{2, 4});
    CHECK(per_res.rows.at("b") == std::vector<double>{5, 5});

    CHECK(code_of([] { msrcgr::parse_embeddings_csv("id,e1\na,1,2\n"); }) == ErrorCode::Parse);

    const auto e = msrcgr::embedding_features({dna("a", "ACGT"), dna("b", "ACGT")}, pooled);
    CHECK(e.cols() == 2);
    CHECK(e.to_dense().data == std::vector<double>{1, 2, 3, 4});
    CHECK(code_of([&] { msrcgr::embedding_features({dna("zz", "ACGT")}, pooled); }) == ErrorCode::Alignment);

    const auto r1 = msrcgr::random_embeddings({"a", "b"}, 8, 1);
    const auto r2 = msrcgr::random_embeddings({"b", "a"}, 8, 1);
    CHECK(r1.rows.at("a") == r2.rows.at("a"));
    CHECK(r1.rows.at("a") != r1.rows.at("b"));
    for (const double v : r1.rows.at("a")) CHECK((v >= -1.0 && v < 1.0));

    const auto path = std::filesystem::temp_directory_path() / "msrcgr_test_emb.csv";
    msrcgr::write_embeddings_csv(r1, {"a", "b"}, path);
    const auto back = msrcgr::read_embeddings_csv(path);
    CHECK(back.dim == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(back.rows.at("b")[i] == Approx(r1.rows.at("b")[i]).epsilon(1e-11));
    std::filesystem::remove(path);
}

TEST_CASE("fusion concatenates aligned blocks") {
    const auto records = msrcgr::generate_dataset(9, 4);
    std::vector<std::string> ids;
    for (const auto& r : records) ids.push_back(r.id);
    const auto table = msrcgr::random_embeddings(ids, 320, 5);

    const auto fused = msrcgr::featurize(records, msrcgr::FeatureSet::EmbedCgr, nullptr, &table);
    CHECK(fused.matrix.cols() == 344);
    CHECK(fused.matrix.columns()[320] == "k1_fx");
    CHECK(fused.matrix.rows() == records.size());
    CHECK(!fused.vocabulary);

    const auto cgr = msrcgr::cgr_features(records);
    const auto fd = fused.matrix.to_dense();
    const auto cd = cgr.to_dense();
    for (std::size_t r = 0; r < records.size(); ++r)
        for (std::size_t j = 0; j < 24; ++j) CHECK(fd(r, 320 + j) == cd(r, j));

    const auto kc = msrcgr::featurize(records, msrcgr::FeatureSet::KmerCgr);
    REQUIRE(kc.vocabulary);
    CHECK(kc.matrix.cols() == kc.vocabulary->size() + 24);

    std::vector<SequenceRecord> shuffled(records.rbegin(), records.rend());
    const auto other = msrcgr::cgr_features(shuffled);
    CHECK(code_of([&] { msrcgr::fuse({&cgr, &other}); }) == ErrorCode::Alignment);
    const auto shorter = msrcgr::cgr_features({records.begin(), records.begin() + 3});
    CHECK(code_of([&] { msrcgr::fuse({&cgr, &shorter}); }) == ErrorCode::Alignment);
    CHECK(code_of([&] { msrcgr::featurize(records, msrcgr::FeatureSet::Embed); }) == ErrorCode::InvalidArgument);

    for (const char* name : {"kmer", "cgr", "embed", "embed+cgr", "kmer+cgr"})
        CHECK(msrcgr::feature_set_name(msrcgr::parse_feature_set(name)) == std::string(name));
    CHECK(code_of([] { msrcgr::parse_feature_set("bogus"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("feature CSV round trip") {
    const auto records = msrcgr::generate_dataset(2, 3);
    const auto m = msrcgr::featurize(records, msrcgr::FeatureSet::KmerCgr).matrix;
    const auto path = std::filesystem::temp_directory_path() / "msrcgr_test_features.csv";
    msrcgr::write_feature_csv(m, path, "set=kmer+cgr");
    const auto back = msrcgr::read_feature_csv(path);
    std::filesystem::remove(path);
    CHECK(back.ids() == m.ids());
    CHECK(back.labels() == m.labels());
    CHECK(back.columns() == m.columns());
    const auto a = m.to_dense();
    const auto b = back.to_dense();
    for (std::size_t i = 0; i < a.data.size(); ++i) REQUIRE(b.data[i] == Approx(a.data[i]).epsilon(1e-11));
}

TEST_CASE("objective matches the dense reference and its finite differences") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const std::size_t n = 12, d = 4, classes = 3;
    FeatureMatrix x({"a", "b", "c", "d"});
    std::vector<std::size_t> y;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(d);
        for (auto& v : row) v = u(rng);
        row[3] = 0.0 == (i % 3) ? 1.0 : 0.0;  // mostly-zero sparse column
        y.push_back(i % classes);
        x.add_dense_row("r" + std::to_string(i), "c" + std::to_string(i % classes), row);
    }
    const auto stats = msrcgr::zscore_fit(x);
    const auto z = msrcgr::zscore_apply(x.to_dense(), stats);
    const double lambda = 0.7;
    const msrcgr::LogisticObjective objective(x, y, classes, stats, lambda);
    REQUIRE(objective.parameter_count() == classes * d + classes);

    std::vector<double> params(objective.parameter_count());
    for (auto& p : params) p = u(rng) * 0.5;
    std::vector<double> grad(params.size());
    const double f = objective.loss_and_gradient(params, grad);
    CHECK(f == Approx(oracle::dense_logistic_loss(z, y, classes, params, lambda)).epsilon(1e-12));
    CHECK(objective.loss(params) == Approx(f).epsilon(1e-14));

    for (std::size_t k = 0; k < params.size(); ++k) {
        const double h = 1e-5;
        auto plus = params, minus = params;
        plus[k] += h;
        minus[k] -= h;
        const double fd = (oracle::dense_logistic_loss(z, y, classes, plus, lambda) -
                           oracle::dense_logistic_loss(z, y, classes, minus, lambda)) /
                          (2 * h);
        CHECK(std::fabs(grad[k] - fd) <= 1e-5 * std::max(1.0, std::fabs(fd)));
    }
}

TEST_CASE("logistic regression separates clean clusters") {
    FeatureMatrix x({"u", "v"});
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.1);
    const double centers[3][2] = {{0, 0}, {5, 0}, {0, 5}};
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 20; ++i) {
            const std::vector<double> row{centers[c][0] + noise(rng), centers[c][1] + noise(rng)};
            x.add_dense_row("p" + std::to_string(c * 20 + i), "class" + std::to_string(c), row);
        }
    const auto model = msrcgr::train_logreg(x, {.lambda = 0.01, .max_iter = 500, .tol = 1e-6});
    CHECK(model.classes == std::vector<std::string>{"class0", "class1", "class2"});
    const auto metrics = msrcgr::evaluate(model, x);
    CHECK(metrics.accuracy == 1.0);

    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto p = model.predict_proba(x, r);
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == Approx(1.0).epsilon(1e-12));
    }

    const auto again = msrcgr::train_logreg(x, {.lambda = 0.01, .max_iter = 500, .tol = 1e-6});
    CHECK(again.weights == model.weights);
    CHECK(again.bias == model.bias);

    const auto restored = msrcgr::LogRegModel::from_json(model.to_json());
    CHECK(restored.weights == model.weights);
    CHECK(restored.bias == model.bias);
    CHECK(restored.norm_stats.mean == model.norm_stats.mean);
    CHECK(restored.predict(x) == model.predict(x));
    CHECK(code_of([] { msrcgr::LogRegModel::from_json("{not json"); }) == ErrorCode::Parse);
}

TEST_CASE("uninformative features give uniform probabilities") {
    FeatureMatrix x({"z1", "z2"});
    for (int c = 0; c < 7; ++c)
        for (int i = 0; i < 5; ++i) x.add_sparse_row("r" + std::to_string(c * 5 + i), "L" + std::to_string(c), {});
    const auto model = msrcgr::train_logreg(x);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (const double p : model.predict_proba(x, r)) CHECK(p == Approx(1.0 / 7.0).epsilon(1e-9));
}

TEST_CASE("training rejects degenerate inputs") {
    FeatureMatrix one({"a"});
    one.add_dense_row("r0", "only", std::vector<double>{1.0});
    one.add_dense_row("r1", "only", std::vector<double>{2.0});
    CHECK(code_of([&] { msrcgr::train_logreg(one); }) == ErrorCode::DegenerateLabels);

    FeatureMatrix two({"a"});
    two.add_dense_row("r0", "x", std::vector<double>{1.0});
    two.add_dense_row("r1", "y", std::vector<double>{2.0});
    const auto model = msrcgr::train_logreg(two);
    FeatureMatrix wide({"a", "b"});
    wide.add_dense_row("r0", "x", std::vector<double>{1.0, 2.0});
    CHECK(code_of([&] { msrcgr::evaluate(model, wide); }) == ErrorCode::Dimension);
    FeatureMatrix unseen({"a"});
    unseen.add_dense_row("r0", "w", std::vector<double>{1.0});
    CHECK(code_of([&] { msrcgr::evaluate(model, unseen); }) == ErrorCode::Dimension);
}

TEST_CASE("weighted metrics from a confusion matrix") {
    const auto m = msrcgr::metrics_from_confusion({"a", "b", "c"}, {{2, 0, 0}, {1, 1, 0}, {0, 0, 2}});
    CHECK(m.accuracy == Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(m.precision == Approx(8.0 / 9.0).epsilon(1e-15));
    CHECK(m.recall == Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(m.f1 == Approx(37.0 / 45.0).epsilon(1e-15));

    // Constant predictor on seven balanced classes.
    std::vector<std::vector<std::size_t>> confusion(7, std::vector<std::size_t>(7, 0));
    for (auto& row : confusion) row[0] = 10;
    std::vector<std::string> names;
    for (int c = 0; c < 7; ++c) names.push_back("L" + std::to_string(c));
    const auto k = msrcgr::metrics_from_confusion(names, confusion);
    CHECK(k.accuracy == Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK(k.recall == Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK(k.precision == Approx(1.0 / 49.0).epsilon(1e-15));
    CHECK(k.f1 == Approx(0.25 / 7.0).epsilon(1e-15));

    CHECK(code_of([] { msrcgr::metrics_from_confusion({"a", "b"}, {{1, 0}}); }) == ErrorCode::Dimension);
    const auto json = nlohmann::json::parse(m.to_json());
    CHECK(json.at("confusion").size() == 3);
}

TEST_CASE("weighted recall equals accuracy on a balanced split") {
    const auto split = msrcgr::stratified_split(msrcgr::generate_dataset(4, 40), 0.75, 4);
    const auto train = msrcgr::featurize(split.train, msrcgr::FeatureSet::Cgr).matrix;
    const auto test = msrcgr::featurize(split.test, msrcgr::FeatureSet::Cgr).matrix;
    const auto model = msrcgr::train_logreg(train, {.lambda = 1.0, .max_iter = 100, .tol = 1e-6});
    const auto m = msrcgr::evaluate(model, test);
    CHECK(m.recall == Approx(m.accuracy).epsilon(1e-15));
    std::size_t total = 0;
    for (const auto& row : m.confusion) total += std::accumulate(row.begin(), row.end(), std::size_t{0});
    CHECK(total == test.rows());
    CHECK(m.accuracy > 1.0 / 7.0);
}
