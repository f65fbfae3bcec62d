#include "msrcgr/cgr.hpp"

#include "msrcgr/error.hpp"

#include "json.hpp"

namespace msrcgr {

namespace {

void require_length(std::string_view sequence, unsigned k) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "scale k must be at least 1");
    if (sequence.size() < k)
        throw Error(ErrorCode::SequenceTooShort,
                    "sequence of length " + std::to_string(sequence.size()) + " is shorter than scale k=" +
                        std::to_string(k));
}

}  // namespace

std::vector<std::string> kmer_stream(std::string_view sequence, unsigned k) {
    require_length(sequence, k);
    std::vector<std::string> out;
    out.reserve(sequence.size() - k + 1);
    for (std::size_t t = 0; t + k <= sequence.size(); ++t) out.emplace_back(sequence.substr(t, k));
    return out;
}

std::vector<std::uint64_t> kmer_indices(std::string_view sequence, const Alphabet& alphabet) {
    const unsigned k = alphabet.k();
    require_length(sequence, k);
    const std::uint64_t m = alphabet.base_size();
    const std::uint64_t size = alphabet.size();
    std::vector<std::uint64_t> out;
    out.reserve(sequence.size() - k + 1);
    std::uint64_t rolling = 0;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        const int s = symbol_index(alphabet.kind(), sequence[i]);
        if (s < 0)
            throw Error(ErrorCode::InvalidToken,
                        "invalid " + std::string(kind_name(alphabet.kind())) + " symbol '" +
                            std::string(1, sequence[i]) + "' at sequence position " + std::to_string(i),
                        i);
        rolling = (rolling * m + static_cast<std::uint64_t>(s)) % size;
        if (i + 1 >= k) out.push_back(rolling);
    }
    return out;
}

Trajectory encode_scale(std::string_view sequence, unsigned k, const CornerTable& corners) {
    if (corners.alphabet().k() != k)
        throw Error(ErrorCode::InvalidArgument, "corner table was built for k=" +
                                                    std::to_string(corners.alphabet().k()) + ", not k=" +
                                                    std::to_string(k));
    Trajectory traj;
    traj.kind = corners.alphabet().kind();
    traj.scale = k;
    traj.source_length = sequence.size();
    traj.tokens = kmer_indices(sequence, corners.alphabet());
    traj.points.reserve(traj.tokens.size() + 1);
    traj.points.push_back(Point2{});
    for (const auto token : traj.tokens) traj.points.push_back(midpoint(traj.points.back(), corners[token]));
    return traj;
}

std::map<unsigned, Trajectory> encode_multiscale(std::string_view sequence, Kind kind,
                                                 const std::vector<unsigned>& scales, AlphabetOptions options) {
    for (const auto k : scales) require_length(sequence, k);
    std::map<unsigned, Trajectory> out;
    for (const auto k : scales) {
        const auto table = shared_corner_table(kind, k, options);
        out.emplace(k, encode_scale(sequence, k, *table));
    }
    return out;
}

std::string decode(const Trajectory& trajectory, const CornerTable& corners) {
    const Alphabet& alphabet = corners.alphabet();
    if (alphabet.k() != trajectory.scale || alphabet.kind() != trajectory.kind)
        throw Error(ErrorCode::InvalidArgument, "corner table does not match the trajectory's alphabet");
    if (trajectory.points.empty() || !(trajectory.points.front() == Point2{}))
        throw Error(ErrorCode::CorruptedTrajectory, "trajectory does not start at the origin (step 0)", 0);

    const std::size_t n_steps = trajectory.steps();
    std::vector<std::uint64_t> tokens(n_steps);
    std::size_t first_bad = 0;
    bool corrupted = false;
    // Steps are independent; scan t = n..1 and report the earliest failure.
    for (std::size_t t = n_steps; t >= 1; --t) {
        const Point2& cur = trajectory.points[t];
        const Point2& prev = trajectory.points[t - 1];
        const Point2 corner{cur.x.twice() - prev.x, cur.y.twice() - prev.y};
        const std::int64_t index = corners.find(corner);
        if (index < 0) {
            corrupted = true;
            first_bad = t;
        } else {
            tokens[t - 1] = static_cast<std::uint64_t>(index);
        }
    }
    if (corrupted)
        throw Error(ErrorCode::CorruptedTrajectory,
                    "recovered point at step " + std::to_string(first_bad) + " matches no corner", first_bad);

    const unsigned k = alphabet.k();
    if (n_steps == 0) return {};
    std::string sequence = alphabet.token(tokens[0]);
    sequence.reserve(n_steps + k - 1);
    for (std::size_t t = 1; t < n_steps; ++t) {
        const std::string token = alphabet.token(tokens[t]);
        if (std::string_view(sequence).substr(sequence.size() - (k - 1)) != std::string_view(token).substr(0, k - 1))
            throw Error(ErrorCode::InconsistentStream,
                        "k-mers at steps " + std::to_string(t) + " and " + std::to_string(t + 1) +
                            " do not overlap in " + std::to_string(k - 1) + " symbols",
                        t + 1);
        sequence.push_back(token.back());
    }
    return sequence;
}

PrecisionReport check_precision_bound(const Trajectory& trajectory, std::uint64_t q) {
    PrecisionReport report;
    report.max_denominator = 1;
    const mpz_class qz(static_cast<unsigned long>(q));
    mpz_class step_bound = qz;
    for (std::size_t t = 0; t < trajectory.points.size(); ++t) {
        if (t > 0) step_bound *= 2;
        for (const Rational* c : {&trajectory.points[t].x, &trajectory.points[t].y}) {
            const mpz_class den = c->den();
            if (den > report.max_denominator) report.max_denominator = den;
            if (!mpz_divisible_p(step_bound.get_mpz_t(), den.get_mpz_t())) report.satisfied = false;
        }
    }
    report.bound = qz;
    mpz_mul_2exp(report.bound.get_mpz_t(), report.bound.get_mpz_t(), trajectory.steps());
    return report;
}

std::string trajectory_to_json(const Trajectory& trajectory, const Alphabet& alphabet) {
    nlohmann::ordered_json j;
    j["scale"] = trajectory.scale;
    j["n"] = trajectory.source_length;
    auto points = nlohmann::ordered_json::array();
    for (const auto& p : trajectory.points) points.push_back({p.x.to_string(), p.y.to_string()});
    j["points"] = std::move(points);
    auto tokens = nlohmann::ordered_json::array();
    for (const auto t : trajectory.tokens) tokens.push_back(alphabet.token(t));
    j["tokens"] = std::move(tokens);
    return j.dump();
}

Trajectory trajectory_from_json(std::string_view json, Kind kind, AlphabetOptions options) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("trajectory JSON: ") + e.what());
    }
    Trajectory traj;
    traj.kind = kind;
    try {
        traj.scale = j.at("scale").get<unsigned>();
        traj.source_length = j.at("n").get<std::size_t>();
        for (const auto& p : j.at("points")) {
            if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::Parse, "trajectory point must be a pair");
            traj.points.push_back({Rational::parse(p[0].get<std::string>()), Rational::parse(p[1].get<std::string>())});
        }
        if (j.contains("tokens")) {
            const Alphabet alphabet = build_alphabet(kind, traj.scale, options);
            for (const auto& t : j.at("tokens")) traj.tokens.push_back(alphabet.token_index(t.get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("trajectory JSON: ") + e.what());
    }
    return traj;
}

}  // namespace msrcgr
