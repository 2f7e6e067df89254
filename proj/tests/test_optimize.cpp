#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "mspc/optimize.hpp"
#include "support/fixtures.hpp"

using namespace mspc;

namespace {

// short healthy signal so GA fitness evaluations stay cheap
SignalSeries short_healthy(std::uint64_t seed = 9) {
    auto p = standard_normal_params(seed);
    p.duration_s = 2.0;
    return generate_normal(p);
}

GaConfig small_config() {
    GaConfig cfg;
    cfg.k_min = 64;
    cfg.k_max = 900;
    cfg.n_min = 1;
    cfg.n_max = 6;
    cfg.population = 8;
    cfg.generations = 6;
    cfg.seed = 4242;
    return cfg;
}

}  // namespace

TEST_CASE("the fixture configuration has zero fitness") {
    REQUIRE(fitness(fixtures::kBatchLen, fixtures::kComponents, fixtures::healthy_calibration()) ==
            0.0);
}

TEST_CASE("oversized batch lengths are infeasible") {
    const auto signal = short_healthy();
    REQUIRE(std::isinf(fitness(static_cast<long>(signal.samples.size()) / 2 + 1, 2, signal)));
    REQUIRE(std::isinf(fitness(4, 1, signal)));
}

TEST_CASE("GA is deterministic under a fixed seed") {
    const auto signal = short_healthy();
    const auto cfg = small_config();
    const auto a = ga_optimize(signal, cfg);
    const auto b = ga_optimize(signal, cfg);
    REQUIRE(a.k_opt == b.k_opt);
    REQUIRE(a.n_opt == b.n_opt);
    REQUIRE(a.best_fitness == b.best_fitness);
    REQUIRE(a.history == b.history);
}

TEST_CASE("a population of identical individuals is a fixed point at zero mutation") {
    const auto signal = short_healthy();
    auto cfg = small_config();
    cfg.k_min = cfg.k_max = 400;
    cfg.n_min = cfg.n_max = 2;
    cfg.mutation_rate = 0.0;
    cfg.generations = 3;
    const auto result = ga_optimize(signal, cfg);
    REQUIRE(result.k_opt == 400);
    REQUIRE(result.n_opt == 2);
    REQUIRE(result.best_fitness == fitness(400, 2, signal));
}

TEST_CASE("GA contract: history, bounds, final population") {
    const auto signal = short_healthy();
    const auto cfg = small_config();
    std::vector<GaIndividual> evaluated;
    const auto result =
        ga_optimize(signal, cfg, [&](const GaIndividual& ind) { evaluated.push_back(ind); });

    REQUIRE(result.history.size() == static_cast<std::size_t>(cfg.generations));
    for (std::size_t g = 1; g < result.history.size(); ++g)
        REQUIRE(result.history[g] <= result.history[g - 1]);

    REQUIRE(evaluated.size() ==
            static_cast<std::size_t>(cfg.population) * static_cast<std::size_t>(cfg.generations));
    for (const auto& ind : evaluated) {
        REQUIRE(ind.k >= cfg.k_min);
        REQUIRE(ind.k <= cfg.k_max);
        REQUIRE(ind.n >= cfg.n_min);
        REQUIRE(ind.n <= cfg.n_max);
    }

    REQUIRE(result.final_population.size() == static_cast<std::size_t>(cfg.population));
    for (const auto& ind : result.final_population)
        REQUIRE(result.best_fitness <= ind.fitness);
    REQUIRE(result.k_opt >= cfg.k_min);
    REQUIRE(result.k_opt <= cfg.k_max);
}

TEST_CASE("GA validates its configuration") {
    const auto signal = short_healthy();
    auto cfg = small_config();
    cfg.k_min = 32;
    REQUIRE_THROWS_AS(ga_optimize(signal, cfg), InfeasibleBounds);
    cfg = small_config();
    cfg.n_max = 64;  // exceeds k_min / 2
    REQUIRE_THROWS_AS(ga_optimize(signal, cfg), InfeasibleBounds);
    cfg = small_config();
    cfg.population = 2;
    REQUIRE_THROWS_AS(ga_optimize(signal, cfg), InfeasibleBounds);
    cfg = small_config();
    cfg.elitism_count = 0;
    REQUIRE_THROWS_AS(ga_optimize(signal, cfg), InfeasibleBounds);
}

TEST_CASE("rank_variables orders zero-contribution columns least useful") {
    std::vector<Eigen::VectorXd> t2(2, Eigen::VectorXd(3));
    std::vector<Eigen::VectorXd> spex(2, Eigen::VectorXd(3));
    t2[0] << 0.0, 4.0, 1.0;
    t2[1] << 0.0, 2.0, 3.0;
    spex[0] << 0.0, 1.0, 2.0;
    spex[1] << 0.0, 3.0, 1.0;
    const auto ranking = rank_variables(t2, spex);
    REQUIRE(ranking.front().first == 0);  // dead column ranked least useful
}

TEST_CASE("rank_variables breaks ties by column order") {
    // single fault batch; combined ranks tie between the two columns
    std::vector<Eigen::VectorXd> t2(1, Eigen::VectorXd(2));
    std::vector<Eigen::VectorXd> spex(1, Eigen::VectorXd(2));
    t2[0] << 0.0, 4.0;
    spex[0] << 1.0, 0.0;
    const auto ranking = rank_variables(t2, spex);
    REQUIRE(ranking[0].first == 0);
    REQUIRE(ranking[0].second == ranking[1].second);
    REQUIRE_THROWS_AS(rank_variables({}, {}), EmptyFaultSet);
}

TEST_CASE("ranking is invariant to uniform positive rescaling") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::vector<Eigen::VectorXd> t2(3, Eigen::VectorXd(6));
    std::vector<Eigen::VectorXd> spex(3, Eigen::VectorXd(6));
    for (auto& v : t2)
        for (long i = 0; i < 6; ++i) v[i] = u(rng);
    for (auto& v : spex)
        for (long i = 0; i < 6; ++i) v[i] = u(rng);
    const auto baseline = rank_variables(t2, spex);
    for (auto& v : t2) v *= 37.0;
    for (auto& v : spex) v *= 37.0;
    REQUIRE(rank_variables(t2, spex) == baseline);
}

namespace {

// Selection data built from the standard fixture plus three pure-jitter
// padding columns that carry no fault information.
SelectionData padded_selection_data() {
    const auto normal = fixtures::healthy_calibration();
    auto [cal_signal, val_signal] = optdetail::split_signal(normal, 0.7);
    auto cal = build_matrix(segment(cal_signal, fixtures::kBatchLen), fixtures::kComponents,
                            normal.sampling_rate_hz);
    auto val = build_matrix(segment(val_signal, fixtures::kBatchLen), fixtures::kComponents,
                            normal.sampling_rate_hz);
    FeatureMatrix fault;
    for (const auto& signal : fixtures::fault_suite()) {
        auto part = build_matrix(segment(signal, fixtures::kBatchLen), fixtures::kComponents,
                                 signal.sampling_rate_hz);
        if (fault.cols() == 0) {
            fault = part;
        } else {
            const long offset = fault.rows();
            fault.values.conservativeResize(offset + part.rows(), Eigen::NoChange);
            fault.values.bottomRows(part.rows()) = part.values;
        }
    }

    const auto degenerate = find_degenerate_columns(cal);
    std::vector<long> keep;
    for (long j = 0; j < cal.cols(); ++j)
        if (std::find(degenerate.begin(), degenerate.end(), j) == degenerate.end()) keep.push_back(j);
    SelectionData data;
    data.cal = select_columns(cal, keep);
    data.val = select_columns(val, keep);
    data.fault = select_columns(fault, keep);

    std::mt19937_64 rng(9999);
    std::uniform_real_distribution<double> jitter(-0.01, 0.01);
    const auto pad = [&](FeatureMatrix& m) {
        const long q = m.cols();
        m.values.conservativeResize(Eigen::NoChange, q + 3);
        for (int p = 0; p < 3; ++p) {
            m.column_names.push_back("pad" + std::to_string(p + 1));
            for (long i = 0; i < m.rows(); ++i) m.values(i, q + p) = 1.0 + jitter(rng);
        }
    };
    pad(data.cal);
    pad(data.val);
    pad(data.fault);
    return data;
}

}  // namespace

TEST_CASE("backward selection drops jitter padding and keeps detection") {
    const auto data = padded_selection_data();
    const auto result = backward_select(data);

    for (const auto& name : {"pad1", "pad2", "pad3"}) {
        CAPTURE(name);
        REQUIRE(std::find(result.selected_columns.begin(), result.selected_columns.end(), name) ==
                result.selected_columns.end());
    }
    REQUIRE(!result.selected_columns.empty());
    REQUIRE(result.final_n_pcs >= 1);

    // every removed column appears in the trace, and only a terminal
    // rejection may appear
    for (std::size_t i = 0; i < result.removal_trace.size(); ++i) {
        if (!result.removal_trace[i].accepted) REQUIRE(i + 1 == result.removal_trace.size());
    }

    // post-hoc: the accepted column set still detects everything with no
    // false alarms
    CalibrateOptions options;
    options.column_override = result.selected_columns;
    const auto bundle = calibrate_from_matrix(data.cal, options);
    const auto cols = chartdetail::indices_of(data.cal.column_names, result.selected_columns);
    const auto score = [&](const Eigen::MatrixXd& values, long row) {
        Eigen::VectorXd v(static_cast<long>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) v[static_cast<long>(j)] = values(row, cols[j]);
        return chartdetail::score_row(bundle, row, v);
    };
    for (long r = 0; r < data.val.rows(); ++r) {
        const auto point = score(data.val.values, r);
        REQUIRE(point.t2 <= bundle.limits.t2_alarm);
        REQUIRE(point.spex <= bundle.limits.spex_alarm);
    }
    for (long r = 0; r < data.fault.rows(); ++r) {
        const auto point = score(data.fault.values, r);
        REQUIRE((point.t2 > bundle.limits.t2_alarm || point.spex > bundle.limits.spex_alarm));
    }
}

TEST_CASE("signal-level backward selection matches the matrix-level path") {
    const auto result = backward_select(fixtures::healthy_calibration(), fixtures::fault_suite(),
                                        fixtures::kBatchLen, fixtures::kComponents);
    REQUIRE(!result.selected_columns.empty());
    for (const auto& step : result.removal_trace)
        if (!step.accepted) REQUIRE(step.column == result.removal_trace.back().column);
}

TEST_CASE("an inadequate base model is reported") {
    auto data = padded_selection_data();
    // "faults" identical to the healthy mean row are undetectable
    data.fault.values.rowwise() = data.cal.values.colwise().mean();
    REQUIRE_THROWS_AS(backward_select(data), BaseModelInadequate);
}
