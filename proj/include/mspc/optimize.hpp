// mspc/optimize.hpp - GA search over (batch length, component count) and
// backward variable selection
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mspc/charts.hpp"
#include "mspc/errors.hpp"
#include "mspc/signal.hpp"

namespace mspc {

struct GaConfig {
    long k_min = 1000;
    long k_max = 8000;
    int n_min = 1;
    int n_max = 8;
    int population = 20;
    int generations = 30;
    int tournament_size = 3;
    double mutation_rate = 0.2;
    int elitism_count = 1;
    std::uint64_t seed = 1;
    double split_ratio = 0.7;
};

struct GaIndividual {
    long k = 0;
    int n = 0;
    double fitness = std::numeric_limits<double>::infinity();
};

struct GaResult {
    long k_opt = 0;
    int n_opt = 0;
    double best_fitness = std::numeric_limits<double>::infinity();
    std::vector<double> history;               // best fitness per generation, non-increasing
    std::vector<GaIndividual> history_best;    // best-so-far individual per generation
    std::vector<GaIndividual> final_population;
};

/// Called once per individual per generation, after evaluation.
using GaObserver = std::function<void(const GaIndividual&)>;

namespace optdetail {

inline std::pair<SignalSeries, SignalSeries> split_signal(const SignalSeries& signal,
                                                          double ratio) {
    const auto len = static_cast<long>(signal.samples.size());
    const long cut = static_cast<long>(std::floor(len * ratio));
    SignalSeries head = signal;
    head.samples.assign(signal.samples.begin(), signal.samples.begin() + cut);
    head.source_id = signal.source_id + ":cal";
    SignalSeries tail = signal;
    tail.samples.assign(signal.samples.begin() + cut, signal.samples.end());
    tail.source_id = signal.source_id + ":val";
    return {std::move(head), std::move(tail)};
}

}  // namespace optdetail

/// False alarms on held-out healthy batches, plus a bounded margin term so
/// the alarm count always dominates the ordering. Infeasible candidates
/// (either split yields fewer than 2 batches, or calibration fails) score
/// +infinity.
inline double fitness(long k, int n, const SignalSeries& normal_signal, double split_ratio = 0.7) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (k < 8 || n < 1 || n > k / 2) return inf;
    auto [cal, val] = optdetail::split_signal(normal_signal, split_ratio);
    if (static_cast<long>(cal.samples.size()) / k < 2 ||
        static_cast<long>(val.samples.size()) / k < 2)
        return inf;
    try {
        const ModelBundle bundle = calibrate_bundle(cal, k, n);
        const auto points = monitor(bundle, val);
        long alarms = 0;
        double margin = 0.0;
        for (const auto& p : points) {
            const bool exceeded =
                p.t2 > bundle.limits.t2_alarm || p.spex > bundle.limits.spex_alarm;
            if (exceeded) ++alarms;
            margin += std::max(0.0, p.t2 - bundle.limits.t2_alarm) / bundle.limits.t2_alarm;
            margin += std::max(0.0, p.spex - bundle.limits.spex_alarm) / bundle.limits.spex_alarm;
        }
        return static_cast<double>(alarms) + margin / (1.0 + margin);
    } catch (const Error&) {
        return inf;
    }
}

/// Integer-coded GA: tournament selection, uniform crossover, bounded
/// uniform-redraw mutation, elitism. Deterministic under the config seed.
inline GaResult ga_optimize(const SignalSeries& normal_signal, const GaConfig& cfg,
                            const GaObserver& observer = {}) {
    if (cfg.k_min < 64) throw InfeasibleBounds("k_min must be at least 64");
    if (cfg.k_max < cfg.k_min) throw InfeasibleBounds("k_max below k_min");
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw InfeasibleBounds("bad component bounds");
    if (cfg.n_max > cfg.k_min / 2) throw InfeasibleBounds("n_max exceeds k_min/2");
    if (cfg.population < 4) throw InfeasibleBounds("population must be at least 4");
    if (cfg.generations < 1) throw InfeasibleBounds("generations must be at least 1");
    if (cfg.tournament_size < 1 || cfg.tournament_size > cfg.population)
        throw InfeasibleBounds("tournament size outside [1, population]");
    if (cfg.mutation_rate < 0.0 || cfg.mutation_rate > 1.0)
        throw InfeasibleBounds("mutation rate outside [0, 1]");
    if (cfg.elitism_count < 1 || cfg.elitism_count >= cfg.population)
        throw InfeasibleBounds("elitism count outside [1, population)");
    if (cfg.split_ratio <= 0.0 || cfg.split_ratio >= 1.0)
        throw InfeasibleBounds("split ratio outside (0, 1)");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<long> k_draw(cfg.k_min, cfg.k_max);
    std::uniform_int_distribution<int> n_draw(cfg.n_min, cfg.n_max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, cfg.population - 1);

    std::map<std::pair<long, int>, double> cache;
    const auto evaluate = [&](GaIndividual& ind) {
        const auto key = std::make_pair(ind.k, ind.n);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, fitness(ind.k, ind.n, normal_signal, cfg.split_ratio)).first;
        ind.fitness = it->second;
        if (observer) observer(ind);
    };

    std::vector<GaIndividual> population(static_cast<std::size_t>(cfg.population));
    for (auto& ind : population) {
        ind.k = k_draw(rng);
        ind.n = n_draw(rng);
    }

    const auto tournament = [&]() -> const GaIndividual& {
        const GaIndividual* best = &population[static_cast<std::size_t>(pick(rng))];
        for (int i = 1; i < cfg.tournament_size; ++i) {
            const GaIndividual* contender = &population[static_cast<std::size_t>(pick(rng))];
            if (contender->fitness < best->fitness) best = contender;
        }
        return *best;
    };

    GaResult result;
    GaIndividual best_ever;
    for (int gen = 0; gen < cfg.generations; ++gen) {
        for (auto& ind : population) evaluate(ind);
        std::stable_sort(population.begin(), population.end(),
                         [](const GaIndividual& a, const GaIndividual& b) {
                             return a.fitness < b.fitness;
                         });
        if (population.front().fitness < best_ever.fitness) best_ever = population.front();
        result.history.push_back(best_ever.fitness);

        if (gen + 1 == cfg.generations) break;
        std::vector<GaIndividual> next;
        next.reserve(population.size());
        for (int e = 0; e < cfg.elitism_count; ++e)
            next.push_back(population[static_cast<std::size_t>(e)]);
        while (next.size() < population.size()) {
            const GaIndividual& a = tournament();
            const GaIndividual& b = tournament();
            GaIndividual child;
            child.k = unit(rng) < 0.5 ? a.k : b.k;
            child.n = unit(rng) < 0.5 ? a.n : b.n;
            if (unit(rng) < cfg.mutation_rate) child.k = k_draw(rng);
            if (unit(rng) < cfg.mutation_rate) child.n = n_draw(rng);
            next.push_back(child);
        }
        population = std::move(next);
    }

    result.k_opt = best_ever.k;
    result.n_opt = best_ever.n;
    result.best_fitness = best_ever.fitness;
    result.final_population = population;
    return result;
}

// ---- backward variable selection --------------------------------------------

struct RemovalStep {
    std::string column;
    int combined_rank = 0;
    bool accepted = false;
};

struct SelectionResult {
    std::vector<std::string> selected_columns;
    std::vector<RemovalStep> removal_trace;
    int final_n_pcs = 0;
};

/// Columns ordered least-useful-first by combined T^2/SPEx contribution rank.
/// Per chart, the mean squared contribution across fault batches is ranked
/// ascending; the combined rank is the sum, with ties broken by column order.
/// Returns (column index, combined rank) pairs.
inline std::vector<std::pair<long, int>> rank_variables(
    const std::vector<Eigen::VectorXd>& t2_contribs,
    const std::vector<Eigen::VectorXd>& spex_contribs) {
    if (t2_contribs.empty() || spex_contribs.empty())
        throw EmptyFaultSet("need at least one fault batch to rank variables");
    const long q = t2_contribs.front().size();
    for (const auto& v : t2_contribs)
        if (v.size() != q) throw DimensionMismatch("inconsistent contribution length");
    for (const auto& v : spex_contribs)
        if (v.size() != q) throw DimensionMismatch("inconsistent contribution length");

    const auto mean_squared = [q](const std::vector<Eigen::VectorXd>& contribs) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(q);
        for (const auto& v : contribs) acc += v.array().square().matrix();
        return Eigen::VectorXd(acc / static_cast<double>(contribs.size()));
    };
    const Eigen::VectorXd t2_ms = mean_squared(t2_contribs);
    const Eigen::VectorXd spex_ms = mean_squared(spex_contribs);

    const auto ranks_of = [q](const Eigen::VectorXd& values) {
        std::vector<long> order(static_cast<std::size_t>(q));
        std::iota(order.begin(), order.end(), 0L);
        std::stable_sort(order.begin(), order.end(), [&values](long a, long b) {
            return values[a] < values[b];
        });
        std::vector<int> ranks(static_cast<std::size_t>(q));
        for (std::size_t r = 0; r < order.size(); ++r)
            ranks[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
        return ranks;
    };
    const auto t2_ranks = ranks_of(t2_ms);
    const auto spex_ranks = ranks_of(spex_ms);

    std::vector<std::pair<long, int>> combined(static_cast<std::size_t>(q));
    for (long j = 0; j < q; ++j)
        combined[static_cast<std::size_t>(j)] = {
            j, t2_ranks[static_cast<std::size_t>(j)] + spex_ranks[static_cast<std::size_t>(j)]};
    std::stable_sort(combined.begin(), combined.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    return combined;
}

/// Inputs to selection, prepared once: healthy calibration and validation
/// feature rows plus the pooled fault rows, all over the same column set
/// (degenerate columns already removed).
struct SelectionData {
    FeatureMatrix cal;
    FeatureMatrix val;
    FeatureMatrix fault;
    T2ContributionForm t2_form = T2ContributionForm::PaperResidual;
};

namespace optdetail {

struct SelectionFit {
    ModelBundle bundle;
    bool all_faults_detected = false;
    bool zero_false_alarms = false;
    std::vector<Eigen::VectorXd> fault_t2_contribs;
    std::vector<Eigen::VectorXd> fault_spex_contribs;
};

inline Eigen::VectorXd row_restricted(const Eigen::MatrixXd& values, long row,
                                      const std::vector<long>& cols) {
    Eigen::VectorXd out(static_cast<long>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out[static_cast<long>(j)] = values(row, cols[j]);
    return out;
}

inline SelectionFit fit_and_check(const SelectionData& data, const std::vector<long>& cols) {
    SelectionFit fit;
    CalibrateOptions options;
    options.t2_form = data.t2_form;
    for (long j : cols)
        options.column_override.push_back(data.cal.column_names[static_cast<std::size_t>(j)]);
    fit.bundle = calibrate_from_matrix(data.cal, options);

    const auto& limits = fit.bundle.limits;
    const auto score = [&](const Eigen::MatrixXd& values, long row) {
        return chartdetail::score_row(fit.bundle, row, row_restricted(values, row, cols));
    };

    fit.zero_false_alarms = true;
    for (long r = 0; r < data.val.rows(); ++r) {
        const auto point = score(data.val.values, r);
        if (point.t2 > limits.t2_alarm || point.spex > limits.spex_alarm) {
            fit.zero_false_alarms = false;
            break;
        }
    }

    fit.all_faults_detected = data.fault.rows() > 0;
    for (long r = 0; r < data.fault.rows(); ++r) {
        const auto point = score(data.fault.values, r);
        if (!(point.t2 > limits.t2_alarm || point.spex > limits.spex_alarm))
            fit.all_faults_detected = false;
        fit.fault_t2_contribs.push_back(point.t2_contrib);
        fit.fault_spex_contribs.push_back(point.spex_contrib);
    }
    return fit;
}

}  // namespace optdetail

/// Iteratively removes the least-useful column; a removal is kept only if
/// every fault batch still alarms and the healthy validation rows raise no
/// false alarm. The first rejected removal is reverted and ends the search.
inline SelectionResult backward_select(const SelectionData& data) {
    if (data.fault.rows() < 1) throw EmptyFaultSet("no fault batches supplied");
    if (data.cal.cols() != data.val.cols() || data.cal.cols() != data.fault.cols())
        throw DimensionMismatch("selection matrices must share columns");

    std::vector<long> cols(static_cast<std::size_t>(data.cal.cols()));
    std::iota(cols.begin(), cols.end(), 0L);

    auto fit = optdetail::fit_and_check(data, cols);
    if (!fit.all_faults_detected || !fit.zero_false_alarms)
        throw BaseModelInadequate(
            "base model must detect every fault batch with zero validation false alarms");

    SelectionResult result;
    while (cols.size() > 1) {
        const auto ranking = rank_variables(fit.fault_t2_contribs, fit.fault_spex_contribs);
        const long victim_pos = ranking.front().first;  // index within current cols
        const int combined_rank = ranking.front().second;
        const std::string victim_name =
            data.cal.column_names[static_cast<std::size_t>(cols[static_cast<std::size_t>(victim_pos)])];

        std::vector<long> reduced = cols;
        reduced.erase(reduced.begin() + victim_pos);

        bool accepted = false;
        optdetail::SelectionFit candidate;
        try {
            candidate = optdetail::fit_and_check(data, reduced);
            accepted = candidate.all_faults_detected && candidate.zero_false_alarms;
        } catch (const Error&) {
            accepted = false;  // a removal that breaks fitting is rejected
        }

        result.removal_trace.push_back({victim_name, combined_rank, accepted});
        if (!accepted) break;
        cols = std::move(reduced);
        fit = std::move(candidate);
    }

    for (long j : cols)
        result.selected_columns.push_back(data.cal.column_names[static_cast<std::size_t>(j)]);
    result.final_n_pcs = fit.bundle.pca.n_pcs;
    return result;
}

/// Signal-level wrapper: builds the selection matrices through the standard
/// pipeline (split healthy signal, segment, decompose, drop degenerate
/// columns) and runs the column-level search.
inline SelectionResult backward_select(const SignalSeries& normal_signal,
                                       const std::vector<SignalSeries>& fault_signals,
                                       long batch_len, int n_components,
                                       double split_ratio = 0.7,
                                       T2ContributionForm t2_form = T2ContributionForm::PaperResidual) {
    if (!normal_signal.label.is_normal())
        throw LabelError("selection baseline must be healthy data");
    if (fault_signals.empty()) throw EmptyFaultSet("no fault signals supplied");

    auto [cal_signal, val_signal] = optdetail::split_signal(normal_signal, split_ratio);
    const auto cal_full =
        build_matrix(segment(cal_signal, batch_len), n_components, normal_signal.sampling_rate_hz);
    const auto val_full =
        build_matrix(segment(val_signal, batch_len), n_components, normal_signal.sampling_rate_hz);

    FeatureMatrix fault_full;
    for (const auto& fault : fault_signals) {
        const auto part =
            build_matrix(segment(fault, batch_len), n_components, fault.sampling_rate_hz);
        if (fault_full.cols() == 0) {
            fault_full = part;
        } else {
            const long offset = fault_full.rows();
            fault_full.values.conservativeResize(offset + part.rows(), Eigen::NoChange);
            fault_full.values.bottomRows(part.rows()) = part.values;
        }
    }

    const auto degenerate = find_degenerate_columns(cal_full);
    std::vector<long> keep;
    for (long j = 0; j < cal_full.cols(); ++j)
        if (std::find(degenerate.begin(), degenerate.end(), j) == degenerate.end()) keep.push_back(j);

    SelectionData data;
    data.cal = select_columns(cal_full, keep);
    data.val = select_columns(val_full, keep);
    data.fault = select_columns(fault_full, keep);
    data.t2_form = t2_form;
    return backward_select(data);
}

}  // namespace mspc
