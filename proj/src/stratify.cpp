#include "emolab/stratify.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "emolab/error.hpp"
#include "emolab/rng.hpp"

namespace emolab {

namespace {

constexpr std::size_t kTrain = 0;
constexpr std::size_t kVal = 1;

}  // namespace

SplitResult iterative_stratified_split(const LabeledDataset& ds, double train_fraction,
                                       std::uint64_t seed) {
    const std::size_t n = ds.size();
    const std::size_t k = ds.k();
    if (n < 2) throw DataError("stratified split needs at least 2 records");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train fraction must lie in (0, 1)");
    }

    const std::array<double, 2> ratio{train_fraction, 1.0 - train_fraction};
    std::array<double, 2> capacity{ratio[0] * static_cast<double>(n), ratio[1] * static_cast<double>(n)};

    const auto counts = label_counts(ds);
    // demand[s][j]: positives of emotion j still wanted by subset s.
    std::array<std::vector<double>, 2> demand;
    for (std::size_t s = 0; s < 2; ++s) {
        demand[s].resize(k);
        for (std::size_t j = 0; j < k; ++j) demand[s][j] = ratio[s] * static_cast<double>(counts[j].positives);
    }

    std::vector<std::size_t> remaining(k);
    for (std::size_t j = 0; j < k; ++j) remaining[j] = counts[j].positives;

    // Emotion visiting priority among equal counts: alphabetical by name.
    std::vector<std::size_t> by_name(k);
    std::iota(by_name.begin(), by_name.end(), 0);
    std::sort(by_name.begin(), by_name.end(),
              [&](std::size_t a, std::size_t b) { return ds.schema()[a] < ds.schema()[b]; });

    Rng rng(seed);
    std::vector<int> assigned(n, -1);
    auto assign = [&](std::size_t i, std::size_t s) {
        assigned[i] = static_cast<int>(s);
        capacity[s] -= 1.0;
        const auto& labels = ds[i].labels;
        for (std::size_t j = 0; j < k; ++j) {
            if (!labels[j]) continue;
            demand[s][j] -= 1.0;
            --remaining[j];
        }
    };
    auto pick_by_capacity = [&]() -> std::size_t {
        if (capacity[kTrain] > capacity[kVal]) return kTrain;
        if (capacity[kVal] > capacity[kTrain]) return kVal;
        return rng.coin() ? kTrain : kVal;
    };

    for (;;) {
        std::size_t label = k;
        for (auto j : by_name) {
            if (remaining[j] == 0) continue;
            if (label == k || remaining[j] < remaining[label]) label = j;
        }
        if (label == k) break;

        for (std::size_t i = 0; i < n; ++i) {
            if (assigned[i] >= 0 || !ds[i].labels[label]) continue;
            std::size_t target;
            if (demand[kTrain][label] > demand[kVal][label]) target = kTrain;
            else if (demand[kVal][label] > demand[kTrain][label]) target = kVal;
            else target = pick_by_capacity();
            assign(i, target);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (assigned[i] < 0) assign(i, pick_by_capacity());
    }

    SplitResult out;
    out.train_fraction = train_fraction;
    out.seed = seed;
    for (std::size_t i = 0; i < n; ++i) {
        (assigned[i] == static_cast<int>(kTrain) ? out.train_indices : out.val_indices).push_back(i);
    }
    return out;
}

std::uint32_t stable_language_hash(std::string_view code) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : code) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

std::map<std::string, SplitResult> split_by_language(std::span<const LabeledDataset> datasets,
                                                     double train_fraction, std::uint64_t seed) {
    std::map<std::string, SplitResult> out;
    for (const auto& ds : datasets) {
        if (out.contains(ds.language())) {
            throw ConfigError("duplicate language code: '" + ds.language() + "'");
        }
        out.emplace(ds.language(),
                    iterative_stratified_split(ds, train_fraction, seed + stable_language_hash(ds.language())));
    }
    return out;
}

nlohmann::json split_to_json(const LabeledDataset& ds, const SplitResult& split) {
    nlohmann::json train = nlohmann::json::array(), val = nlohmann::json::array();
    for (auto i : split.train_indices) train.push_back(ds[i].id);
    for (auto i : split.val_indices) val.push_back(ds[i].id);
    return {{"language", ds.language()}, {"seed", split.seed}, {"train_ids", train}, {"val_ids", val}};
}

}  // namespace emolab
