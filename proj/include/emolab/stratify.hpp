#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emolab/dataset.hpp"

namespace emolab {

struct SplitResult {
    std::vector<std::size_t> train_indices;  // ascending
    std::vector<std::size_t> val_indices;    // ascending
    double train_fraction = 0.8;
    std::uint64_t seed = 42;
};

// Greedy iterative stratification into train/validation. The emotion with
// the fewest unassigned positives is handled first (ties: alphabetical
// emotion name); each of its unassigned positives goes to the subset with the
// largest remaining demand for that emotion, then the larger remaining
// capacity, then a seeded coin flip. Records without positives fill the
// remaining capacity. Demands are real-valued and decremented per assignment.
SplitResult iterative_stratified_split(const LabeledDataset& ds, double train_fraction,
                                       std::uint64_t seed);

// 32-bit FNV-1a over the code bytes.
std::uint32_t stable_language_hash(std::string_view code);

// Splits each language independently with seed + stable_language_hash(code).
std::map<std::string, SplitResult> split_by_language(std::span<const LabeledDataset> datasets,
                                                     double train_fraction, std::uint64_t seed);

// {language, seed, train_ids, val_ids}; seed is the one the split used.
nlohmann::json split_to_json(const LabeledDataset& ds, const SplitResult& split);

}  // namespace emolab
