#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "emolab/dataset.hpp"

namespace emolab {

enum class EmbeddingVariant { Shared, PerEmotion };

std::string_view variant_name(EmbeddingVariant v) noexcept;
EmbeddingVariant parse_variant(std::string_view name);

struct EmbeddingMeta {
    std::string encoder;
    std::string template_id;
    std::vector<std::string> emotions;  // emotion order of PER_EMOTION rows
    std::string created;
    nlohmann::json extra = nlohmann::json::object();  // unrecognised keys, preserved verbatim

    bool operator==(const EmbeddingMeta&) const = default;
};

// Dense float32 vectors aligned to dataset records. SHARED holds n rows;
// PER_EMOTION holds n*k rows in record-major, emotion-minor order.
class EmbeddingSet {
public:
    EmbeddingSet(EmbeddingVariant variant, std::size_t n, std::size_t d, std::size_t k,
                 std::vector<float> data, std::vector<std::string> ids, EmbeddingMeta meta);

    EmbeddingVariant variant() const noexcept { return variant_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return d_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t rows() const noexcept { return variant_ == EmbeddingVariant::Shared ? n_ : n_ * k_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const EmbeddingMeta& meta() const noexcept { return meta_; }
    std::span<const float> data() const noexcept { return data_; }

    // Row of record i (SHARED), or of record i queried for emotion j (PER_EMOTION).
    std::span<const float> row(std::size_t i) const { return {data_.data() + i * d_, d_}; }
    std::span<const float> row(std::size_t i, std::size_t j) const {
        return {data_.data() + (i * k_ + j) * d_, d_};
    }

    std::optional<std::size_t> find(std::string_view id) const;
    // Record index in this set for each id; throws DataError on the first unknown id.
    std::vector<std::size_t> align(std::span<const std::string> ids) const;

    bool operator==(const EmbeddingSet& o) const;

private:
    EmbeddingVariant variant_;
    std::size_t n_, d_, k_;
    std::vector<float> data_;
    std::vector<std::string> ids_;
    EmbeddingMeta meta_;
    std::unordered_map<std::string, std::size_t> index_;
};

// EMBS layout (little-endian):
//   "EMBS" | u32 version=1 | u32 metadata length | metadata JSON (UTF-8)
//   | rows*d f32 | n x (u16 byte length + UTF-8 id bytes)
inline constexpr std::uint32_t kEmbsVersion = 1;

std::string encode_embeddings(const EmbeddingSet& set);
EmbeddingSet decode_embeddings(std::string_view bytes);
void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);
EmbeddingSet read_embeddings(const std::filesystem::path& path);

// Largest | ||row|| - 1 | over all rows.
double max_unit_norm_deviation(const EmbeddingSet& set);

// Emotion j's direction is the j-th standard basis vector of R^d. Requires d >= k.
std::vector<std::vector<double>> synth_basis(std::size_t d, std::size_t k);

// Test-scale encoder substitute: a record's vector is the sum of the basis
// directions of its positive emotions plus N(0, noise^2) per coordinate.
// PER_EMOTION rows add the queried emotion's direction to that vector.
EmbeddingSet synth_embeddings(const LabeledDataset& ds, std::size_t d, std::uint64_t seed,
                              EmbeddingVariant variant, double noise);

}  // namespace emolab
