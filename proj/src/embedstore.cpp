#include "emolab/embedstore.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "emolab/csv.hpp"
#include "emolab/error.hpp"
#include "emolab/rng.hpp"

namespace emolab {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', 'S'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>(v >> 8));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::string_view take(std::size_t count, const char* what) {
        if (bytes_.size() - pos_ < count) {
            throw DataError(std::string("embs: truncated ") + what);
        }
        auto out = bytes_.substr(pos_, count);
        pos_ += count;
        return out;
    }
    std::uint32_t u32(const char* what) {
        auto b = take(4, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
        return v;
    }
    std::uint16_t u16(const char* what) {
        auto b = take(2, what);
        return static_cast<std::uint16_t>(static_cast<unsigned char>(b[0]) |
                                          (static_cast<unsigned char>(b[1]) << 8));
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::size_t meta_size(const nlohmann::json& meta, const char* key) {
    if (!meta.contains(key) || !meta[key].is_number_unsigned()) {
        throw DataError(std::string("embs: metadata field '") + key + "' missing or not a count");
    }
    return meta[key].get<std::size_t>();
}

std::string meta_string(const nlohmann::json& meta, const char* key) {
    if (!meta.contains(key)) return {};
    if (!meta[key].is_string()) throw DataError(std::string("embs: metadata field '") + key + "' is not a string");
    return meta[key].get<std::string>();
}

}  // namespace

std::string_view variant_name(EmbeddingVariant v) noexcept {
    return v == EmbeddingVariant::Shared ? "shared" : "per_emotion";
}

EmbeddingVariant parse_variant(std::string_view name) {
    if (name == "shared" || name == "SHARED") return EmbeddingVariant::Shared;
    if (name == "per_emotion" || name == "PER_EMOTION") return EmbeddingVariant::PerEmotion;
    throw ConfigError("unknown embedding variant: '" + std::string(name) + "'");
}

EmbeddingSet::EmbeddingSet(EmbeddingVariant variant, std::size_t n, std::size_t d, std::size_t k,
                           std::vector<float> data, std::vector<std::string> ids, EmbeddingMeta meta)
    : variant_(variant), n_(n), d_(d), k_(k), data_(std::move(data)), ids_(std::move(ids)),
      meta_(std::move(meta)) {
    if (d_ == 0) throw DataError("embedding dimension must be positive");
    if (variant_ == EmbeddingVariant::PerEmotion && k_ == 0) {
        throw DataError("per-emotion embeddings need k >= 1");
    }
    if (variant_ == EmbeddingVariant::PerEmotion && !meta_.emotions.empty() &&
        meta_.emotions.size() != k_) {
        throw DataError("per-emotion embeddings: emotion order length differs from k");
    }
    if (ids_.size() != n_) throw DataError("embedding id count differs from n");
    if (data_.size() != rows() * d_) throw DataError("embedding payload size differs from rows*d");
    for (float v : data_) {
        if (!std::isfinite(v)) throw DataError("embedding contains a non-finite value");
    }
    index_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (ids_[i].size() > 0xFFFF) throw DataError("embedding id longer than 65535 bytes");
        if (!index_.emplace(ids_[i], i).second) throw DataError("duplicate embedding id: '" + ids_[i] + "'");
    }
}

std::optional<std::size_t> EmbeddingSet::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> EmbeddingSet::align(std::span<const std::string> ids) const {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        auto i = find(id);
        if (!i) throw DataError("id '" + id + "' has no embedding");
        out.push_back(*i);
    }
    return out;
}

bool EmbeddingSet::operator==(const EmbeddingSet& o) const {
    return variant_ == o.variant_ && n_ == o.n_ && d_ == o.d_ && k_ == o.k_ && ids_ == o.ids_ &&
           meta_ == o.meta_ && data_.size() == o.data_.size() &&
           std::memcmp(data_.data(), o.data_.data(), data_.size() * sizeof(float)) == 0;
}

std::string encode_embeddings(const EmbeddingSet& set) {
    nlohmann::json meta = set.meta().extra.is_object() ? set.meta().extra : nlohmann::json::object();
    meta["n"] = set.n();
    meta["d"] = set.d();
    meta["k"] = set.k();
    meta["variant"] = variant_name(set.variant());
    meta["dtype"] = "f32le";
    meta["encoder"] = set.meta().encoder;
    meta["template_id"] = set.meta().template_id;
    meta["emotions"] = set.meta().emotions;
    meta["created"] = set.meta().created;
    const std::string blob = meta.dump();

    std::string out(kMagic, 4);
    put_u32(out, kEmbsVersion);
    put_u32(out, static_cast<std::uint32_t>(blob.size()));
    out += blob;
    out.reserve(out.size() + set.data().size() * 4);
    for (float v : set.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
    for (const auto& id : set.ids()) {
        put_u16(out, static_cast<std::uint16_t>(id.size()));
        out += id;
    }
    return out;
}

EmbeddingSet decode_embeddings(std::string_view bytes) {
    Reader in(bytes);
    if (in.take(4, "magic") != std::string_view(kMagic, 4)) throw DataError("embs: bad magic bytes");
    const auto version = in.u32("version");
    if (version != kEmbsVersion) {
        throw DataError("embs: unsupported version " + std::to_string(version));
    }
    const auto meta_len = in.u32("metadata length");
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(in.take(meta_len, "metadata"));
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("embs: metadata is not valid JSON: ") + e.what());
    }
    if (!meta.is_object()) throw DataError("embs: metadata is not a JSON object");
    if (meta_string(meta, "dtype") != "f32le") throw DataError("embs: unsupported dtype");

    const auto n = meta_size(meta, "n");
    const auto d = meta_size(meta, "d");
    const auto k = meta_size(meta, "k");
    EmbeddingVariant variant;
    try {
        variant = parse_variant(meta_string(meta, "variant"));
    } catch (const ConfigError& e) {
        throw DataError(std::string("embs: ") + e.what());
    }
    const std::size_t rows = variant == EmbeddingVariant::Shared ? n : n * k;
    if (d != 0 && rows > in.remaining() / 4 / d) {
        throw DataError("embs: truncated payload (metadata declares more rows than present)");
    }

    std::vector<float> data(rows * d);
    const auto payload = in.take(data.size() * 4, "payload");
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::uint32_t v = 0;
        for (int b = 3; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(payload[i * 4 + b]);
        data[i] = std::bit_cast<float>(v);
    }
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto len = in.u16("id table");
        ids.emplace_back(in.take(len, "id table"));
    }
    if (in.remaining() != 0) {
        throw DataError("embs: " + std::to_string(in.remaining()) +
                        " trailing bytes (metadata/payload size disagreement)");
    }

    EmbeddingMeta m;
    m.encoder = meta_string(meta, "encoder");
    m.template_id = meta_string(meta, "template_id");
    m.created = meta_string(meta, "created");
    if (meta.contains("emotions")) {
        if (!meta["emotions"].is_array()) throw DataError("embs: 'emotions' is not an array");
        for (const auto& e : meta["emotions"]) {
            if (!e.is_string()) throw DataError("embs: emotion name is not a string");
            m.emotions.push_back(e.get<std::string>());
        }
    }
    for (const char* key : {"n", "d", "k", "variant", "dtype", "encoder", "template_id", "emotions", "created"}) {
        meta.erase(key);
    }
    m.extra = std::move(meta);
    return EmbeddingSet(variant, n, d, k, std::move(data), std::move(ids), std::move(m));
}

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
    csv::write_file(path, encode_embeddings(set));
}

EmbeddingSet read_embeddings(const std::filesystem::path& path) {
    try {
        return decode_embeddings(csv::read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

double max_unit_norm_deviation(const EmbeddingSet& set) {
    double worst = 0.0;
    for (std::size_t r = 0; r < set.rows(); ++r) {
        double sq = 0.0;
        for (float v : set.row(r)) sq += static_cast<double>(v) * v;
        worst = std::max(worst, std::abs(std::sqrt(sq) - 1.0));
    }
    return worst;
}

std::vector<std::vector<double>> synth_basis(std::size_t d, std::size_t k) {
    if (d < k) throw ConfigError("synth: dimension d must be >= emotion count k");
    std::vector<std::vector<double>> basis(k, std::vector<double>(d, 0.0));
    for (std::size_t j = 0; j < k; ++j) basis[j][j] = 1.0;
    return basis;
}

EmbeddingSet synth_embeddings(const LabeledDataset& ds, std::size_t d, std::uint64_t seed,
                              EmbeddingVariant variant, double noise) {
    const std::size_t k = ds.k();
    if (d < k) throw ConfigError("synth: dimension d must be >= emotion count k");
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw ConfigError("synth: noise must be non-negative");
    const auto basis = synth_basis(d, k);
    Rng rng(seed);

    const std::size_t n = ds.size();
    const std::size_t per_record = variant == EmbeddingVariant::Shared ? 1 : k;
    std::vector<float> data;
    data.reserve(n * per_record * d);
    std::vector<double> x(d);
    for (const auto& rec : ds.records()) {
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            if (!rec.labels[j]) continue;
            for (std::size_t i = 0; i < d; ++i) x[i] += basis[j][i];
        }
        if (noise > 0.0) {
            for (auto& v : x) v += noise * rng.normal();
        }
        if (variant == EmbeddingVariant::Shared) {
            for (double v : x) data.push_back(static_cast<float>(v));
        } else {
            for (std::size_t q = 0; q < k; ++q) {
                for (std::size_t i = 0; i < d; ++i) data.push_back(static_cast<float>(x[i] + basis[q][i]));
            }
        }
    }

    EmbeddingMeta meta;
    meta.encoder = "synthetic";
    meta.template_id = "none";
    meta.emotions = ds.schema().emotions();
    meta.created = "synth_embeddings seed=" + std::to_string(seed) + " d=" + std::to_string(d);
    meta.extra["noise"] = noise;
    return EmbeddingSet(variant, n, d, k, std::move(data), ds.ids(), std::move(meta));
}

}  // namespace emolab
