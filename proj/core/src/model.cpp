#include "scn/model.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "scn/errors.hpp"

namespace scn {

ScnModel ScnModel::random(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                          std::size_t feature_dim, int classes, double delta1, Rng& rng) {
    std::vector<std::size_t> dims;
    dims.push_back(input_dim);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(feature_dim);

    ScnModel model;
    model.backbone = MlpBackbone::random(dims, rng);
    model.attention = AttentionHead::random(feature_dim, rng);
    model.classifier = Classifier::random(feature_dim, classes, rng);
    model.delta1 = delta1;
    return model;
}

std::size_t ScnModel::parameter_count(bool include_delta1) const {
    std::size_t n = backbone.parameter_count();
    n += attention.weights.size() + (attention.use_bias ? 1 : 0);
    n += classifier.weights.size();
    if (include_delta1) n += 1;
    return n;
}

std::vector<double> ScnModel::flatten_params(bool include_delta1) const {
    std::vector<double> flat;
    flat.reserve(parameter_count(include_delta1));
    backbone.append_params(flat);
    flat.insert(flat.end(), attention.weights.begin(), attention.weights.end());
    if (attention.use_bias) flat.push_back(attention.bias);
    flat.insert(flat.end(), classifier.weights.data().begin(), classifier.weights.data().end());
    if (include_delta1) flat.push_back(delta1);
    return flat;
}

void ScnModel::set_params(const std::vector<double>& flat, bool include_delta1) {
    if (flat.size() != parameter_count(include_delta1))
        throw ShapeError("ScnModel::set_params: expected " +
                         std::to_string(parameter_count(include_delta1)) + " values, got " +
                         std::to_string(flat.size()));
    std::size_t off = backbone.read_params(flat, 0);
    for (double& v : attention.weights) v = flat[off++];
    if (attention.use_bias) attention.bias = flat[off++];
    for (double& v : classifier.weights.data()) v = flat[off++];
    if (include_delta1) delta1 = flat[off++];
}

bool ScnModel::operator==(const ScnModel& other) const {
    return backbone == other.backbone && attention.weights == other.attention.weights &&
           attention.bias == other.attention.bias && attention.use_bias == other.attention.use_bias &&
           classifier.weights == other.classifier.weights && delta1 == other.delta1;
}

// ---------------------------------------------------------------------------
// Checkpoint format (little-endian):
//   magic "SCNMDL01", u32 layer count,
//   per layer: u32 rows, u32 cols, f64 weights row-major, f64 biases,
//   u8 attention bias flag, u32 attention dim, f64 weights [, f64 bias],
//   u32 classifier rows, u32 classifier cols, f64 weights,
//   f64 delta1.
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'S', 'C', 'N', 'M', 'D', 'L', '0', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    std::memcpy(buf, &v, 4);
    out.write(buf, 4);
}

void put_u8(std::ostream& out, std::uint8_t v) {
    out.write(reinterpret_cast<const char*>(&v), 1);
}

void put_f64(std::ostream& out, double v) {
    char buf[8];
    std::memcpy(buf, &v, 8);
    out.write(buf, 8);
}

std::uint32_t get_u32(std::istream& in, const char* what) {
    char buf[4];
    if (!in.read(buf, 4)) throw ParseError(std::string("checkpoint: truncated at ") + what);
    std::uint32_t v;
    std::memcpy(&v, buf, 4);
    return v;
}

std::uint8_t get_u8(std::istream& in, const char* what) {
    char b;
    if (!in.read(&b, 1)) throw ParseError(std::string("checkpoint: truncated at ") + what);
    return static_cast<std::uint8_t>(b);
}

double get_f64(std::istream& in, const char* what) {
    char buf[8];
    if (!in.read(buf, 8)) throw ParseError(std::string("checkpoint: truncated at ") + what);
    double v;
    std::memcpy(&v, buf, 8);
    return v;
}

}  // namespace

void save_checkpoint(const ScnModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_checkpoint: cannot open " + path.string());
    out.write(kMagic, sizeof(kMagic));

    put_u32(out, static_cast<std::uint32_t>(model.backbone.layer_count()));
    for (std::size_t k = 0; k < model.backbone.layer_count(); ++k) {
        const Tensor2D& w = model.backbone.weight(k);
        put_u32(out, static_cast<std::uint32_t>(w.rows()));
        put_u32(out, static_cast<std::uint32_t>(w.cols()));
        for (double v : w.data()) put_f64(out, v);
        for (double v : model.backbone.bias(k)) put_f64(out, v);
    }

    put_u8(out, model.attention.use_bias ? 1 : 0);
    put_u32(out, static_cast<std::uint32_t>(model.attention.weights.size()));
    for (double v : model.attention.weights) put_f64(out, v);
    if (model.attention.use_bias) put_f64(out, model.attention.bias);

    put_u32(out, static_cast<std::uint32_t>(model.classifier.weights.rows()));
    put_u32(out, static_cast<std::uint32_t>(model.classifier.weights.cols()));
    for (double v : model.classifier.weights.data()) put_f64(out, v);

    put_f64(out, model.delta1);
    if (!out) throw IoError("save_checkpoint: write failed for " + path.string());
}

ScnModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_checkpoint: cannot open " + path.string());

    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ParseError("load_checkpoint: bad magic in " + path.string());

    const std::uint32_t layers = get_u32(in, "layer count");
    if (layers == 0 || layers > 64) throw ParseError("load_checkpoint: implausible layer count");
    std::vector<Tensor2D> weights;
    std::vector<std::vector<double>> biases;
    for (std::uint32_t k = 0; k < layers; ++k) {
        const std::uint32_t rows = get_u32(in, "layer rows");
        const std::uint32_t cols = get_u32(in, "layer cols");
        if (rows == 0 || cols == 0) throw ParseError("load_checkpoint: zero layer dimension");
        Tensor2D w(rows, cols);
        for (double& v : w.data()) v = get_f64(in, "layer weights");
        std::vector<double> b(cols);
        for (double& v : b) v = get_f64(in, "layer biases");
        weights.push_back(std::move(w));
        biases.push_back(std::move(b));
    }

    ScnModel model;
    model.backbone = MlpBackbone::from_layers(std::move(weights), std::move(biases));

    model.attention.use_bias = get_u8(in, "attention flag") != 0;
    const std::uint32_t attn_dim = get_u32(in, "attention dim");
    if (attn_dim != model.backbone.feature_dim())
        throw ParseError("load_checkpoint: attention dim does not match feature dim");
    model.attention.weights.resize(attn_dim);
    for (double& v : model.attention.weights) v = get_f64(in, "attention weights");
    if (model.attention.use_bias) model.attention.bias = get_f64(in, "attention bias");

    const std::uint32_t crows = get_u32(in, "classifier rows");
    const std::uint32_t ccols = get_u32(in, "classifier cols");
    if (crows != model.backbone.feature_dim())
        throw ParseError("load_checkpoint: classifier rows do not match feature dim");
    if (ccols < 2) throw ParseError("load_checkpoint: classifier needs at least 2 classes");
    model.classifier.weights = Tensor2D(crows, ccols);
    for (double& v : model.classifier.weights.data()) v = get_f64(in, "classifier weights");

    model.delta1 = get_f64(in, "delta1");

    // Anything left over is a malformed file, not a newer version.
    char extra;
    if (in.read(&extra, 1)) throw ParseError("load_checkpoint: trailing bytes in " + path.string());
    return model;
}

}  // namespace scn
