#include "compfs/model.hpp"

#include <cstring>
#include <fstream>
#include <map>

namespace compfs {

namespace {

constexpr std::uint32_t kMagic = 0x31534643u;  // "CFS1"
constexpr std::uint32_t kVersion = 1u;

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("model: truncated checkpoint");
    return v;
}

void put_tensor(std::ofstream& out, const std::string& name, const TensorNode& t) {
    const auto len = static_cast<std::uint32_t>(name.size());
    put(out, len);
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::int64_t>(out, t.rows);
    put<std::int64_t>(out, t.cols);
    out.write(reinterpret_cast<const char*>(t.value.data()),
              static_cast<std::streamsize>(t.value.size() * sizeof(double)));
}

}  // namespace

void CompFSModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("model: cannot write " + path);
    put(out, kMagic);
    put(out, kVersion);
    put<std::int64_t>(out, cfg_.p);
    put<std::int64_t>(out, cfg_.n_learners);
    put<std::int64_t>(out, cfg_.hidden);
    put<std::int64_t>(out, cfg_.classes);
    put(out, cfg_.tau);
    put(out, cfg_.lambda);

    const auto params = parameters();
    put<std::int64_t>(out, static_cast<std::int64_t>(params.size()) + 1);
    for (const auto& p : params) put_tensor(out, p->name, *p);
    put_tensor(out, "xbar", *xbar_);
    if (!out) throw std::runtime_error("model: write failure on " + path);
}

CompFSModel CompFSModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("model: cannot open " + path);
    if (get<std::uint32_t>(in) != kMagic)
        throw std::runtime_error("model: bad magic in " + path);
    if (get<std::uint32_t>(in) != kVersion)
        throw std::runtime_error("model: unsupported checkpoint version in " + path);

    ModelConfig cfg;
    cfg.p = get<std::int64_t>(in);
    cfg.n_learners = get<std::int64_t>(in);
    cfg.hidden = get<std::int64_t>(in);
    cfg.classes = get<std::int64_t>(in);
    cfg.tau = get<double>(in);
    cfg.lambda = get<double>(in);

    CompFSModel model(cfg);
    std::map<std::string, Tensor> by_name;
    for (const auto& p : model.parameters()) by_name[p->name] = p;

    const auto count = get<std::int64_t>(in);
    for (std::int64_t i = 0; i < count; ++i) {
        const auto len = get<std::uint32_t>(in);
        std::string name(len, '\0');
        in.read(name.data(), len);
        if (!in) throw std::runtime_error("model: truncated checkpoint");
        const auto rows = get<std::int64_t>(in);
        const auto cols = get<std::int64_t>(in);
        std::vector<double> data(static_cast<std::size_t>(rows * cols));
        in.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(data.size() * sizeof(double)));
        if (!in) throw std::runtime_error("model: truncated checkpoint");

        if (name == "xbar") {
            if (rows != 1 || cols != cfg.p)
                throw std::runtime_error("model: xbar shape mismatch in checkpoint");
            model.set_feature_means(data);
            continue;
        }
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw std::runtime_error("model: unknown tensor '" + name + "' in checkpoint");
        if (it->second->rows != rows || it->second->cols != cols)
            throw std::runtime_error("model: shape mismatch for '" + name + "'");
        it->second->value = std::move(data);
    }
    return model;
}

}  // namespace compfs
