#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "scn/dataset.hpp"
#include "scn/errors.hpp"

namespace scn {

namespace {

constexpr char kMagic[8] = {'S', 'C', 'N', 'D', 'A', 'T', '0', '1'};

template <typename T>
void put(std::ostream& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& what) {
    char buf[sizeof(T)];
    if (!in.read(buf, sizeof(T))) throw ParseError("dataset: truncated at " + what);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_binary(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_dataset: cannot open " + path.string());
    out.write(kMagic, sizeof(kMagic));
    put<std::uint64_t>(out, ds.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(ds.dim()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(ds.class_count));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        put<std::uint64_t>(out, ds.sample_ids[i]);
        for (std::size_t d = 0; d < ds.dim(); ++d) put<double>(out, ds.features(i, d));
        put<std::int32_t>(out, ds.current_labels[i]);
        put<std::int32_t>(out, ds.clean_labels[i]);
        put<std::uint8_t>(out, ds.corrupted_mask[i]);
    }
    if (!out) throw IoError("save_dataset: write failed for " + path.string());
}

void save_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_dataset: cannot open " + path.string());
    out << "# scn-dataset v1 classes=" << ds.class_count << "\n";
    out << "id";
    for (std::size_t d = 0; d < ds.dim(); ++d) out << ",f" << d;
    out << ",label,clean_label,corrupted\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << ds.sample_ids[i];
        for (std::size_t d = 0; d < ds.dim(); ++d) out << ',' << fmt_double(ds.features(i, d));
        out << ',' << ds.current_labels[i] << ',' << ds.clean_labels[i] << ','
            << int(ds.corrupted_mask[i]) << "\n";
    }
    if (!out) throw IoError("save_dataset: write failed for " + path.string());
}

LabeledDataset load_binary(std::istream& in, const std::string& name) {
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ParseError("load_dataset: bad magic in " + name);
    const std::uint64_t n = get<std::uint64_t>(in, "sample count");
    const std::uint32_t dim = get<std::uint32_t>(in, "feature dim");
    const std::uint32_t classes = get<std::uint32_t>(in, "class count");
    if (classes < 2) throw ParseError("load_dataset: class count " + std::to_string(classes) +
                                      " below 2 in " + name);
    if (dim == 0) throw ParseError("load_dataset: zero feature dim in " + name);

    LabeledDataset ds;
    ds.features = Tensor2D(n, dim);
    ds.current_labels.resize(n);
    ds.clean_labels.resize(n);
    ds.corrupted_mask.resize(n);
    ds.class_count = static_cast<int>(classes);
    ds.sample_ids.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::string rec = "record " + std::to_string(i);
        ds.sample_ids[i] = get<std::uint64_t>(in, rec);
        for (std::uint32_t d = 0; d < dim; ++d) ds.features(i, d) = get<double>(in, rec);
        const std::int32_t cur = get<std::int32_t>(in, rec);
        const std::int32_t clean = get<std::int32_t>(in, rec);
        const std::uint8_t mask = get<std::uint8_t>(in, rec);
        if (cur < 0 || cur >= static_cast<std::int32_t>(classes))
            throw ParseError("load_dataset: label " + std::to_string(cur) + " out of range in " +
                             rec + " of " + name);
        if (clean < 0 || clean >= static_cast<std::int32_t>(classes))
            throw ParseError("load_dataset: clean label " + std::to_string(clean) +
                             " out of range in " + rec + " of " + name);
        if (mask > 1) throw ParseError("load_dataset: corrupted flag not 0/1 in " + rec);
        ds.current_labels[i] = cur;
        ds.clean_labels[i] = clean;
        ds.corrupted_mask[i] = mask;
    }
    char extra;
    if (in.read(&extra, 1)) throw ParseError("load_dataset: trailing bytes in " + name);
    return ds;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("load_dataset: bad number '" + s + "' in " + where);
    return v;
}

long parse_long(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("load_dataset: bad integer '" + s + "' in " + where);
    return v;
}

LabeledDataset load_csv(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# scn-dataset v1 classes=", 0) != 0)
        throw ParseError("load_dataset: missing '# scn-dataset v1' header in " + name);
    const int classes = static_cast<int>(parse_long(line.substr(25), "header of " + name));
    if (classes < 2) throw ParseError("load_dataset: class count below 2 in " + name);
    if (!std::getline(in, line))
        throw ParseError("load_dataset: missing column header in " + name);
    const std::size_t columns = split_csv_line(line).size();
    if (columns < 5) throw ParseError("load_dataset: too few columns in " + name);
    const std::size_t dim = columns - 4;

    std::vector<std::uint64_t> ids;
    std::vector<double> feats;
    std::vector<int> current, clean;
    std::vector<std::uint8_t> mask;
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + " of " + name;
        const auto fields = split_csv_line(line);
        if (fields.size() != columns)
            throw ParseError("load_dataset: expected " + std::to_string(columns) + " fields, got " +
                             std::to_string(fields.size()) + " at " + where);
        ids.push_back(static_cast<std::uint64_t>(parse_long(fields[0], where)));
        for (std::size_t d = 0; d < dim; ++d) feats.push_back(parse_double(fields[1 + d], where));
        const long cur = parse_long(fields[1 + dim], where);
        const long cln = parse_long(fields[2 + dim], where);
        const long flag = parse_long(fields[3 + dim], where);
        if (cur < 0 || cur >= classes)
            throw ParseError("load_dataset: label " + std::to_string(cur) + " out of range at " +
                             where);
        if (cln < 0 || cln >= classes)
            throw ParseError("load_dataset: clean label " + std::to_string(cln) +
                             " out of range at " + where);
        if (flag != 0 && flag != 1)
            throw ParseError("load_dataset: corrupted flag not 0/1 at " + where);
        current.push_back(static_cast<int>(cur));
        clean.push_back(static_cast<int>(cln));
        mask.push_back(static_cast<std::uint8_t>(flag));
    }

    LabeledDataset ds;
    const std::size_t n = ids.size();
    ds.features = Tensor2D(n, dim);
    ds.features.data() = std::move(feats);
    ds.current_labels = std::move(current);
    ds.clean_labels = std::move(clean);
    ds.corrupted_mask = std::move(mask);
    ds.class_count = classes;
    ds.sample_ids = std::move(ids);
    return ds;
}

}  // namespace

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path,
                  DatasetFormat format) {
    ds.validate();
    if (format == DatasetFormat::binary)
        save_binary(ds, path);
    else
        save_csv(ds, path);
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_dataset: cannot open " + path.string());
    char first = 0;
    in.get(first);
    in.seekg(0);
    LabeledDataset ds = (first == '#') ? load_csv(in, path.string())
                                       : load_binary(in, path.string());
    ds.validate();
    return ds;
}

}  // namespace scn
