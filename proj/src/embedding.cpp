#include "isoglot/embedding.hpp"
#include "isoglot/common.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

namespace isoglot {

namespace {

// Line-oriented reader over either a plain or a gzip-compressed stream.
// Returns lines without the trailing newline; strips a trailing '\r'.
class LineReader {
public:
    explicit LineReader(const std::string& path) : path_(path) {
        if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
            gz_ = gzopen(path.c_str(), "rb");
            if (!gz_) throw io_error(path + ": cannot open file");
        } else {
            plain_.open(path, std::ios::binary);
            if (!plain_) throw io_error(path + ": cannot open file");
        }
    }

    ~LineReader() {
        if (gz_) gzclose(gz_);
    }

    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool next(std::string& line) {
        line.clear();
        if (gz_) {
            char buf[4096];
            bool got = false;
            for (;;) {
                if (!gzgets(gz_, buf, sizeof(buf))) {
                    int err = 0;
                    const char* msg = gzerror(gz_, &err);
                    if (err != Z_OK && err != Z_STREAM_END)
                        throw io_error(path_ + ": gzip read error: " + (msg ? msg : ""));
                    break;
                }
                got = true;
                std::size_t len = std::strlen(buf);
                line.append(buf, len);
                if (len > 0 && buf[len - 1] == '\n') break;
            }
            if (!got) return false;
        } else {
            if (!std::getline(plain_, line)) return false;
        }
        while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
        return true;
    }

private:
    std::string path_;
    std::ifstream plain_;
    gzFile gz_ = nullptr;
};

io_error line_error(const std::string& path, std::size_t lineno, const std::string& what) {
    return io_error(path + ":" + std::to_string(lineno) + ": " + what);
}

// Splits on runs of spaces/tabs. fastText lines sometimes carry a trailing
// space, so empty fields are not produced.
void split_fields(const std::string& line, std::vector<std::string_view>& out) {
    out.clear();
    const char* s = line.data();
    std::size_t i = 0, n = line.size();
    while (i < n) {
        while (i < n && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < n && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.emplace_back(s + start, i - start);
    }
}

bool parse_double(std::string_view f, double& out) {
    const char* first = f.data();
    const char* last = f.data() + f.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_size(std::string_view f, std::size_t& out) {
    const char* first = f.data();
    const char* last = f.data() + f.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace

EmbeddingSpace load_embeddings(const std::string& path, std::size_t limit,
                               std::optional<int> expect_dim, LoadStats* stats) {
    if (limit == 0) throw std::invalid_argument("load_embeddings: limit must be positive");

    LineReader reader(path);
    std::string line;
    std::vector<std::string_view> fields;

    if (!reader.next(line)) throw line_error(path, 1, "missing header line");
    split_fields(line, fields);
    std::size_t header_n = 0, header_d = 0;
    if (fields.size() != 2 || !parse_size(fields[0], header_n) || !parse_size(fields[1], header_d) ||
        header_n == 0 || header_d == 0)
        throw line_error(path, 1, "garbled header, expected \"n d\" with positive integers, got \"" + line + "\"");
    if (expect_dim && static_cast<std::size_t>(*expect_dim) != header_d)
        throw line_error(path, 1, "dimensionality mismatch: file declares d=" + std::to_string(header_d) +
                                      ", expected " + std::to_string(*expect_dim));

    const std::size_t want = std::min(header_n, limit);
    EmbeddingSpace space;
    space.lang_id = lang_from_path(path);
    space.vocab.reserve(want);
    space.matrix.resize(static_cast<Eigen::Index>(want), static_cast<Eigen::Index>(header_d));

    std::unordered_set<std::string> seen;
    seen.reserve(want * 2);

    std::size_t kept = 0, dupes = 0, lineno = 1;
    while (kept < want && lineno - 1 < header_n && reader.next(line)) {
        ++lineno;
        if (line.empty()) throw line_error(path, lineno, "empty row");
        split_fields(line, fields);
        if (fields.size() != header_d + 1)
            throw line_error(path, lineno, "wrong field count: expected 1 token + " + std::to_string(header_d) +
                                               " values, got " + std::to_string(fields.size()) + " fields");
        std::string token(fields[0]);
        if (!seen.insert(token).second) {
            ++dupes;
            continue;
        }
        auto row = space.matrix.row(static_cast<Eigen::Index>(kept));
        for (std::size_t j = 0; j < header_d; ++j) {
            double v;
            if (!parse_double(fields[j + 1], v))
                throw line_error(path, lineno, "unparseable value \"" + std::string(fields[j + 1]) +
                                                   "\" in column " + std::to_string(j + 1));
            if (!std::isfinite(v))
                throw line_error(path, lineno, "non-finite value in column " + std::to_string(j + 1));
            row(static_cast<Eigen::Index>(j)) = v;
        }
        space.vocab.push_back(std::move(token));
        ++kept;
    }

    const std::size_t data_lines = lineno - 1;
    if (kept < want && data_lines < header_n)
        throw line_error(path, lineno, "file ends early: header declares " + std::to_string(header_n) +
                                           " rows, found " + std::to_string(data_lines));
    if (kept == 0) throw line_error(path, lineno, "no embedding rows could be read");

    if (kept < static_cast<std::size_t>(space.matrix.rows()))
        space.matrix.conservativeResize(static_cast<Eigen::Index>(kept), Eigen::NoChange);

    if (stats) {
        stats->duplicates_dropped = dupes;
        stats->lines_read = lineno;
    }
    return space;
}

EmbeddingSpace length_normalize(EmbeddingSpace space) {
    for (Eigen::Index i = 0; i < space.matrix.rows(); ++i) {
        double norm = space.matrix.row(i).norm();
        if (norm == 0.0)
            throw compute_error("length_normalize: zero-norm row for token \"" + space.vocab[static_cast<std::size_t>(i)] +
                                "\" (index " + std::to_string(i) + ")");
        space.matrix.row(i) /= norm;
    }
    space.length_normalized = true;
    return space;
}

EmbeddingSpace mean_center(EmbeddingSpace space) {
    space.matrix.rowwise() -= space.matrix.colwise().mean();
    space.mean_centered = true;
    return space;
}

EmbeddingSpace preprocess(EmbeddingSpace space, bool normalize, bool center) {
    if (normalize) space = length_normalize(std::move(space));
    if (center) space = mean_center(std::move(space));
    return space;
}

std::string lang_from_path(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    for (const char* ext : {".gz", ".vec", ".txt"}) {
        std::size_t elen = std::strlen(ext);
        if (base.size() > elen && base.compare(base.size() - elen, elen, ext) == 0)
            base.resize(base.size() - elen);
    }
    return base.empty() ? path : base;
}

} // namespace isoglot
