#include "netshrink/graph_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace netshrink {

namespace {

struct RawEdge {
    std::string src;
    std::string dst;
    double weight;
    long line;
};

struct RawFile {
    std::vector<RawEdge> edges;
    std::optional<long long> header_n;        // square graphs
    std::optional<long long> header_right_n;  // bipartite right side
};

[[noreturn]] void parse_fail(const std::filesystem::path& path, long line, const std::string& msg) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

bool parse_ll(const std::string& s, long long& out) {
    const auto* b = s.data();
    const auto* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

RawFile read_raw(const std::filesystem::path& path, const WeightTransform& transform,
                 bool bipartite) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    RawFile raw;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string content = line;
        if (auto pos = content.find('#'); pos != std::string::npos) {
            // comment; may carry the node-count header
            std::string comment = content.substr(pos + 1);
            content = content.substr(0, pos);
            std::istringstream cs(comment);
            std::string tok;
            if (cs >> tok && tok.rfind("nodes=", 0) == 0) {
                long long n;
                if (!parse_ll(tok.substr(6), n) || n < 0)
                    parse_fail(path, lineno, "bad nodes= header");
                raw.header_n = n;
                if (bipartite) {
                    std::string tok2;
                    if (!(cs >> tok2)) parse_fail(path, lineno, "bipartite header needs two counts");
                    long long n2;
                    if (!parse_ll(tok2, n2) || n2 < 0)
                        parse_fail(path, lineno, "bad nodes= header");
                    raw.header_right_n = n2;
                }
            }
        }
        std::istringstream ls(content);
        std::string src, dst, wtok;
        if (!(ls >> src)) continue;  // blank or comment-only line
        if (!(ls >> dst >> wtok)) parse_fail(path, lineno, "expected `src dst weight`");
        std::string extra;
        if (ls >> extra) parse_fail(path, lineno, "trailing tokens after weight");
        double w;
        try {
            std::size_t used = 0;
            w = std::stod(wtok, &used);
            if (used != wtok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            parse_fail(path, lineno, "malformed weight `" + wtok + "`");
        }
        w = transform(w);
        if (!std::isfinite(w)) parse_fail(path, lineno, "weight is non-finite after transform");
        if (w < 0.0) parse_fail(path, lineno, "negative weight");
        raw.edges.push_back({std::move(src), std::move(dst), w, lineno});
    }
    return raw;
}

bool all_integer_ids(const RawFile& raw) {
    long long v;
    for (const RawEdge& e : raw.edges)
        if (!parse_ll(e.src, v) || v < 0 || !parse_ll(e.dst, v) || v < 0) return false;
    return true;
}

// Assigns dense indices for string ids in order of first appearance.
class IdMap {
public:
    int intern(const std::string& id) {
        auto [it, inserted] = index_.try_emplace(id, static_cast<int>(ids_.size()));
        if (inserted) ids_.push_back(id);
        return it->second;
    }
    int size() const { return static_cast<int>(ids_.size()); }
    std::vector<std::string> take_ids() { return std::move(ids_); }

private:
    std::unordered_map<std::string, int> index_;
    std::vector<std::string> ids_;
};

void check_duplicates(const std::filesystem::path& path, std::vector<Edge> edges,
                      const std::vector<long>& lines) {
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return edges[a].src != edges[b].src ? edges[a].src < edges[b].src
                                            : edges[a].dst < edges[b].dst;
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const Edge& a = edges[order[k - 1]];
        const Edge& b = edges[order[k]];
        if (a.src == b.src && a.dst == b.dst)
            parse_fail(path, lines[order[k]], "duplicate edge");
    }
}

struct IndexedFile {
    std::vector<Edge> edges;
    std::vector<long> lines;
    int node_count;
};

// Converts a raw file to index space. `shared` (optional) carries a string-id
// map shared across sequence steps. For integer ids the node count is
// 1 + max index unless the header overrides.
IndexedFile index_file(const std::filesystem::path& path, const RawFile& raw, IdMap* shared) {
    IndexedFile out;
    out.edges.reserve(raw.edges.size());
    out.lines.reserve(raw.edges.size());
    const bool numeric = shared == nullptr && all_integer_ids(raw);
    if (numeric) {
        long long max_idx = -1;
        for (const RawEdge& e : raw.edges) {
            long long s, d;
            parse_ll(e.src, s);
            parse_ll(e.dst, d);
            max_idx = std::max({max_idx, s, d});
            out.edges.push_back({static_cast<int>(s), static_cast<int>(d), e.weight});
            out.lines.push_back(e.line);
        }
        long long n = max_idx + 1;
        if (raw.header_n) {
            if (*raw.header_n < n)
                throw DataError(path.string() + ": nodes= header smaller than max index + 1");
            n = *raw.header_n;
        }
        if (n > std::numeric_limits<int>::max())
            throw DataError(path.string() + ": node count too large");
        out.node_count = static_cast<int>(n);
    } else {
        if (raw.header_n)
            throw DataError(path.string() + ": nodes= header requires integer node ids");
        IdMap local;
        IdMap& map = shared ? *shared : local;
        for (const RawEdge& e : raw.edges) {
            out.edges.push_back({map.intern(e.src), map.intern(e.dst), e.weight});
            out.lines.push_back(e.line);
        }
        out.node_count = map.size();
    }
    check_duplicates(path, out.edges, out.lines);
    return out;
}

std::vector<Edge> expand_undirected(const std::filesystem::path& path, const IndexedFile& f) {
    std::vector<Edge> edges;
    std::vector<long> lines;
    edges.reserve(2 * f.edges.size());
    for (std::size_t i = 0; i < f.edges.size(); ++i) {
        const Edge& e = f.edges[i];
        edges.push_back(e);
        lines.push_back(f.lines[i]);
        if (e.src != e.dst) {
            edges.push_back({e.dst, e.src, e.weight});
            lines.push_back(f.lines[i]);
        }
    }
    check_duplicates(path, edges, lines);
    return edges;
}

}  // namespace

LoadedGraph load_edge_list(const std::filesystem::path& path, const LoadOptions& opts) {
    const RawFile raw = read_raw(path, opts.transform, /*bipartite=*/false);
    const bool numeric = all_integer_ids(raw);
    IdMap shared;
    IndexedFile f = index_file(path, raw, numeric ? nullptr : &shared);
    const bool undirected = opts.dialect == EdgeListDialect::undirected;
    std::vector<Edge> edges = undirected ? expand_undirected(path, f) : std::move(f.edges);
    LoadedGraph out{WeightedGraph(f.node_count, std::move(edges), !undirected), {}};
    if (!numeric) out.node_ids = shared.take_ids();
    return out;
}

LoadedBipartite load_bipartite_edge_list(const std::filesystem::path& path,
                                         const LoadOptions& opts) {
    const RawFile raw = read_raw(path, opts.transform, /*bipartite=*/true);
    LoadedBipartite out;
    std::vector<Edge> edges;
    std::vector<long> lines;
    long long left_n = 0, right_n = 0;
    if (all_integer_ids(raw)) {
        long long max_l = -1, max_r = -1;
        for (const RawEdge& e : raw.edges) {
            long long s, d;
            parse_ll(e.src, s);
            parse_ll(e.dst, d);
            max_l = std::max(max_l, s);
            max_r = std::max(max_r, d);
            edges.push_back({static_cast<int>(s), static_cast<int>(d), e.weight});
            lines.push_back(e.line);
        }
        left_n = max_l + 1;
        right_n = max_r + 1;
        if (raw.header_n) {
            if (*raw.header_n < left_n || *raw.header_right_n < right_n)
                throw DataError(path.string() + ": nodes= header smaller than max index + 1");
            left_n = *raw.header_n;
            right_n = *raw.header_right_n;
        }
    } else {
        if (raw.header_n)
            throw DataError(path.string() + ": nodes= header requires integer node ids");
        IdMap left, right;
        for (const RawEdge& e : raw.edges) {
            edges.push_back({left.intern(e.src), right.intern(e.dst), e.weight});
            lines.push_back(e.line);
        }
        left_n = left.size();
        right_n = right.size();
        out.left_ids = left.take_ids();
        out.right_ids = right.take_ids();
    }
    check_duplicates(path, edges, lines);
    out.graph = BipartiteGraph(static_cast<int>(std::max<long long>(left_n, 1)),
                               static_cast<int>(right_n), std::move(edges));
    return out;
}

LoadedSequence load_sequence(const std::filesystem::path& manifest, const LoadOptions& opts) {
    std::ifstream in(manifest);
    if (!in) throw DataError("cannot open manifest: " + manifest.string());
    std::vector<std::filesystem::path> paths;
    std::string line;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
        // trim
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        std::filesystem::path p = line.substr(b, e - b + 1);
        if (p.is_relative()) p = manifest.parent_path() / p;
        paths.push_back(std::move(p));
    }
    if (paths.empty()) throw DataError("manifest lists no files: " + manifest.string());

    std::vector<RawFile> raws;
    raws.reserve(paths.size());
    bool numeric = true;
    for (const auto& p : paths) {
        raws.push_back(read_raw(p, opts.transform, /*bipartite=*/false));
        numeric = numeric && all_integer_ids(raws.back());
    }

    LoadedSequence out;
    std::vector<WeightedGraph> steps;
    const bool undirected = opts.dialect == EdgeListDialect::undirected;
    if (numeric) {
        std::vector<IndexedFile> files;
        files.reserve(raws.size());
        for (std::size_t i = 0; i < raws.size(); ++i)
            files.push_back(index_file(paths[i], raws[i], nullptr));
        for (std::size_t i = 1; i < files.size(); ++i)
            if (files[i].node_count != files[0].node_count)
                throw DataError("node count mismatch: " + paths[i].string() + " has " +
                                std::to_string(files[i].node_count) + " nodes, " +
                                paths[0].string() + " has " +
                                std::to_string(files[0].node_count));
        for (std::size_t i = 0; i < files.size(); ++i) {
            std::vector<Edge> edges =
                undirected ? expand_undirected(paths[i], files[i]) : std::move(files[i].edges);
            steps.emplace_back(files[i].node_count, std::move(edges), !undirected);
        }
    } else {
        // one id map across the whole sequence so indices are consistent
        IdMap shared;
        std::vector<IndexedFile> files;
        files.reserve(raws.size());
        for (std::size_t i = 0; i < raws.size(); ++i)
            files.push_back(index_file(paths[i], raws[i], &shared));
        const int n = shared.size();
        for (std::size_t i = 0; i < files.size(); ++i) {
            std::vector<Edge> edges =
                undirected ? expand_undirected(paths[i], files[i]) : std::move(files[i].edges);
            steps.emplace_back(n, std::move(edges), !undirected);
        }
        out.node_ids = shared.take_ids();
    }
    out.sequence = GraphSequence(std::move(steps));
    return out;
}

void save_edge_list(const WeightedGraph& g, const std::filesystem::path& path,
                    const std::vector<std::string>& node_ids) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "# nodes=" << g.node_count() << "\n";
    char buf[40];
    for (const Edge& e : g.edges()) {
        std::snprintf(buf, sizeof buf, "%.17g", e.weight);
        out << e.src << ' ' << e.dst << ' ' << buf << "\n";
    }
    if (!out) throw DataError("write failed: " + path.string());
    if (!node_ids.empty()) save_node_map(node_ids, path.string() + ".nodes.csv");
}

void save_node_map(const std::vector<std::string>& node_ids, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "external_id,internal_index\n";
    for (std::size_t i = 0; i < node_ids.size(); ++i) out << node_ids[i] << ',' << i << "\n";
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace netshrink
