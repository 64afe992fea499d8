#ifndef NETSHRINK_GRAPH_IO_HPP
#define NETSHRINK_GRAPH_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "netshrink/graph.hpp"

namespace netshrink {

// Edge-list file format: UTF-8 text, one `src dst weight` triple per line,
// whitespace separated, `#` starts a comment. A comment of the form
// `# nodes=<n>` overrides the node count (integer-id files only).
// Node ids may be arbitrary strings; when every id parses as a nonnegative
// integer the ids are used as indices directly, otherwise a dense index map
// is built in order of first appearance.

enum class EdgeListDialect { directed, undirected };

struct LoadOptions {
    EdgeListDialect dialect = EdgeListDialect::directed;
    // Applied to each raw weight before validation, so files with negative
    // raw weights can be admitted through a positivity-restoring transform.
    WeightTransform transform = WeightTransform::identity();
};

struct LoadedGraph {
    WeightedGraph graph;
    // external id per internal index; empty when ids are plain integers
    std::vector<std::string> node_ids;
};

struct LoadedBipartite {
    BipartiteGraph graph;
    std::vector<std::string> left_ids;
    std::vector<std::string> right_ids;
};

struct LoadedSequence {
    GraphSequence sequence;
    std::vector<std::string> node_ids;
};

LoadedGraph load_edge_list(const std::filesystem::path& path, const LoadOptions& opts = {});

// Bipartite variant; the optional header is `# nodes=<left> <right>`.
LoadedBipartite load_bipartite_edge_list(const std::filesystem::path& path,
                                         const LoadOptions& opts = {});

// Manifest: one edge-list path per line (relative paths resolve against the
// manifest's directory), order = time order. All steps must agree on the
// node set; string-id files share one id map across the whole sequence.
LoadedSequence load_sequence(const std::filesystem::path& manifest,
                             const LoadOptions& opts = {});

void save_edge_list(const WeightedGraph& g, const std::filesystem::path& path,
                    const std::vector<std::string>& node_ids = {});

// Sidecar CSV `external_id,internal_index`.
void save_node_map(const std::vector<std::string>& node_ids,
                   const std::filesystem::path& path);

}  // namespace netshrink

#endif
