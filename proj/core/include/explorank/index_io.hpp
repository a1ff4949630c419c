#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "explorank/graph.hpp"
#include "explorank/surprise_index.hpp"

namespace explorank {

/// A loaded graph together with the surprise index built from it.
struct IndexBundle {
  AttributedGraph graph;
  SurpriseIndex index;
};

/// Index file layout (all integers little-endian u64, reals IEEE-754 f64):
///
///   magic "EXRKIDX1"
///   header      length-prefixed JSON: version, graph fingerprint, node count,
///               schema, build weights, binnings with fingerprints, store_local
///   graph       canonical graph encoding
///   per feature global mass, then node-major per-feature surprise, then (when
///               store_local) each feature's node-major local masses
///
/// Output is a pure function of the inputs, so identical builds are byte-identical.
void write_index(std::ostream& out, const AttributedGraph& g, const SurpriseIndex& index);
void write_index_file(const std::string& path, const AttributedGraph& g, const SurpriseIndex& index);

/// Validates the magic, version, graph fingerprint and binning fingerprints;
/// throws IndexMismatch on any disagreement.
IndexBundle read_index(std::istream& in);
IndexBundle read_index_file(const std::string& path);

/// Binning + global histogram cache document: {"version":1, "features":[...]} where
/// each entry is a histogram_document.
nlohmann::ordered_json binnings_document(const AttributedGraph& g, const SurpriseIndex& index);
void write_binnings_file(const std::string& path, const AttributedGraph& g, const SurpriseIndex& index);

}  // namespace explorank
