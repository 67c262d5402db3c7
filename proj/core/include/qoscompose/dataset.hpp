// Repository and query documents, challenge-format adapters, QoS seeding.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qoscompose/model.hpp"

namespace qosc {

// --- Canonical documents (JSON syntax) -------------------------------------
//
// Repository documents carry the parameter table, the service list, and an
// optional provenance block. QoS cells are numbers; a string of the form
// "87%" is accepted on input and normalized to the fraction 0.87.

/// Parses a canonical repository document. Throws ValidationError on any
/// schema violation, naming the offending service where possible.
Repository parse_repository(const std::string& text);

/// Serializes a repository canonically: sorted object keys, services in id
/// order. parse_repository(serialize_repository(r)) == r.
std::string serialize_repository(const Repository& repo);

/// Parses a canonical query document and validates it against `ps`.
Query parse_query(const std::string& text, const ParamSet& ps);

/// Serializes a query canonically.
std::string serialize_query(const Query& q);

/// Reads an entire file; throws ValidationError when it cannot be opened.
std::string read_text_file(const std::string& path);

/// Writes a file whole; throws ValidationError on failure.
void write_text_file(const std::string& path, const std::string& text);

Repository load_repository(const std::string& path);
Query load_query(const std::string& path, const ParamSet& ps);

// --- Challenge-format adapters ----------------------------------------------

/// Reads a Web Service Challenge style instance: a services file listing
/// input/output instances per service, a taxonomy file nesting concepts,
/// and an optional QoS file (empty path to skip) with per-service response
/// time and throughput attributes.
///
/// Concept matching is flattened to exact-name matching: an input becomes
/// the concept of its instance, an output becomes that concept plus all of
/// its ancestors, so "provided satisfies required iff equal or descendant"
/// holds under plain set containment.
///
/// Without a QoS file the result has no parameters and one empty tuple per
/// service; run gen_qos afterwards.
Repository parse_wsc(const std::string& services_path,
                     const std::string& taxonomy_path,
                     const std::string& qos_path = "");

/// Reads a directory of WSDL-style service descriptions (ICEBE-2005
/// layout): one service per .wsdl file, named after the file, inputs and
/// outputs taken from the message parts referenced by its operations. The
/// result has no QoS parameters; run gen_qos afterwards.
Repository parse_icebe(const std::string& dir);

// --- QoS generation ----------------------------------------------------------

/// Closed value range for one generated parameter.
struct QosGenRange {
    double lo = 0.0;
    double hi = 1.0;
    bool integer = false;  // draw whole numbers instead of reals
};

struct QosGenParam {
    QosParam param;
    QosGenRange range;
};

/// Deterministic generation plan. Parameters already present in the target
/// repository keep their values; listed parameters that are missing get a
/// generated column.
struct QosGenConfig {
    std::uint64_t seed = 1;
    std::vector<QosGenParam> params;
};

/// The four standard parameters with default ranges: response time in
/// [100, 2000] ms and throughput in [1, 20] (whole numbers), reliability
/// and availability in [0.65, 0.99].
QosGenConfig default_qos_gen(std::uint64_t seed);

/// Returns a copy of `repo` with every configured parameter present. The
/// provenance block records the seed and ranges so runs are replayable.
/// Structure (service ids, inputs, outputs, offer counts) is unchanged.
Repository gen_qos(const Repository& repo, const QosGenConfig& cfg);

}  // namespace qosc
