#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "motifgrid/mask.hpp"

namespace motifgrid {

/// Raised for any malformed mask file or manifest. The message carries the
/// line number when one applies.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kMaskFileHeader = "motifgrid-mask v1";

/// Canonical text form:
///
///   motifgrid-mask v1
///   layers <L>
///   mask <i> <rows> <cols> <edge_count>
///   <row> <col>            (edge_count lines, 0-based, ascending)
///
/// Labels are not part of the file; they come from a manifest or the file
/// stem. Non-binary entries cannot be written.
void write_mask_stack(std::ostream& out, const MaskStack& stack);
std::string to_mask_text(const MaskStack& stack);
void save_mask_stack(const std::filesystem::path& path, const MaskStack& stack);

/// Parses the canonical form. Edges must be strictly ascending and in
/// range. Dimension chaining is not checked here; call validate().
MaskStack read_mask_stack(std::istream& in, std::string label = {});
MaskStack load_mask_stack(const std::filesystem::path& path);

/// One entry of a collection manifest (`manifest.csv` in a collection
/// directory). Only file, label and sparsity_tag are required columns; the
/// training columns are written by sweeps.
struct ManifestEntry {
  std::string file;
  std::string label;
  std::string sparsity_tag;
  std::optional<std::size_t> network_id;
  std::optional<double> level;
  std::optional<double> global_sparsity;
  std::optional<double> final_train_mse;
  std::optional<double> final_val_mse;
};

inline constexpr const char* kManifestName = "manifest.csv";

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

/// Input discovery for the CLI. A directory with a manifest yields its
/// entries in manifest order; a directory without one yields every
/// `*.mask` file sorted by name; a plain path yields that file. Entries are
/// returned unparsed so that per-file failures can be reported separately.
struct InputRef {
  std::filesystem::path path;
  std::string label;
  std::optional<std::string> sparsity_tag;
};

std::vector<InputRef> discover_inputs(const std::vector<std::filesystem::path>& paths);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

}  // namespace motifgrid
