#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gridshape/descriptor.hpp"
#include "gridshape/image_io.hpp"

namespace gridshape {

/// Substring of the file stem before the last hyphen ("apple-12.png" ->
/// "apple"); a stem without a hyphen is its own class.
std::string class_from_filename(std::string_view name);

/// One input file considered by build_index.
struct ManifestEntry {
  std::string source;    // file name relative to the indexed directory
  std::string shape_id;  // empty when extraction failed
  std::string error;     // empty on success

  bool ok() const { return error.empty(); }
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Settings every entry of an index was extracted with.
struct IndexSettings {
  ConfigFingerprint fingerprint;
  bool exclude_center = false;

  ExtractOptions extract_options() const;
  friend bool operator==(const IndexSettings&, const IndexSettings&) = default;
};

class ShapeIndex {
 public:
  /// Sorts entries by shape_id; throws kCorruptIndex on fingerprint conflicts
  /// or duplicate ids.
  ShapeIndex(IndexSettings settings, std::vector<CompositeDescriptor> entries,
             std::vector<ManifestEntry> manifest = {});

  const IndexSettings& settings() const noexcept { return settings_; }
  const ConfigFingerprint& fingerprint() const noexcept { return settings_.fingerprint; }
  const std::vector<CompositeDescriptor>& entries() const noexcept { return entries_; }
  const std::vector<ManifestEntry>& manifest() const noexcept { return manifest_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::vector<ManifestEntry> failures() const;

  friend bool operator==(const ShapeIndex&, const ShapeIndex&) = default;

 private:
  IndexSettings settings_;
  std::vector<CompositeDescriptor> entries_;
  std::vector<ManifestEntry> manifest_;
};

struct BuildOptions {
  ExtractOptions extract;
  BinarizeOptions binarize;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Receives per-file warnings; nullptr writes them to stderr.
  std::function<void(const std::string&)> warn;
};

/// Indexes every .png/.pgm/.bmp file directly inside `dir`. Per-file failures
/// are recorded in the manifest and skipped; throws kEmptyIndex when nothing
/// could be extracted.
ShapeIndex build_index(const std::filesystem::path& dir, const BuildOptions& opts);

/// Header line, manifest lines, then one `---`-separated descriptor record per
/// entry.
std::string serialize_index(const ShapeIndex& ix);
ShapeIndex parse_index(std::string_view text);

void save_index(const ShapeIndex& ix, const std::filesystem::path& path);
ShapeIndex load_index(const std::filesystem::path& path);

}  // namespace gridshape
