#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridshape/contour_signature.hpp"
#include "gridshape/labeled_grid.hpp"
#include "gridshape/moments.hpp"
#include "gridshape/raster.hpp"

namespace gridshape {

/// The parameters that make two descriptors comparable.
struct ConfigFingerprint {
  int n = 21;
  double tau = 0.75;
  int m = kDefaultCdfBins;

  std::string to_string() const;
  friend bool operator==(const ConfigFingerprint&, const ConfigFingerprint&) = default;
};

/// Composite shape descriptor: grid track probabilities, grid-derived
/// centroid distance signature and five global statistics.
struct CompositeDescriptor {
  std::string shape_id;
  std::optional<std::string> class_label;
  ConfigFingerprint fingerprint;
  GridDescriptor grid;
  CdfSignature cdf;
  GlobalFeatures globals;

  /// interior_probs followed by boundary_probs.
  std::vector<double> grid_vector() const;

  friend bool operator==(const CompositeDescriptor&, const CompositeDescriptor&) = default;
};

struct ExtractOptions {
  GridConfig grid;
  int cdf_bins = kDefaultCdfBins;
  GlobalFeatureOptions globals;
};

/// Runs moments -> orientation -> grid -> (track probabilities, signature,
/// global statistics).
CompositeDescriptor extract(const BinaryImage& img, const ExtractOptions& opts,
                            std::string shape_id = {},
                            std::optional<std::string> class_label = {});

/// Shortest decimal text that parses back to exactly `v`.
std::string format_value(double v);

/// Line-oriented UTF-8 record:
///   id=, class=, n=, tau=, m=, grid.interior=, grid.boundary=, cdf=, globals=
/// Vectors are comma-separated decimals. Lines starting with '#' are comments.
std::string serialize(const CompositeDescriptor& d);

/// Structural parse only; throws kParse naming the line and field. Use
/// validate() for the semantic invariants.
CompositeDescriptor parse_descriptor(std::string_view text);

/// Throws kValidation naming the first violated field.
void validate(const CompositeDescriptor& d);

}  // namespace gridshape
