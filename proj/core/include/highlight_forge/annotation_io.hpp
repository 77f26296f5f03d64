#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "highlight_forge/event_class.hpp"
#include "highlight_forge/geometry.hpp"

namespace hforge {

struct AnnotatedObject {
  EventClass label;
  BoundingBox box;

  friend bool operator==(const AnnotatedObject&, const AnnotatedObject&) = default;
};

/// One ground-truth training image. Paths must be non-empty and free of
/// commas and line breaks so they survive the CSV formats below.
struct AnnotatedImage {
  std::string image_path;
  ImageDims dims;
  std::vector<AnnotatedObject> objects;

  friend bool operator==(const AnnotatedImage&, const AnnotatedImage&) = default;
};

/// Throws GeometryError / InvalidArgument when `image` breaks its invariants.
void validate(const AnnotatedImage& image);

/// One row of annotation.txt / train.csv.
struct AnnotationLine {
  std::string image_path;
  BoundingBox box;
  EventClass label;

  friend bool operator==(const AnnotationLine&, const AnnotationLine&) = default;
};

struct DatasetSplit {
  std::vector<AnnotatedImage> train;
  std::vector<AnnotatedImage> test;
};

/// Parses a labelImg (Pascal VOC) XML document.
AnnotatedImage parse_voc_xml(std::string_view xml);

/// "<path>,<x1>,<y1>,<x2>,<y2>,<label>\n" per object, input order. x1/y1 are
/// floored and x2/y2 ceiled to whole pixels.
std::string write_annotation_lines(const std::vector<AnnotatedImage>& images);

/// Inverse of write_annotation_lines(). Blank lines are skipped.
std::vector<AnnotationLine> parse_annotation_lines(std::string_view text);

inline constexpr std::string_view kCsvHeader = "filename,x1,y1,x2,y2,class";

/// Same rows as write_annotation_lines() behind kCsvHeader.
std::string write_csv(const std::vector<AnnotatedImage>& images);
std::vector<AnnotationLine> parse_csv(std::string_view text);

/// Each original followed by its mirrored twin ("a.jpg" -> "a_hflip.jpg").
std::vector<AnnotatedImage> augment_flip(const std::vector<AnnotatedImage>& images);

/// Path of the flipped twin: "_hflip" inserted before the extension.
std::string flipped_path(std::string_view path);

/// Images whose path is listed in `test_paths` go to test, the rest to train.
DatasetSplit split_by_list(std::vector<AnnotatedImage> images,
                           const std::vector<std::string>& test_paths);

/// Seeded shuffle, then the first round(n * test_fraction) images go to test.
/// Flipped twins follow their original into the same side.
DatasetSplit split_random(std::vector<AnnotatedImage> images,
                          double test_fraction, std::uint64_t seed);

}  // namespace hforge
