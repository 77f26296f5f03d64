#include "highlight_forge/annotation_io.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "highlight_forge/errors.hpp"
#include "highlight_forge/text.hpp"

namespace hforge {

namespace pt = boost::property_tree;

void validate(const AnnotatedImage& image) {
  if (image.image_path.empty()) throw InvalidArgument("image path is empty");
  if (image.image_path.find_first_of(",\r\n") != std::string::npos) {
    throw InvalidArgument("image path '" + image.image_path +
                          "' contains a comma or line break");
  }
  for (const auto& object : image.objects) {
    if (!image.dims.contains(object.box)) {
      throw GeometryError("object box outside image '" + image.image_path + "'");
    }
  }
}

namespace {

std::string required_text(const pt::ptree& node, const std::string& key) {
  auto child = node.get_child_optional(key);
  if (!child) throw ParseError("missing <" + key + "> element");
  return std::string(text::trim(child->data()));
}

double required_number(const pt::ptree& node, const std::string& key) {
  const std::string raw = required_text(node, key);
  auto value = text::parse_double(raw);
  if (!value) throw ParseError("<" + key + "> is not a number: '" + raw + "'");
  return *value;
}

int required_int(const pt::ptree& node, const std::string& key) {
  const double value = required_number(node, key);
  if (value != std::floor(value) || value < 0 || value > 1e9) {
    throw ParseError("<" + key + "> is not a pixel count");
  }
  return static_cast<int>(value);
}

std::string basename(std::string_view path) {
  const auto slash = path.find_last_of("/\\");
  return std::string(slash == std::string_view::npos ? path : path.substr(slash + 1));
}

}  // namespace

AnnotatedImage parse_voc_xml(std::string_view xml) {
  pt::ptree tree;
  std::istringstream in{std::string(xml)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XML: " + e.message(), e.line());
  }

  auto root = tree.get_child_optional("annotation");
  if (!root) throw ParseError("missing <annotation> root element");

  std::string image_path;
  if (auto filename = root->get_child_optional("filename")) {
    image_path = std::string(text::trim(filename->data()));
  }
  if (image_path.empty()) {
    if (auto path = root->get_child_optional("path")) {
      image_path = basename(text::trim(path->data()));
    }
  }
  if (image_path.empty()) throw ParseError("missing <filename> element");

  auto size = root->get_child_optional("size");
  if (!size) throw ParseError("missing <size> element");
  const ImageDims dims(required_int(*size, "width"), required_int(*size, "height"));

  AnnotatedImage image{image_path, dims, {}};
  for (const auto& [tag, node] : *root) {
    if (tag != "object") continue;
    const EventClass label = parse_event_class(required_text(node, "name"));
    auto bndbox = node.get_child_optional("bndbox");
    if (!bndbox) throw ParseError("<object> without <bndbox>");
    BoundingBox box(required_number(*bndbox, "xmin"), required_number(*bndbox, "ymin"),
                    required_number(*bndbox, "xmax"), required_number(*bndbox, "ymax"));
    if (!dims.contains(box)) {
      throw GeometryError("object box exceeds the declared image size");
    }
    image.objects.push_back({label, box});
  }
  validate(image);
  return image;
}

namespace {

void append_line(std::string& out, const std::string& path, const BoundingBox& box,
                 EventClass label) {
  auto whole = [](double v) { return std::to_string(static_cast<long long>(v)); };
  out += path;
  out += ',';
  out += whole(std::floor(box.x1()));
  out += ',';
  out += whole(std::floor(box.y1()));
  out += ',';
  out += whole(std::ceil(box.x2()));
  out += ',';
  out += whole(std::ceil(box.y2()));
  out += ',';
  out += canonical_name(label);
  out += '\n';
}

AnnotationLine parse_row(std::string_view line, std::size_t line_no) {
  const auto fields = text::split(line, ',');
  if (fields.size() != 6) {
    throw ParseError("expected 6 comma-separated fields, found " +
                         std::to_string(fields.size()),
                     line_no);
  }
  if (fields[0].empty()) throw ParseError("empty image path", line_no);
  double coords[4];
  for (int i = 0; i < 4; ++i) {
    auto value = text::parse_double(text::trim(fields[i + 1]));
    if (!value) {
      throw ParseError("non-numeric coordinate '" + std::string(fields[i + 1]) + "'",
                       line_no);
    }
    coords[i] = *value;
  }
  auto label = try_parse_event_class(text::trim(fields[5]));
  if (!label) {
    throw ParseError("unknown event label '" + std::string(fields[5]) + "'", line_no);
  }
  if (!BoundingBox::is_valid(coords[0], coords[1], coords[2], coords[3])) {
    throw ParseError("invalid bounding box", line_no);
  }
  return {std::string(fields[0]), BoundingBox(coords[0], coords[1], coords[2], coords[3]),
          *label};
}

}  // namespace

std::string write_annotation_lines(const std::vector<AnnotatedImage>& images) {
  std::string out;
  for (const auto& image : images) {
    for (const auto& object : image.objects) {
      append_line(out, image.image_path, object.box, object.label);
    }
  }
  return out;
}

std::vector<AnnotationLine> parse_annotation_lines(std::string_view text) {
  std::vector<AnnotationLine> out;
  const auto rows = text::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (text::trim(rows[i]).empty()) continue;
    out.push_back(parse_row(rows[i], i + 1));
  }
  return out;
}

std::string write_csv(const std::vector<AnnotatedImage>& images) {
  std::string out(kCsvHeader);
  out += '\n';
  out += write_annotation_lines(images);
  return out;
}

std::vector<AnnotationLine> parse_csv(std::string_view text) {
  const auto rows = text::lines(text);
  if (rows.empty() || text::trim(rows.front()) != kCsvHeader) {
    throw ParseError("missing CSV header '" + std::string(kCsvHeader) + "'", 1);
  }
  std::vector<AnnotationLine> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (text::trim(rows[i]).empty()) continue;
    out.push_back(parse_row(rows[i], i + 1));
  }
  return out;
}

std::string flipped_path(std::string_view path) {
  const auto slash = path.find_last_of("/\\");
  const auto dot = path.find_last_of('.');
  if (dot == std::string_view::npos || (slash != std::string_view::npos && dot < slash) ||
      dot == (slash == std::string_view::npos ? 0 : slash + 1)) {
    return std::string(path) + "_hflip";
  }
  return std::string(path.substr(0, dot)) + "_hflip" + std::string(path.substr(dot));
}

std::vector<AnnotatedImage> augment_flip(const std::vector<AnnotatedImage>& images) {
  std::vector<AnnotatedImage> out;
  out.reserve(images.size() * 2);
  for (const auto& image : images) {
    validate(image);
    AnnotatedImage twin{flipped_path(image.image_path), image.dims, {}};
    twin.objects.reserve(image.objects.size());
    for (const auto& object : image.objects) {
      twin.objects.push_back({object.label, horizontal_flip(object.box, image.dims)});
    }
    out.push_back(image);
    out.push_back(std::move(twin));
  }
  return out;
}

DatasetSplit split_by_list(std::vector<AnnotatedImage> images,
                           const std::vector<std::string>& test_paths) {
  const std::set<std::string> wanted(test_paths.begin(), test_paths.end());
  DatasetSplit split;
  std::set<std::string> seen;
  for (auto& image : images) {
    if (!seen.insert(image.image_path).second) {
      throw InvalidArgument("duplicate image path '" + image.image_path + "'");
    }
    (wanted.count(image.image_path) ? split.test : split.train).push_back(std::move(image));
  }
  return split;
}

DatasetSplit split_random(std::vector<AnnotatedImage> images, double test_fraction,
                          std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
    throw InvalidArgument("test fraction outside [0, 1]");
  }
  // Group each original with its flipped twin so augmentation never leaks
  // a mirrored copy of a test image into train.
  std::vector<std::string> groups;
  std::unordered_map<std::string, std::string> group_of;
  for (const auto& image : images) {
    std::string key = image.image_path;
    for (const auto& candidate : groups) {
      if (flipped_path(candidate) == image.image_path) {
        key = candidate;
        break;
      }
    }
    if (key == image.image_path) groups.push_back(key);
    group_of[image.image_path] = key;
  }

  std::mt19937_64 rng(seed);
  std::shuffle(groups.begin(), groups.end(), rng);
  const auto n_test = static_cast<std::size_t>(
      std::llround(static_cast<double>(groups.size()) * test_fraction));
  const std::vector<std::string> test_groups(groups.begin(), groups.begin() + n_test);

  std::vector<std::string> test_paths;
  for (const auto& image : images) {
    const auto& key = group_of[image.image_path];
    if (std::find(test_groups.begin(), test_groups.end(), key) != test_groups.end()) {
      test_paths.push_back(image.image_path);
    }
  }
  return split_by_list(std::move(images), test_paths);
}

}  // namespace hforge
