#pragma once

#include <string>

#include "rds/image.hpp"

namespace rds {

/// Load a PGM (P2/P5), PPM (P3/P6) or 8-bit PNG image. Grey inputs become
/// one channel, colour inputs three. Sample values are rescaled to the
/// nominal range [0, 255] (PNM files may declare any maxval up to 255).
/// Throws std::runtime_error on malformed input, including the message
/// "unexpected end of file" when the payload is truncated.
MultiChannelImage load_image(const std::string& path);

/// Write an image as PGM (1 channel), PPM (3 channels) or PNG (1 or 3),
/// chosen by file extension. Values are rounded to the nearest integer
/// and clamped to [0, 255] on the way out.
void save_image(const MultiChannelImage& image, const std::string& path);
void save_image(const ImageGrid& image, const std::string& path);

/// Load a single-channel image and threshold it into a mask: pixels with
/// values above 127.5 are marked known.
Mask load_mask(const std::string& path);

/// Render a mask as a grey image (known = 255, unknown = 0).
ImageGrid mask_to_image(const Mask& mask);

/// Write a scalar field as a little-endian greyscale PFM (no quantisation);
/// used for debug dumps of intermediate float fields.
void write_pfm(const ImageGrid& image, const std::string& path);

}  // namespace rds
