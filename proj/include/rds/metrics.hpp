#pragma once

#include "rds/image.hpp"

namespace rds {

struct Metrics {
    double mse = 0.0;
    double psnr = 0.0;             // 10 log10(255^2 / mse); +inf when mse = 0
    double binary_accuracy = 0.0;  // agreement after thresholding at the
                                   // reference mid-range
};

/// Compare a result against a reference of identical shape.
Metrics compute_metrics(const MultiChannelImage& result, const MultiChannelImage& reference);
Metrics compute_metrics(const ImageGrid& result, const ImageGrid& reference);

/// Binarise: 1 where value > threshold, else 0.
ImageGrid threshold_image(const ImageGrid& image, double threshold);

/// Number of 4-connected components of the non-zero pixels.
int count_components4(const ImageGrid& binary);

/// Contour length of the foreground of a binary image, measured with the
/// marching-squares midpoint rule (the image is treated as surrounded by
/// background, so every contour is closed).
double marching_squares_perimeter(const ImageGrid& binary);

/// Isoperimetric ratio 4 pi A / P^2 of the foreground: 1 for an ideal
/// disk, pi/4 for a square, smaller for elongated or ragged shapes.
double isoperimetric_ratio(const ImageGrid& binary);

}  // namespace rds
