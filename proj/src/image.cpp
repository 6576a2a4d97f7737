#include "rds/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rds {

ImageGrid::ImageGrid(int width, int height, double value, double spacing)
    : width_(width), height_(height), spacing_(spacing) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("ImageGrid: dimensions must be positive");
    if (!(spacing > 0.0))
        throw std::invalid_argument("ImageGrid: grid spacing must be positive");
    values_.assign(static_cast<std::size_t>(width) * height, value);
}

void ImageGrid::fill(double value) {
    std::fill(values_.begin(), values_.end(), value);
}

MultiChannelImage::MultiChannelImage(std::vector<ImageGrid> channels)
    : channels_(std::move(channels)) {
    if (channels_.empty())
        throw std::invalid_argument("MultiChannelImage: needs at least one channel");
    for (const ImageGrid& ch : channels_) {
        if (!ch.same_shape(channels_[0]) || ch.spacing() != channels_[0].spacing())
            throw std::invalid_argument("MultiChannelImage: channels must share shape and spacing");
    }
}

MultiChannelImage::MultiChannelImage(int width, int height, int n_channels, double value,
                                     double spacing) {
    if (n_channels < 1)
        throw std::invalid_argument("MultiChannelImage: needs at least one channel");
    channels_.reserve(static_cast<std::size_t>(n_channels));
    for (int c = 0; c < n_channels; ++c)
        channels_.emplace_back(width, height, value, spacing);
}

Mask::Mask(int width, int height, bool known) : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("Mask: dimensions must be positive");
    flags_.assign(static_cast<std::size_t>(width) * height, known ? 1 : 0);
}

std::size_t Mask::known_count() const {
    return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

void require_stencil_size(const ImageGrid& img, const char* op_name) {
    if (img.width() < 3 || img.height() < 3)
        throw std::invalid_argument(std::string(op_name) +
                                    ": image must be at least 3x3 for 3x3 stencils");
}

}  // namespace rds
