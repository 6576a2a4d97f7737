#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rds {

/// Fold an arbitrary signed index into [0, n) by mirror reflection.
/// The reflection duplicates the boundary cell: -1 -> 0, n -> n - 1,
/// and repeats with period 2n for indices further out.
inline int mirror_index(int i, int n) {
    if (i >= 0 && i < n) return i;
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

/// Cell-centred scalar field on a regular grid with spacing h.
/// Values are stored as doubles in row-major order; the nominal grey
/// range [0, 255] is enforced only when writing integer file formats.
class ImageGrid {
public:
    ImageGrid() = default;
    ImageGrid(int width, int height, double value = 0.0, double spacing = 1.0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double spacing() const noexcept { return spacing_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& at(int x, int y) { return values_[index(x, y)]; }
    double at(int x, int y) const { return values_[index(x, y)]; }

    /// Read with mirrored (reflecting) boundary handling; x and y may lie
    /// arbitrarily far outside the grid.
    double mirror_at(int x, int y) const {
        return values_[index(mirror_index(x, width_), mirror_index(y, height_))];
    }

    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }
    double* row(int y) { return values_.data() + static_cast<std::size_t>(y) * width_; }
    const double* row(int y) const { return values_.data() + static_cast<std::size_t>(y) * width_; }

    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    void fill(double value);
    bool same_shape(const ImageGrid& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    double spacing_ = 1.0;
    std::vector<double> values_;
};

/// A stack of equally shaped channels (1 = greyscale, 3 = RGB, ...).
class MultiChannelImage {
public:
    MultiChannelImage() = default;
    explicit MultiChannelImage(std::vector<ImageGrid> channels);
    MultiChannelImage(int width, int height, int n_channels, double value = 0.0,
                      double spacing = 1.0);

    int width() const noexcept { return channels_.empty() ? 0 : channels_[0].width(); }
    int height() const noexcept { return channels_.empty() ? 0 : channels_[0].height(); }
    double spacing() const noexcept { return channels_.empty() ? 1.0 : channels_[0].spacing(); }
    int n_channels() const noexcept { return static_cast<int>(channels_.size()); }

    ImageGrid& channel(int c) { return channels_[c]; }
    const ImageGrid& channel(int c) const { return channels_[c]; }

    std::vector<ImageGrid>& channels() noexcept { return channels_; }
    const std::vector<ImageGrid>& channels() const noexcept { return channels_; }

private:
    std::vector<ImageGrid> channels_;
};

/// Boolean inpainting mask: true marks a known (Dirichlet) pixel.
class Mask {
public:
    Mask() = default;
    Mask(int width, int height, bool known = false);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    bool known(int x, int y) const { return flags_[index(x, y)] != 0; }
    void set(int x, int y, bool value) { flags_[index(x, y)] = value ? 1 : 0; }

    /// Number of known pixels.
    std::size_t known_count() const;

    const std::vector<std::uint8_t>& flags() const noexcept { return flags_; }
    std::vector<std::uint8_t>& flags() noexcept { return flags_; }

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> flags_;
};

/// Throw std::invalid_argument unless the grid is at least 3x3 (the
/// smallest size every 3x3 stencil in this library is defined on).
void require_stencil_size(const ImageGrid& img, const char* op_name);

}  // namespace rds
