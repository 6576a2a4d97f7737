#include "rds/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace rds {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::string lower_extension(const std::string& path) {
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos) return {};
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// ---------------------------------------------------------------- PNM ----

// Reads one whitespace-delimited token, skipping '#' comments.
bool next_pnm_token(std::istream& in, std::string& token) {
    token.clear();
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF) return false;
    while (c != EOF && !std::isspace(c) && c != '#') {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c == '#') in.unget();
    return true;
}

long pnm_number(std::istream& in, const std::string& path) {
    std::string tok;
    if (!next_pnm_token(in, tok)) fail(path, "unexpected end of file");
    try {
        std::size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        fail(path, "malformed header token '" + tok + "'");
    }
}

MultiChannelImage load_pnm(std::ifstream& in, const std::string& path) {
    std::string magic;
    if (!next_pnm_token(in, magic)) fail(path, "unexpected end of file");

    int n_channels = 0;
    bool binary = false;
    if (magic == "P2") { n_channels = 1; binary = false; }
    else if (magic == "P5") { n_channels = 1; binary = true; }
    else if (magic == "P3") { n_channels = 3; binary = false; }
    else if (magic == "P6") { n_channels = 3; binary = true; }
    else fail(path, "unsupported PNM magic '" + magic + "'");

    const long width = pnm_number(in, path);
    const long height = pnm_number(in, path);
    const long maxval = pnm_number(in, path);
    if (width < 1 || height < 1) fail(path, "invalid image dimensions");
    if (maxval < 1) fail(path, "invalid maxval");
    if (maxval > 255) fail(path, "unsupported bit depth (maxval > 255)");

    MultiChannelImage image(static_cast<int>(width), static_cast<int>(height), n_channels);
    const double scale = 255.0 / static_cast<double>(maxval);
    const std::size_t n_samples =
        static_cast<std::size_t>(width) * height * n_channels;

    std::vector<long> samples(n_samples);
    if (binary) {
        // exactly one whitespace byte separates the header from the payload
        std::vector<unsigned char> raw(n_samples);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n_samples));
        if (static_cast<std::size_t>(in.gcount()) != n_samples)
            fail(path, "unexpected end of file");
        std::copy(raw.begin(), raw.end(), samples.begin());
    } else {
        for (std::size_t i = 0; i < n_samples; ++i) samples[i] = pnm_number(in, path);
    }

    for (std::size_t i = 0; i < n_samples; ++i) {
        if (samples[i] < 0 || samples[i] > maxval)
            fail(path, "sample value out of range");
    }

    std::size_t s = 0;
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x)
            for (int c = 0; c < n_channels; ++c)
                image.channel(c).at(x, y) = static_cast<double>(samples[s++]) * scale;
    return image;
}

void save_pnm(const MultiChannelImage& image, const std::string& path, bool colour) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open file for writing");

    const int w = image.width();
    const int h = image.height();
    const int n_channels = colour ? 3 : 1;
    out << (colour ? "P6" : "P5") << "\n" << w << " " << h << "\n255\n";

    std::vector<unsigned char> row(static_cast<std::size_t>(w) * n_channels);
    for (int y = 0; y < h; ++y) {
        std::size_t s = 0;
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < n_channels; ++c) {
                const double v = image.channel(c).at(x, y);
                const long q = std::lround(v);
                row[s++] = static_cast<unsigned char>(std::clamp(q, 0L, 255L));
            }
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
    if (!out) fail(path, "write error");
}

// ---------------------------------------------------------------- PNG ----

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* file = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (file) std::fclose(file);
    }
};

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* file = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (file) std::fclose(file);
    }
};

MultiChannelImage load_png(const std::string& path) {
    PngReadCloser ctx;
    ctx.file = std::fopen(path.c_str(), "rb");
    if (!ctx.file) fail(path, "cannot open file");

    unsigned char header[8];
    if (std::fread(header, 1, 8, ctx.file) != 8) fail(path, "unexpected end of file");
    if (png_sig_cmp(header, 0, 8)) fail(path, "not a PNG file");

    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) fail(path, "libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) fail(path, "libpng init failed");
    if (setjmp(png_jmpbuf(ctx.png))) fail(path, "corrupt PNG data");

    png_init_io(ctx.png, ctx.file);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    const int colour_type = png_get_color_type(ctx.png, ctx.info);

    // Normalise everything to 8-bit grey or RGB.
    if (bit_depth == 16) png_set_strip_16(ctx.png);
    if (colour_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (colour_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    const int channels = png_get_channels(ctx.png, ctx.info);
    if (channels != 1 && channels != 3) fail(path, "unsupported PNG channel layout");

    MultiChannelImage image(static_cast<int>(w), static_cast<int>(h), channels);
    const std::size_t stride = png_get_rowbytes(ctx.png, ctx.info);
    std::vector<unsigned char> row(stride);
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(ctx.png, row.data(), nullptr);
        std::size_t s = 0;
        for (png_uint_32 x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c)
                image.channel(c).at(static_cast<int>(x), static_cast<int>(y)) =
                    static_cast<double>(row[s++]);
    }
    png_read_end(ctx.png, nullptr);
    return image;
}

void save_png(const MultiChannelImage& image, const std::string& path) {
    const int channels = image.n_channels();
    PngWriteCloser ctx;
    ctx.file = std::fopen(path.c_str(), "wb");
    if (!ctx.file) fail(path, "cannot open file for writing");

    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) fail(path, "libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) fail(path, "libpng init failed");
    if (setjmp(png_jmpbuf(ctx.png))) fail(path, "write error");

    png_init_io(ctx.png, ctx.file);
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(image.width()),
                 static_cast<png_uint_32>(image.height()), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    std::vector<unsigned char> row(static_cast<std::size_t>(image.width()) * channels);
    for (int y = 0; y < image.height(); ++y) {
        std::size_t s = 0;
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < channels; ++c) {
                const long q = std::lround(image.channel(c).at(x, y));
                row[s++] = static_cast<unsigned char>(std::clamp(q, 0L, 255L));
            }
        }
        png_write_row(ctx.png, row.data());
    }
    png_write_end(ctx.png, nullptr);
}

}  // namespace

MultiChannelImage load_image(const std::string& path) {
    const std::string ext = lower_extension(path);
    if (ext == "png") return load_png(path);

    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    return load_pnm(in, path);
}

void save_image(const MultiChannelImage& image, const std::string& path) {
    if (image.n_channels() != 1 && image.n_channels() != 3)
        fail(path, "only 1- or 3-channel images can be saved");
    const std::string ext = lower_extension(path);
    if (ext == "png") {
        save_png(image, path);
    } else if (ext == "pgm") {
        if (image.n_channels() != 1) fail(path, "channel count does not match format");
        save_pnm(image, path, false);
    } else if (ext == "ppm") {
        if (image.n_channels() != 3) fail(path, "channel count does not match format");
        save_pnm(image, path, true);
    } else {
        fail(path, "unknown image extension '" + ext + "'");
    }
}

void save_image(const ImageGrid& image, const std::string& path) {
    save_image(MultiChannelImage(std::vector<ImageGrid>{image}), path);
}

Mask load_mask(const std::string& path) {
    const MultiChannelImage image = load_image(path);
    if (image.n_channels() != 1)
        fail(path, "mask files must be single-channel");
    Mask mask(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x)
            mask.set(x, y, image.channel(0).at(x, y) > 127.5);
    return mask;
}

ImageGrid mask_to_image(const Mask& mask) {
    ImageGrid image(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            image.at(x, y) = mask.known(x, y) ? 255.0 : 0.0;
    return image;
}

void write_pfm(const ImageGrid& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open file for writing");
    // "Pf" = greyscale; negative scale marks little-endian data.
    out << "Pf\n" << image.width() << " " << image.height() << "\n-1.0\n";
    std::vector<float> row(static_cast<std::size_t>(image.width()));
    for (int y = image.height() - 1; y >= 0; --y) {  // PFM stores bottom-up
        for (int x = 0; x < image.width(); ++x)
            row[static_cast<std::size_t>(x)] = static_cast<float>(image.at(x, y));
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) fail(path, "write error");
}

}  // namespace rds
