#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "rds/image.hpp"
#include "rds/image_io.hpp"

using namespace rds;

namespace {

namespace fs = std::filesystem;

// Unique scratch file that cleans up after itself.
struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name) {
        static int counter = 0;
        path = fs::temp_directory_path() / ("rds_test_" + std::to_string(counter++) + "_" + name);
    }
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }
    std::string str() const { return path.string(); }
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

bool throws_with(const std::function<void()>& fn, const std::string& needle) {
    try {
        fn();
    } catch (const std::exception& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("mirror_index folds indices with edge repetition") {
    CHECK(mirror_index(0, 5) == 0);
    CHECK(mirror_index(4, 5) == 4);
    CHECK(mirror_index(-1, 5) == 0);
    CHECK(mirror_index(-2, 5) == 1);
    CHECK(mirror_index(5, 5) == 4);
    CHECK(mirror_index(6, 5) == 3);
    CHECK(mirror_index(9, 5) == 0);
    CHECK(mirror_index(10, 5) == 0);  // full period
    CHECK(mirror_index(-6, 5) == 4);
    // single-pixel axis: everything folds to 0
    CHECK(mirror_index(-3, 1) == 0);
    CHECK(mirror_index(7, 1) == 0);
}

TEST_CASE("ImageGrid construction and access") {
    ImageGrid img(4, 3, 7.5, 0.5);
    CHECK(img.width() == 4);
    CHECK(img.height() == 3);
    CHECK(img.spacing() == 0.5);
    CHECK(img.values().size() == 12);
    for (const double v : img.values()) CHECK(v == 7.5);

    img.at(2, 1) = -3.0;
    CHECK(img.at(2, 1) == -3.0);
    CHECK(img.row(1)[2] == -3.0);

    CHECK_THROWS_AS(ImageGrid(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(ImageGrid(3, -1), std::invalid_argument);
    CHECK_THROWS_AS(ImageGrid(3, 3, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ImageGrid(3, 3, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("mirror_at reflects out-of-range reads") {
    ImageGrid img(3, 2);
    int k = 0;
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 3; ++x) img.at(x, y) = k++;

    CHECK(img.mirror_at(-1, 0) == img.at(0, 0));
    CHECK(img.mirror_at(3, 0) == img.at(2, 0));
    CHECK(img.mirror_at(0, -1) == img.at(0, 0));
    CHECK(img.mirror_at(0, 2) == img.at(0, 1));
    CHECK(img.mirror_at(-2, 3) == img.at(1, 0));
}

TEST_CASE("MultiChannelImage validates matching channels") {
    MultiChannelImage rgb(4, 4, 3, 1.0);
    CHECK(rgb.n_channels() == 3);
    CHECK(rgb.width() == 4);
    CHECK(rgb.channel(2).at(1, 1) == 1.0);

    CHECK_THROWS_AS(MultiChannelImage(4, 4, 0), std::invalid_argument);
    std::vector<ImageGrid> mismatched{ImageGrid(4, 4), ImageGrid(4, 3)};
    CHECK_THROWS_AS(MultiChannelImage(std::move(mismatched)), std::invalid_argument);
    std::vector<ImageGrid> mixed_spacing{ImageGrid(4, 4, 0.0, 1.0), ImageGrid(4, 4, 0.0, 0.5)};
    CHECK_THROWS_AS(MultiChannelImage(std::move(mixed_spacing)), std::invalid_argument);
}

TEST_CASE("Mask flags and counting") {
    Mask mask(3, 3);
    CHECK(mask.known_count() == 0);
    mask.set(1, 1, true);
    mask.set(2, 0, true);
    CHECK(mask.known(1, 1));
    CHECK_FALSE(mask.known(0, 0));
    CHECK(mask.known_count() == 2);
    mask.set(1, 1, false);
    CHECK(mask.known_count() == 1);

    Mask full(2, 2, true);
    CHECK(full.known_count() == 4);
}

TEST_CASE("ASCII PGM loads with values scaled to [0,255]") {
    TempFile f("a.pgm");
    write_file(f.path, "P2\n# comment line\n2 2\n255\n0 255\n128 64\n");
    const MultiChannelImage img = load_image(f.str());
    CHECK(img.n_channels() == 1);
    CHECK(img.width() == 2);
    CHECK(img.height() == 2);
    CHECK(img.channel(0).at(0, 0) == 0.0);
    CHECK(img.channel(0).at(1, 0) == 255.0);
    CHECK(img.channel(0).at(0, 1) == 128.0);
    CHECK(img.channel(0).at(1, 1) == 64.0);
}

TEST_CASE("PGM maxval rescaling") {
    TempFile f("b.pgm");
    write_file(f.path, "P2\n1 1\n100\n50\n");
    const MultiChannelImage img = load_image(f.str());
    CHECK(img.channel(0).at(0, 0) == doctest::Approx(127.5));
}

TEST_CASE("truncated PNM reports unexpected end of file") {
    TempFile f("c.pgm");
    write_file(f.path, "P2\n2 2\n255\n0 255 128\n");
    CHECK(throws_with([&] { load_image(f.str()); }, "unexpected end of file"));

    TempFile g("d.pgm");
    write_file(g.path, "P5\n2 2\n255\nab");
    CHECK(throws_with([&] { load_image(g.str()); }, "unexpected end of file"));
}

TEST_CASE("16-bit PNM is rejected") {
    TempFile f("e.pgm");
    write_file(f.path, "P2\n1 1\n65535\n1024\n");
    CHECK(throws_with([&] { load_image(f.str()); }, "unsupported bit depth (maxval > 255)"));
}

TEST_CASE("malformed and unsupported headers are rejected") {
    TempFile f("f.pgm");
    write_file(f.path, "P4\n2 2\n255\n0 0 0 0\n");
    CHECK(throws_with([&] { load_image(f.str()); }, "unsupported PNM magic"));

    TempFile g("g.pgm");
    write_file(g.path, "P2\n2x 2\n255\n0 0 0 0\n");
    CHECK(throws_with([&] { load_image(g.str()); }, "malformed header token"));

    CHECK_THROWS_AS(load_image("/nonexistent/definitely_missing.pgm"), std::runtime_error);
}

TEST_CASE("binary PGM round trip preserves integer grey levels") {
    ImageGrid img(5, 4);
    int k = 0;
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 5; ++x) img.at(x, y) = (k += 13) % 256;

    TempFile f("rt.pgm");
    save_image(img, f.str());
    const MultiChannelImage back = load_image(f.str());
    REQUIRE(back.n_channels() == 1);
    REQUIRE(back.width() == 5);
    REQUIRE(back.height() == 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 5; ++x) CHECK(back.channel(0).at(x, y) == img.at(x, y));
}

TEST_CASE("PPM round trip preserves colour samples") {
    MultiChannelImage img(3, 2, 3);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 3; ++x) img.channel(c).at(x, y) = (40 * c + 17 * x + 5 * y) % 256;

    TempFile f("rt.ppm");
    save_image(img, f.str());
    const MultiChannelImage back = load_image(f.str());
    REQUIRE(back.n_channels() == 3);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 3; ++x) CHECK(back.channel(c).at(x, y) == img.channel(c).at(x, y));
}

TEST_CASE("ASCII PPM loads interleaved samples") {
    TempFile f("p3.ppm");
    write_file(f.path, "P3\n2 1\n255\n10 20 30  40 50 60\n");
    const MultiChannelImage img = load_image(f.str());
    REQUIRE(img.n_channels() == 3);
    CHECK(img.channel(0).at(0, 0) == 10.0);
    CHECK(img.channel(1).at(0, 0) == 20.0);
    CHECK(img.channel(2).at(0, 0) == 30.0);
    CHECK(img.channel(0).at(1, 0) == 40.0);
    CHECK(img.channel(2).at(1, 0) == 60.0);
}

TEST_CASE("PNG round trip, greyscale and colour") {
    ImageGrid grey(6, 5);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 6; ++x) grey.at(x, y) = (31 * x + 7 * y) % 256;
    TempFile f("rt_grey.png");
    save_image(grey, f.str());
    const MultiChannelImage grey_back = load_image(f.str());
    REQUIRE(grey_back.n_channels() == 1);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 6; ++x) CHECK(grey_back.channel(0).at(x, y) == grey.at(x, y));

    MultiChannelImage rgb(4, 4, 3);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x) rgb.channel(c).at(x, y) = (80 * c + 16 * y + 4 * x) % 256;
    TempFile g("rt_rgb.png");
    save_image(rgb, g.str());
    const MultiChannelImage rgb_back = load_image(g.str());
    REQUIRE(rgb_back.n_channels() == 3);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                CHECK(rgb_back.channel(c).at(x, y) == rgb.channel(c).at(x, y));
}

TEST_CASE("saving quantises by rounding and clamps to [0,255]") {
    ImageGrid img(3, 1);
    img.at(0, 0) = -12.7;
    img.at(1, 0) = 99.5;
    img.at(2, 0) = 300.2;
    TempFile f("clamp.pgm");
    save_image(img, f.str());
    const MultiChannelImage back = load_image(f.str());
    CHECK(back.channel(0).at(0, 0) == 0.0);
    CHECK(back.channel(0).at(1, 0) == 100.0);
    CHECK(back.channel(0).at(2, 0) == 255.0);
}

TEST_CASE("channel count must match the container format") {
    MultiChannelImage rgb(3, 3, 3);
    TempFile f("bad.pgm");
    CHECK(throws_with([&] { save_image(rgb, f.str()); }, "channel count does not match format"));

    ImageGrid grey(3, 3);
    TempFile g("bad.ppm");
    CHECK(throws_with([&] { save_image(grey, g.str()); }, "channel count does not match format"));

    TempFile h("bad.bmp");
    CHECK_THROWS_AS(save_image(grey, h.str()), std::runtime_error);
}

TEST_CASE("masks load by thresholding above mid-grey") {
    TempFile f("m.pgm");
    write_file(f.path, "P2\n3 1\n255\n0 127 200\n");
    const Mask mask = load_mask(f.str());
    CHECK_FALSE(mask.known(0, 0));
    CHECK_FALSE(mask.known(1, 0));  // 127 <= 127.5
    CHECK(mask.known(2, 0));
    CHECK(mask.known_count() == 1);

    // colour images are not masks
    TempFile g("m.ppm");
    write_file(g.path, "P3\n1 1\n255\n1 2 3\n");
    CHECK_THROWS_AS(load_mask(g.str()), std::runtime_error);
}

TEST_CASE("mask_to_image round trips through load_mask") {
    Mask mask(4, 2);
    mask.set(0, 0, true);
    mask.set(3, 1, true);
    TempFile f("mask_rt.pgm");
    save_image(mask_to_image(mask), f.str());
    const Mask back = load_mask(f.str());
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 4; ++x) CHECK(back.known(x, y) == mask.known(x, y));
}

TEST_CASE("PFM output is a valid single-channel float map") {
    ImageGrid img(2, 2);
    img.at(0, 0) = 1.25;
    img.at(1, 0) = -2.0;
    img.at(0, 1) = 0.0;
    img.at(1, 1) = 1e6;
    TempFile f("x.pfm");
    write_pfm(img, f.str());

    std::ifstream in(f.path, std::ios::binary);
    std::string magic;
    in >> magic;
    CHECK(magic == "Pf");
    int w = 0, h = 0;
    double scale = 0.0;
    in >> w >> h >> scale;
    CHECK(w == 2);
    CHECK(h == 2);
    CHECK(scale == -1.0);  // little-endian marker
    in.get();
    float px[4] = {};
    in.read(reinterpret_cast<char*>(px), sizeof(px));
    REQUIRE(in.gcount() == static_cast<std::streamsize>(sizeof(px)));
    // rows are stored bottom-up
    CHECK(px[0] == 0.0f);
    CHECK(px[1] == 1e6f);
    CHECK(px[2] == 1.25f);
    CHECK(px[3] == -2.0f);
}

TEST_CASE("stencil-size guard rejects images smaller than 3x3") {
    ImageGrid tiny(2, 2);
    CHECK_THROWS_AS(require_stencil_size(tiny, "test op"), std::invalid_argument);
    ImageGrid ok(3, 3);
    CHECK_NOTHROW(require_stencil_size(ok, "test op"));
}
