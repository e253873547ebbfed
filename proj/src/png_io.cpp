#include "vdm/png_io.hpp"

#include <png.h>

#include <bit>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace vdm {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void quiet_warn_fn(png_structp, png_const_charp) {}

}  // namespace

Frame load_image(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("load_image: cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, quiet_warn_fn);
    if (!png) throw std::runtime_error("load_image: png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("load_image: png_create_info_struct failed");
    }

    // libpng reports errors by longjmp; everything reachable after the jump
    // lives outside the protected region.
    auto frame = std::make_unique<Frame>();
    auto row = std::make_unique<std::vector<uint8_t>>();
    bool failed = false;
    if (setjmp(png_jmpbuf(png))) {
        failed = true;
    } else {
        png_init_io(png, fp.get());
        png_read_info(png, info);

        const png_byte color_type = png_get_color_type(png, info);
        const png_byte bit_depth = png_get_bit_depth(png, info);

        if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
            png_set_gray_to_rgb(png);
        png_set_strip_alpha(png);
        if (bit_depth == 16 && std::endian::native == std::endian::little) png_set_swap(png);
        png_read_update_info(png, info);

        const int width = static_cast<int>(png_get_image_width(png, info));
        const int height = static_cast<int>(png_get_image_height(png, info));
        const png_byte channels = png_get_channels(png, info);
        const png_byte out_depth = png_get_bit_depth(png, info);
        if (channels != 3 || (out_depth != 8 && out_depth != 16)) {
            png_destroy_read_struct(&png, &info, nullptr);
            throw std::runtime_error("load_image: unsupported color type in " + path);
        }

        row->resize(png_get_rowbytes(png, info));
        *frame = Frame(width, height);
        const float maximum = out_depth == 8 ? 255.0f : 65535.0f;
        for (int y = 0; y < height; ++y) {
            png_read_row(png, row->data(), nullptr);
            if (out_depth == 8) {
                for (int x = 0; x < width; ++x)
                    for (int c = 0; c < 3; ++c) frame->ch[c].at(x, y) = (*row)[x * 3 + c] / maximum;
            } else {
                const uint16_t* row16 = reinterpret_cast<const uint16_t*>(row->data());
                for (int x = 0; x < width; ++x)
                    for (int c = 0; c < 3; ++c) frame->ch[c].at(x, y) = row16[x * 3 + c] / maximum;
            }
        }
        png_read_end(png, nullptr);
    }
    png_destroy_read_struct(&png, &info, nullptr);
    if (failed) throw std::runtime_error("load_image: failed to decode " + path);
    return std::move(*frame);
}

void save_image(const Frame& frame, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("save_image: cannot open " + path + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, quiet_warn_fn);
    if (!png) throw std::runtime_error("save_image: png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("save_image: png_create_info_struct failed");
    }

    auto row = std::make_unique<std::vector<uint8_t>>(static_cast<size_t>(frame.width()) * 3);
    bool failed = false;
    if (setjmp(png_jmpbuf(png))) {
        failed = true;
    } else {
        png_init_io(png, fp.get());
        png_set_IHDR(png, info, frame.width(), frame.height(), 8, PNG_COLOR_TYPE_RGB,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        for (int y = 0; y < frame.height(); ++y) {
            for (int x = 0; x < frame.width(); ++x)
                for (int c = 0; c < 3; ++c) (*row)[x * 3 + c] = quantize8(frame.ch[c].at(x, y));
            png_write_row(png, row->data());
        }
        png_write_end(png, nullptr);
    }
    png_destroy_write_struct(&png, &info);
    if (failed) throw std::runtime_error("save_image: failed to write " + path);
}

}  // namespace vdm
