// Copyright 2026 The CoresetKit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coresetkit/raster_io.hpp"

#include <png.h>
#include <tiffio.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

namespace coresetkit {
namespace {

namespace fs = std::filesystem;

enum class Format { kPng, kTiff };

Format FormatOf(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") return Format::kPng;
  if (ext == ".tif" || ext == ".tiff") return Format::kTiff;
  throw InvalidArgument("unsupported raster extension '" + ext + "' (" +
                        path.string() + ")");
}

// Decoded samples before conversion to Image/LabelMask.
struct RawRaster {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  int bits = 0;
  bool is_float = false;
  bool is_signed = false;
  bool has_alpha = false;
  std::vector<std::uint8_t> bytes;  // host-order samples, rows packed

  double Sample(std::size_t i) const {
    const std::uint8_t* p = bytes.data() + i * (bits / 8);
    switch (bits) {
      case 8:
        return is_signed ? static_cast<double>(static_cast<std::int8_t>(*p)) : *p;
      case 16: {
        std::uint16_t v;
        std::memcpy(&v, p, 2);
        return is_signed ? static_cast<double>(static_cast<std::int16_t>(v)) : v;
      }
      default: {
        std::uint32_t v;
        std::memcpy(&v, p, 4);
        if (is_float) return std::bit_cast<float>(v);
        return is_signed ? static_cast<double>(static_cast<std::int32_t>(v)) : v;
      }
    }
  }
};

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr OpenFile(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

// --- PNG --------------------------------------------------------------------

struct PngRead {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngRead() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWrite {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWrite() { png_destroy_write_struct(&png, &info); }
};

void PngWarning(png_structp, png_const_charp) {}

[[noreturn]] void PngError(png_structp png, png_const_charp) { png_longjmp(png, 1); }

// Nothing with a non-trivial destructor may be created between setjmp and the
// last libpng call in these functions.
bool DecodePng(std::FILE* file, bool keep_palette_indices, RawRaster& out,
               std::vector<png_bytep>& rows) {
  PngRead r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, PngError,
                                 PngWarning);
  if (!r.png) return false;
  r.info = png_create_info_struct(r.png);
  if (!r.info) return false;
  if (setjmp(png_jmpbuf(r.png))) return false;

  png_init_io(r.png, file);
  png_read_info(r.png, r.info);
  const int color = png_get_color_type(r.png, r.info);
  const int depth = png_get_bit_depth(r.png, r.info);
  if (color == PNG_COLOR_TYPE_PALETTE) {
    if (keep_palette_indices) {
      png_set_packing(r.png);
    } else {
      png_set_palette_to_rgb(r.png);
    }
  }
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
    if (keep_palette_indices) {
      png_set_packing(r.png);
    } else {
      png_set_expand_gray_1_2_4_to_8(r.png);
    }
  }
  if (depth == 16 && std::endian::native == std::endian::little) {
    png_set_swap(r.png);
  }
  png_read_update_info(r.png, r.info);

  out.height = png_get_image_height(r.png, r.info);
  out.width = png_get_image_width(r.png, r.info);
  out.channels = png_get_channels(r.png, r.info);
  out.bits = png_get_bit_depth(r.png, r.info);
  const int updated_color = png_get_color_type(r.png, r.info);
  out.has_alpha = (updated_color & PNG_COLOR_MASK_ALPHA) != 0;
  const std::size_t row_bytes = png_get_rowbytes(r.png, r.info);
  out.bytes.resize(row_bytes * out.height);
  rows.resize(out.height);
  for (std::size_t y = 0; y < out.height; ++y) {
    rows[y] = out.bytes.data() + y * row_bytes;
  }
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return true;
}

RawRaster ReadPng(const fs::path& path, bool keep_palette_indices) {
  FilePtr file = OpenFile(path, "rb");
  RawRaster raw;
  std::vector<png_bytep> rows;
  if (!DecodePng(file.get(), keep_palette_indices, raw, rows)) {
    throw FormatError("cannot decode PNG " + path.string());
  }
  return raw;
}

bool EncodePng(std::FILE* file, const RawRaster& in,
               std::vector<png_const_bytep>& rows) {
  PngWrite w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, PngError,
                                  PngWarning);
  if (!w.png) return false;
  w.info = png_create_info_struct(w.png);
  if (!w.info) return false;
  if (setjmp(png_jmpbuf(w.png))) return false;

  int color = PNG_COLOR_TYPE_GRAY;
  switch (in.channels) {
    case 1: color = PNG_COLOR_TYPE_GRAY; break;
    case 2: color = PNG_COLOR_TYPE_GRAY_ALPHA; break;
    case 3: color = PNG_COLOR_TYPE_RGB; break;
    default: color = PNG_COLOR_TYPE_RGB_ALPHA; break;
  }
  png_init_io(w.png, file);
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(in.width),
               static_cast<png_uint_32>(in.height), in.bits, color,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  if (in.bits == 16 && std::endian::native == std::endian::little) {
    png_set_swap(w.png);
  }
  const std::size_t row_bytes = in.width * in.channels * (in.bits / 8);
  rows.resize(in.height);
  for (std::size_t y = 0; y < in.height; ++y) {
    rows[y] = in.bytes.data() + y * row_bytes;
  }
  png_write_image(w.png, const_cast<png_bytepp>(rows.data()));
  png_write_end(w.png, nullptr);
  return true;
}

void WritePng(const RawRaster& raw, const fs::path& path) {
  if (raw.channels < 1 || raw.channels > 4 || (raw.bits != 8 && raw.bits != 16)) {
    throw InvalidArgument("PNG supports 1-4 channels at 8 or 16 bits");
  }
  FilePtr file = OpenFile(path, "wb");
  std::vector<png_const_bytep> rows;
  if (!EncodePng(file.get(), raw, rows)) {
    throw IoError("cannot encode PNG " + path.string());
  }
}

// --- TIFF -------------------------------------------------------------------

struct TiffCloser {
  void operator()(TIFF* t) const { TIFFClose(t); }
};
using TiffPtr = std::unique_ptr<TIFF, TiffCloser>;

void SilenceLibtiff() {
  static const bool once = [] {
    TIFFSetWarningHandler(nullptr);
    TIFFSetErrorHandler(nullptr);
    return true;
  }();
  (void)once;
}

RawRaster ReadTiff(const fs::path& path) {
  SilenceLibtiff();
  TiffPtr tif(TIFFOpen(path.c_str(), "r"));
  if (!tif) throw FormatError("cannot open TIFF " + path.string());
  std::uint32_t width = 0, height = 0;
  std::uint16_t bits = 8, spp = 1, format = SAMPLEFORMAT_UINT,
                planar = PLANARCONFIG_CONTIG, extra_count = 0;
  std::uint16_t* extra_types = nullptr;
  TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &width);
  TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &height);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bits);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLEFORMAT, &format);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PLANARCONFIG, &planar);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_EXTRASAMPLES, &extra_count,
                        &extra_types);
  if (bits != 8 && bits != 16 && bits != 32) {
    throw FormatError("unsupported TIFF bit depth " + std::to_string(bits) +
                      " in " + path.string());
  }
  if (planar != PLANARCONFIG_CONTIG && spp > 1) {
    throw FormatError("planar TIFF layouts are not supported: " + path.string());
  }
  if (format == SAMPLEFORMAT_IEEEFP && bits != 32) {
    throw FormatError("only 32-bit float TIFFs are supported: " + path.string());
  }
  RawRaster raw;
  raw.height = height;
  raw.width = width;
  raw.channels = spp;
  raw.bits = bits;
  raw.is_float = format == SAMPLEFORMAT_IEEEFP;
  raw.is_signed = format == SAMPLEFORMAT_INT;
  raw.has_alpha = extra_count > 0 && (spp == 2 || spp == 4);
  const std::size_t row_bytes = std::size_t{width} * spp * (bits / 8);
  if (static_cast<std::size_t>(TIFFScanlineSize(tif.get())) != row_bytes) {
    throw FormatError("unexpected TIFF scanline layout in " + path.string());
  }
  raw.bytes.resize(row_bytes * height);
  for (std::uint32_t y = 0; y < height; ++y) {
    if (TIFFReadScanline(tif.get(), raw.bytes.data() + y * row_bytes, y, 0) < 0) {
      throw FormatError("failed reading TIFF row in " + path.string());
    }
  }
  return raw;
}

void WriteTiff(const RawRaster& raw, const fs::path& path) {
  SilenceLibtiff();
  TiffPtr tif(TIFFOpen(path.c_str(), "w"));
  if (!tif) throw IoError("cannot create TIFF " + path.string());
  TIFF* t = tif.get();
  TIFFSetField(t, TIFFTAG_IMAGEWIDTH, static_cast<std::uint32_t>(raw.width));
  TIFFSetField(t, TIFFTAG_IMAGELENGTH, static_cast<std::uint32_t>(raw.height));
  TIFFSetField(t, TIFFTAG_BITSPERSAMPLE, static_cast<std::uint16_t>(raw.bits));
  TIFFSetField(t, TIFFTAG_SAMPLESPERPIXEL, static_cast<std::uint16_t>(raw.channels));
  TIFFSetField(t, TIFFTAG_SAMPLEFORMAT, SAMPLEFORMAT_UINT);
  TIFFSetField(t, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
  TIFFSetField(t, TIFFTAG_PHOTOMETRIC,
               raw.channels >= 3 ? PHOTOMETRIC_RGB : PHOTOMETRIC_MINISBLACK);
  if (raw.channels == 2 || raw.channels == 4) {
    const std::uint16_t extra = EXTRASAMPLE_UNASSALPHA;
    TIFFSetField(t, TIFFTAG_EXTRASAMPLES, 1, &extra);
  }
  const bool deflate = TIFFIsCODECConfigured(COMPRESSION_ADOBE_DEFLATE);
  TIFFSetField(t, TIFFTAG_COMPRESSION,
               deflate ? COMPRESSION_ADOBE_DEFLATE : COMPRESSION_NONE);
  TIFFSetField(t, TIFFTAG_ROWSPERSTRIP, TIFFDefaultStripSize(t, 0));
  const std::size_t row_bytes = raw.width * raw.channels * (raw.bits / 8);
  std::vector<std::uint8_t> row(row_bytes);
  for (std::size_t y = 0; y < raw.height; ++y) {
    std::memcpy(row.data(), raw.bytes.data() + y * row_bytes, row_bytes);
    if (TIFFWriteScanline(t, row.data(), static_cast<std::uint32_t>(y), 0) < 0) {
      throw IoError("failed writing TIFF " + path.string());
    }
  }
}

RawRaster ReadRaw(const fs::path& path, bool for_mask) {
  if (!fs::exists(path)) throw IoError("no such file " + path.string());
  return FormatOf(path) == Format::kPng ? ReadPng(path, for_mask) : ReadTiff(path);
}

}  // namespace

bool IsRasterFile(const fs::path& path) {
  try {
    FormatOf(path);
    return true;
  } catch (const InvalidArgument&) {
    return false;
  }
}

Image ReadImage(const fs::path& path) {
  RawRaster raw = ReadRaw(path, false);
  if (raw.bits != 8 && raw.bits != 16) {
    throw FormatError("images must be 8- or 16-bit: " + path.string());
  }
  if (raw.is_float) throw FormatError("float images are not supported: " + path.string());
  const std::size_t kept = raw.has_alpha ? raw.channels - 1 : raw.channels;
  Image image;
  image.bit_depth = raw.bits;
  image.pixels = Raster<std::uint16_t>(raw.height, raw.width, kept);
  auto& dst = image.pixels.data();
  for (std::size_t p = 0; p < raw.height * raw.width; ++p) {
    for (std::size_t c = 0; c < kept; ++c) {
      const double v = raw.Sample(p * raw.channels + c);
      dst[p * kept + c] = static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
    }
  }
  return image;
}

void WriteImage(const Image& image, const fs::path& path) {
  const auto& px = image.pixels;
  RawRaster raw;
  raw.height = px.height();
  raw.width = px.width();
  raw.channels = px.channels();
  raw.bits = image.bit_depth == 8 ? 8 : 16;
  raw.bytes.resize(px.size() * (raw.bits / 8));
  if (raw.bits == 8) {
    for (std::size_t i = 0; i < px.size(); ++i) {
      raw.bytes[i] = static_cast<std::uint8_t>(std::min<std::uint16_t>(px.data()[i], 255));
    }
  } else {
    std::memcpy(raw.bytes.data(), px.data().data(), raw.bytes.size());
  }
  if (FormatOf(path) == Format::kPng) {
    WritePng(raw, path);
  } else {
    WriteTiff(raw, path);
  }
}

LabelMask ReadMask(const fs::path& path) {
  RawRaster raw = ReadRaw(path, true);
  if (raw.channels != 1) {
    throw FormatError("label masks must have one channel: " + path.string());
  }
  LabelMask mask(raw.height, raw.width, 1);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double v = raw.Sample(i);
    if (!(v >= 0.0) || v > 4294967295.0 || v != std::floor(v)) {
      throw FormatError("mask " + path.string() +
                        " holds a value that is not a non-negative integer label");
    }
    mask.data()[i] = static_cast<std::uint32_t>(v);
  }
  return mask;
}

void WriteMask(const LabelMask& mask, const fs::path& path) {
  const std::uint32_t max_label =
      mask.empty() ? 0 : *std::max_element(mask.data().begin(), mask.data().end());
  RawRaster raw;
  raw.height = mask.height();
  raw.width = mask.width();
  raw.channels = 1;
  raw.bits = max_label > 0xFFFF ? 32 : 16;
  raw.bytes.resize(mask.size() * (raw.bits / 8));
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (raw.bits == 16) {
      const auto v = static_cast<std::uint16_t>(mask.data()[i]);
      std::memcpy(raw.bytes.data() + 2 * i, &v, 2);
    } else {
      std::memcpy(raw.bytes.data() + 4 * i, &mask.data()[i], 4);
    }
  }
  if (FormatOf(path) == Format::kPng) {
    if (raw.bits == 32) {
      throw InvalidArgument("labels above 65535 need a TIFF mask: " + path.string());
    }
    WritePng(raw, path);
  } else {
    WriteTiff(raw, path);
  }
}

}  // namespace coresetkit
