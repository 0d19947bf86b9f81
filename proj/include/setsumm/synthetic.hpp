#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "setsumm/csv.hpp"

namespace setsumm::synthetic {

inline constexpr std::uint64_t kDefaultSeed = 20170601;

namespace detail {

// Draws built directly on mt19937_64 output so fixtures are bit-identical
// across standard libraries (std distributions are not).
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

 private:
  std::mt19937_64 rng_;
};

inline const char* yn(bool b) { return b ? "Yes" : "No"; }

}  // namespace detail

// TV-catalog-like CSV: mostly common boolean and categorical features, a few
// price drivers, scattered missing cells and a handful of luxury outliers.
inline std::string tv_catalog_csv(std::uint64_t seed = kDefaultSeed, std::size_t rows = 363) {
  detail::Draw d(seed);
  std::string out;
  csv::append_row(out, {"model", "price", "aspect ratio", "backlight", "display technology", "HDMI", "design",
                        "analogue TV tuner", "digital TV tuner", "smart TV", "resolution",
                        "hd ready 1080p (full hd)", "number of hdmi inputs", "release year", "brightness",
                        "annual energy consumption", "brand", "USB"});
  const std::vector<std::string> brands{"Samsung", "LG", "Sony", "Panasonic", "Philips", "Toshiba", "Hisense"};
  const std::vector<std::string> resolutions{"720p", "1080p", "4K"};
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t res = d.chance(0.55) ? 0 : (d.chance(0.8) ? 1 : 2);
    const bool smart = d.chance(res == 0 ? 0.35 : 0.8);
    const int hdmi_inputs = 1 + static_cast<int>(d.index(res == 2 ? 2 : 3)) + (res == 2 ? 2 : 0);
    const int year = 2014 + static_cast<int>(d.index(4));
    const int brightness = 200 + 50 * static_cast<int>(d.index(res + 3));
    const bool oled = d.chance(0.05);
    const std::string brand = brands[d.index(brands.size())];

    double price = 90.0 + 60.0 * res + (smart ? 55.0 : 0.0) + 25.0 * (hdmi_inputs - 1) + 18.0 * (year - 2014) +
                   0.15 * (brightness - 200) + (oled ? 200.0 : 0.0) + 120.0 * d.unit();
    if (d.chance(0.035)) price *= 4.0 + 3.0 * d.unit();
    const long rounded = std::lround(price);

    csv::Row row;
    row.push_back("TV-" + std::to_string(1000 + i));
    row.push_back(d.chance(0.01) ? std::string("n/a")
                                 : (d.chance(0.5) ? "\xC2\xA3" + std::to_string(rounded) : std::to_string(rounded) + ".00"));
    row.push_back(d.chance(0.93) ? "16:9" : "4:3");
    row.push_back(oled ? "OLED" : (d.chance(0.92) ? "LED" : "CCFL"));
    row.push_back(oled ? "OLED" : "LCD");
    row.push_back(detail::yn(d.chance(0.96)));
    row.push_back(d.chance(0.9) ? "Flat panel" : "Curved");
    row.push_back(detail::yn(d.chance(0.84)));
    row.push_back(detail::yn(d.chance(0.97)));
    row.push_back(detail::yn(smart));
    row.push_back(resolutions[res]);
    row.push_back(d.chance(0.03) ? "" : detail::yn(res >= 1));
    row.push_back(std::to_string(hdmi_inputs));
    row.push_back(std::to_string(year));
    row.push_back(d.chance(0.04) ? "-" : std::to_string(brightness));
    row.push_back(std::to_string(30 + 5 * static_cast<int>(d.index(8)) + 10 * static_cast<int>(res)));
    row.push_back(brand);
    row.push_back(detail::yn(d.chance(0.7)));
    csv::append_row(out, row);
  }
  return out;
}

}  // namespace setsumm::synthetic
