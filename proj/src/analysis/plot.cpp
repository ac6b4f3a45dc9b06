#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "deadeye/analysis/report.hpp"
#include "deadeye/core/error.hpp"

namespace deadeye {

namespace {

// 5x7 glyphs, one byte per row, bit 4 is the leftmost column.
struct Glyph {
  char c;
  std::uint8_t rows[7];
};

constexpr Glyph kFont[] = {
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x11, 0x1F, 0x11, 0x11}}, {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}, {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}, {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}, {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}, {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}, {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}, {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}, {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}, {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}, {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}}, {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}}, {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}}, {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {'/', {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x00}}, {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}}, {'%', {0x18, 0x19, 0x02, 0x04, 0x08, 0x13, 0x03}},
    {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}}, {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08}},
};

const Glyph* glyph(char c) {
  if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  for (const Glyph& g : kFont) {
    if (g.c == c) return &g;
  }
  return nullptr;
}

constexpr Rgb8 kWhite{255, 255, 255};
constexpr Rgb8 kInk{30, 30, 30};
constexpr Rgb8 kGrid{215, 215, 215};
constexpr Rgb8 kSeries[] = {{52, 101, 164}, {204, 102, 51}, {87, 160, 92}, {150, 90, 170}};

class Canvas {
 public:
  Canvas(int w, int h) : image(w, h, kWhite) {}

  void rect(int x0, int y0, int x1, int y1, Rgb8 c) {
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, image.width);
    y1 = std::min(y1, image.height);
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) image.set(x, y, c);
    }
  }
  void hline(int x0, int x1, int y, Rgb8 c) { rect(x0, y, x1, y + 1, c); }
  void vline(int x, int y0, int y1, Rgb8 c) { rect(x, y0, x + 1, y1, c); }

  static int text_width(const std::string& s, int scale) { return static_cast<int>(s.size()) * 6 * scale - scale; }

  void text(int x, int y, const std::string& s, Rgb8 c, int scale = 1) {
    for (char ch : s) {
      if (const Glyph* g = glyph(ch)) {
        for (int r = 0; r < 7; ++r) {
          for (int col = 0; col < 5; ++col) {
            if (g->rows[r] & (0x10 >> col)) rect(x + col * scale, y + r * scale, x + (col + 1) * scale, y + (r + 1) * scale, c);
          }
        }
      }
      x += 6 * scale;
    }
  }
  void text_centered(int cx, int y, const std::string& s, Rgb8 c, int scale = 1) {
    text(cx - text_width(s, scale) / 2, y, s, c, scale);
  }

  RgbImage image;
};

std::string fixed(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Plot area with a linear y axis.
struct Axes {
  int left, top, right, bottom;
  double ymax;
  int y(double v) const { return bottom - static_cast<int>(std::lround((bottom - top) * std::clamp(v / ymax, 0.0, 1.0))); }
};

void draw_axes(Canvas& cv, const Axes& ax, int ticks, int decimals) {
  for (int i = 0; i <= ticks; ++i) {
    const double v = ax.ymax * i / ticks;
    const int y = ax.y(v);
    cv.hline(ax.left, ax.right, y, kGrid);
    const std::string label = fixed(v, decimals);
    cv.text(ax.left - 8 - Canvas::text_width(label, 1), y - 3, label, kInk);
  }
  cv.vline(ax.left, ax.top, ax.bottom + 1, kInk);
  cv.hline(ax.left, ax.right, ax.bottom, kInk);
}

}  // namespace

RgbImage plot_accuracy(const Summary& summary) {
  if (summary.sets.empty()) throw Error(ErrorKind::domain, "no sets to plot");
  Canvas cv(860, 480);
  const Axes ax{70, 50, 840, 420, 1.0};
  cv.text_centered(430, 16, "MEAN ACCURACY PER SET (+-1 SD)", kInk, 2);
  draw_axes(cv, ax, 4, 2);
  const int n = static_cast<int>(summary.sets.size());
  const int slot = (ax.right - ax.left) / n;
  for (int i = 0; i < n; ++i) {
    const SetSummary& s = summary.sets[static_cast<std::size_t>(i)];
    const int cx = ax.left + slot * i + slot / 2;
    const int half = slot / 4;
    cv.rect(cx - half, ax.y(s.accuracy.mean), cx + half, ax.bottom, kSeries[i < 3 ? 0 : 1]);
    const int hi = ax.y(s.accuracy.mean + s.accuracy.sd);
    const int lo = ax.y(s.accuracy.mean - s.accuracy.sd);
    cv.vline(cx, hi, lo + 1, kInk);
    cv.hline(cx - 6, cx + 7, hi, kInk);
    cv.hline(cx - 6, cx + 7, lo, kInk);
    cv.text_centered(cx, std::max(hi - 12, ax.top - 10), fixed(s.accuracy.mean, 3), kInk);
    cv.text_centered(cx, ax.bottom + 10, to_string(*s.set_kind), kInk);
    cv.text_centered(cx, ax.bottom + 24, "N=" + std::to_string(s.pooled.n_trials), kInk);
  }
  return std::move(cv.image);
}

RgbImage plot_tlx(const std::vector<QuestionnaireSummary>& summaries) {
  std::vector<const QuestionnaireSummary*> tlx;
  for (const auto& s : summaries) {
    if (s.kind == QuestionnaireKind::nasa_tlx) tlx.push_back(&s);
  }
  if (tlx.empty()) throw Error(ErrorKind::domain, "no NASA-TLX records to plot");
  Canvas cv(860, 480);
  const Axes ax{70, 60, 840, 420, 100.0};
  cv.text_centered(430, 16, "NASA-TLX SUBSCALE MEANS (+-1 SD)", kInk, 2);
  draw_axes(cv, ax, 5, 0);
  const int groups = 6;
  const int slot = (ax.right - ax.left) / groups;
  const int series = static_cast<int>(tlx.size());
  const int bar = std::max(4, (slot - 20) / series);
  for (int g = 0; g < groups; ++g) {
    const int x0 = ax.left + slot * g + (slot - bar * series) / 2;
    for (int s = 0; s < series; ++s) {
      const Descriptive& d = tlx[static_cast<std::size_t>(s)]->items[static_cast<std::size_t>(g)];
      const int bx = x0 + s * bar;
      cv.rect(bx + 1, ax.y(d.mean), bx + bar - 1, ax.bottom, kSeries[s % 4]);
      const int cx = bx + bar / 2;
      cv.vline(cx, ax.y(d.mean + d.sd), ax.y(d.mean - d.sd) + 1, kInk);
    }
    cv.text_centered(ax.left + slot * g + slot / 2, ax.bottom + 10, kTlxScales[g], kInk);
  }
  int lx = ax.left + 10;
  for (int s = 0; s < series; ++s) {
    cv.rect(lx, 40, lx + 10, 50, kSeries[s % 4]);
    const std::string label = tlx[static_cast<std::size_t>(s)]->block_label + " (N=" + std::to_string(tlx[static_cast<std::size_t>(s)]->n) + ")";
    cv.text(lx + 14, 42, label, kInk);
    lx += 14 + Canvas::text_width(label, 1) + 20;
  }
  return std::move(cv.image);
}

RgbImage plot_position(const PositionMatrix& m) {
  const int cell = 80;
  const int left = 50, top = 50;
  Canvas cv(left + m.cols * cell + 20, top + m.rows * cell + 40);
  const std::string title =
      "DETECTION RATE PER CELL" + (m.depth_plane ? " (PLANE " + std::to_string(*m.depth_plane) + ")" : std::string());
  cv.text_centered(cv.image.width / 2, 16, title, kInk, 2);
  for (int r = 0; r < m.rows; ++r) {
    cv.text(left - 16, top + r * cell + cell / 2 - 3, std::to_string(r), kInk);
    for (int c = 0; c < m.cols; ++c) {
      const int x = left + c * cell;
      const int y = top + r * cell;
      const auto rate = m.rate(r, c);
      Rgb8 fill{190, 190, 190};
      if (rate) {
        const double t = *rate;
        fill = {static_cast<std::uint8_t>(std::lround(220 * (1 - t) + 40 * t)),
                static_cast<std::uint8_t>(std::lround(60 * (1 - t) + 170 * t)),
                static_cast<std::uint8_t>(std::lround(50 * (1 - t) + 80 * t))};
      }
      cv.rect(x + 1, y + 1, x + cell - 1, y + cell - 1, fill);
      cv.text_centered(x + cell / 2, y + cell / 2 - 7, rate ? fixed(*rate, 2) : "NA", kWhite, 2);
      cv.text_centered(x + cell / 2, y + cell - 14,
                       "N=" + std::to_string(m.targets[static_cast<std::size_t>(r * m.cols + c)]), kWhite);
    }
  }
  for (int c = 0; c < m.cols; ++c) cv.text_centered(left + c * cell + cell / 2, top + m.rows * cell + 10, std::to_string(c), kInk);
  return std::move(cv.image);
}

}  // namespace deadeye
