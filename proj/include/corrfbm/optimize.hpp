#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace corrfbm {

struct Minimum2D {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

// Nelder-Mead on a clamped 2-D box, seeded near (x0, y0). The objectives here
// are smooth, so a plain simplex with box clamping is enough.
template <class F>
Minimum2D nelder_mead_2d(F&& f, double x_lo, double x_hi, double y_lo, double y_hi,
                         double x0, double y0, int max_iter = 600) {
    auto cx = [&](double x) { return std::min(x_hi, std::max(x_lo, x)); };
    auto cy = [&](double y) { return std::min(y_hi, std::max(y_lo, y)); };
    auto eval = [&](double x, double y) { return f(cx(x), cy(y)); };

    const double step_x = 0.01 * (x_hi - x_lo);
    const double step_y = 0.01 * (y_hi - y_lo);
    struct Vertex { double x, y, v; };
    std::array<Vertex, 3> sp{Vertex{x0, y0, eval(x0, y0)},
                             Vertex{cx(x0 - step_x), y0, eval(x0 - step_x, y0)},
                             Vertex{x0, cy(y0 - step_y), eval(x0, y0 - step_y)}};
    for (int iter = 0; iter < max_iter; ++iter) {
        std::sort(sp.begin(), sp.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
        if (std::abs(sp[2].v - sp[0].v) < 1e-12 * (1.0 + std::abs(sp[0].v)) &&
            std::abs(sp[2].x - sp[0].x) + std::abs(sp[2].y - sp[0].y) < 1e-12)
            break;
        const double cx0 = 0.5 * (sp[0].x + sp[1].x);
        const double cy0 = 0.5 * (sp[0].y + sp[1].y);
        const double rx = cx(cx0 + (cx0 - sp[2].x));
        const double ry = cy(cy0 + (cy0 - sp[2].y));
        const double rv = eval(rx, ry);
        if (rv < sp[0].v) {
            const double ex = cx(cx0 + 2.0 * (cx0 - sp[2].x));
            const double ey = cy(cy0 + 2.0 * (cy0 - sp[2].y));
            const double ev = eval(ex, ey);
            sp[2] = ev < rv ? Vertex{ex, ey, ev} : Vertex{rx, ry, rv};
        } else if (rv < sp[1].v) {
            sp[2] = Vertex{rx, ry, rv};
        } else {
            const double kx = cx(cx0 + 0.5 * (sp[2].x - cx0));
            const double ky = cy(cy0 + 0.5 * (sp[2].y - cy0));
            const double kv = eval(kx, ky);
            if (kv < sp[2].v) {
                sp[2] = Vertex{kx, ky, kv};
            } else {
                for (int i = 1; i < 3; ++i) {
                    sp[i].x = cx(0.5 * (sp[i].x + sp[0].x));
                    sp[i].y = cy(0.5 * (sp[i].y + sp[0].y));
                    sp[i].v = eval(sp[i].x, sp[i].y);
                }
            }
        }
    }
    std::sort(sp.begin(), sp.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    return {sp[0].x, sp[0].y, sp[0].v};
}

} // namespace corrfbm
