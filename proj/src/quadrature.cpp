#include "qfq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace qfq {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
const double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

const double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

const double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = wgk[7] * fc;
    double gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        kron += wgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
    }
    kron *= h;
    gauss *= h;
    Panel p;
    p.a = a;
    p.b = b;
    p.value = kron;
    p.error = std::abs(kron - gauss);
    return p;
}

}  // namespace

QuadResult integrate_segments(const std::function<double(double)>& f,
                              const std::vector<double>& points, const QuadSettings& q) {
    std::priority_queue<Panel> heap;
    double value = 0.0, error = 0.0;
    double frozen_error = 0.0;  // panels already at the resolution limit
    for (size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i] < points[i + 1])) continue;
        Panel p = gk15(f, points[i], points[i + 1]);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    auto tol = [&]() { return std::max(q.abs_tol, q.rel_tol * std::abs(value)); };
    int splits = 0;
    while (error + frozen_error > tol()) {
        if (heap.empty() || splits >= q.max_subdiv)
            throw QuadratureError("adaptive quadrature: subdivision limit reached",
                                  error + frozen_error, tol());
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            error -= worst.error;
            frozen_error += worst.error;
            continue;
        }
        Panel l = gk15(f, worst.a, mid);
        Panel r = gk15(f, mid, worst.b);
        value += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    QuadResult res;
    res.value = value;
    res.error = error + frozen_error;
    res.subdivisions = splits;
    return res;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadSettings& q) {
    return integrate_segments(f, {a, b}, q);
}

}  // namespace qfq
