#include "plmaps/svg.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "plmaps/errors.hpp"

namespace plm::svg {

namespace {

constexpr long kScale = 1'000'000;
constexpr long kMargin = 40'000;

// Nearest integer on the fixed grid; exact rational rounding.
long grid(const Rat& v) { return (v * Rat(kScale) + Rat(1, 2)).floor().to_long(); }

long px(const Rat& x) { return kMargin + grid(x); }
long py(const Rat& y) { return kMargin + kScale - grid(y); }

void header(std::ostream& out) {
    long side = kScale + 2 * kMargin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << side << " " << side
        << "\">\n";
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kScale
        << "\" height=\"" << kScale
        << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1200\"/>\n";
}

Rat parse_decimal(const std::string& s, int lineno) {
    std::size_t dot = s.find('.');
    try {
        if (dot == std::string::npos) return Rat(Int(s), Int(1));
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        Int den;
        mpz_ui_pow_ui(den.raw(), 10, static_cast<unsigned long>(s.size() - dot - 1));
        return Rat(Int(digits), den);
    } catch (const ParseError&) {
        throw ParseError("bad decimal '" + s + "'", lineno, 1);
    }
}

}  // namespace

void plot_map(std::ostream& out, const PLMap& f,
              const std::optional<perturb::PerturbCertificate>& cert) {
    header(out);
    if (cert) {
        for (int k = 0; k <= cert->band_count; k++) {
            long y = py(Rat(k) * cert->band_width);
            out << "<line x1=\"" << kMargin << "\" y1=\"" << y << "\" x2=\"" << kMargin + kScale
                << "\" y2=\"" << y
                << "\" stroke=\"#4466bb\" stroke-width=\"600\" stroke-dasharray=\"4000 6000\"/>\n";
        }
        for (const auto& w : cert->windows) {
            long x = px(w.lo);
            out << "<line x1=\"" << x << "\" y1=\"" << kMargin << "\" x2=\"" << x << "\" y2=\""
                << kMargin + kScale
                << "\" stroke=\"#999999\" stroke-width=\"400\" stroke-dasharray=\"2000 8000\"/>\n";
        }
    }
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"900\" points=\"";
    for (std::size_t i = 0; i < f.xs().size(); i++) {
        if (i) out << " ";
        out << px(f.xs()[i]) << "," << py(f.ys()[i]);
    }
    out << "\"/>\n</svg>\n";
}

std::vector<ProfilePoint> read_profile_csv(std::istream& in) {
    std::vector<ProfilePoint> points;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("i,", 0) == 0) continue;  // header
        std::istringstream ss(line);
        std::string i_s, n_s, h_s;
        if (!std::getline(ss, i_s, ',') || !std::getline(ss, n_s, ',') ||
            !std::getline(ss, h_s, ','))
            throw ParseError("expected i,n,h columns", lineno, 1);
        if (i_s == "truncated") continue;
        ProfilePoint p;
        try {
            p.i = std::stoi(i_s);
            p.n = std::stoi(n_s);
        } catch (const std::exception&) {
            throw ParseError("bad row indices", lineno, 1);
        }
        p.h = parse_decimal(h_s, lineno);
        points.push_back(std::move(p));
    }
    return points;
}

void plot_profile(std::ostream& out, const std::vector<ProfilePoint>& points) {
    header(out);
    if (points.empty()) {
        out << "</svg>\n";
        return;
    }
    int n_min = points[0].n, n_max = points[0].n;
    Rat h_max(0);
    std::vector<int> levels;
    for (const auto& p : points) {
        n_min = std::min(n_min, p.n);
        n_max = std::max(n_max, p.n);
        h_max = max(h_max, p.h);
        if (std::find(levels.begin(), levels.end(), p.i) == levels.end()) levels.push_back(p.i);
    }
    std::sort(levels.begin(), levels.end());
    if (h_max.sign() <= 0) h_max = Rat(1);
    int span = std::max(1, n_max - n_min);

    auto chart_x = [&](int n) {
        return kMargin + static_cast<long>((static_cast<long long>(n - n_min) * kScale) / span);
    };
    auto chart_y = [&](const Rat& h) {
        return kMargin + kScale - (h / h_max * Rat(kScale)).floor().to_long();
    };

    static const char* palette[] = {"#000000", "#bb3333", "#3366bb", "#338844",
                                    "#aa7700", "#7744aa", "#116677", "#884422"};
    for (std::size_t li = 0; li < levels.size(); li++) {
        int level = levels[li];
        out << "<polyline fill=\"none\" stroke=\"" << palette[li % 8]
            << "\" stroke-width=\"900\" points=\"";
        bool first = true;
        for (const auto& p : points) {
            if (p.i != level) continue;
            if (!first) out << " ";
            first = false;
            out << chart_x(p.n) << "," << chart_y(p.h);
        }
        out << "\"/>\n";
        out << "<text x=\"" << kMargin + kScale + 4000 << "\" y=\""
            << kMargin + 30000 + 34000 * static_cast<long>(li) << "\" font-size=\"28000\" fill=\""
            << palette[li % 8] << "\">i=" << level << "</text>\n";
    }
    out << "<text x=\"" << kMargin << "\" y=\"" << kMargin - 8000
        << "\" font-size=\"28000\">h, top = " << h_max.str() << "</text>\n";
    out << "</svg>\n";
}

}  // namespace plm::svg
