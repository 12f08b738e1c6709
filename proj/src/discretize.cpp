#include "hyw/discretize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "hyw/error.hpp"

namespace hyw {

std::size_t Grids::n_total() const {
    std::size_t total = 1;
    for (const auto& axis : n) {
        total *= axis.size();
    }
    return total;
}

NVector Grids::n_point(std::size_t idx) const {
    NVector out(n.size());
    for (std::size_t d = n.size(); d-- > 0;) {
        const std::size_t m = n[d].size();
        out[d] = n[d].points[idx % m];
        idx /= m;
    }
    return out;
}

double Grids::n_cell_weight(std::size_t idx) const {
    double w = 1.0;
    for (std::size_t d = n.size(); d-- > 0;) {
        const std::size_t m = n[d].size();
        w *= n[d].weights[idx % m];
        idx /= m;
    }
    return w;
}

Grids make_grids(const GroupExtensionModel& model, std::size_t n_points_N, std::size_t n_points_H,
                 const GridExtents& extents) {
    if (n_points_N < 8 || n_points_H < 8) {
        throw InputError("make_grids: need at least 8 points per axis");
    }
    if (!(extents.n_hi > extents.n_lo) || !(extents.h_hi > extents.h_lo)) {
        throw InputError("make_grids: empty extents");
    }
    Grids g;
    g.extents = extents;
    g.n.assign(static_cast<std::size_t>(model.dim_N), Grid1D::midpoint(extents.n_lo, extents.n_hi, n_points_N));
    g.h = Grid1D::midpoint(extents.h_lo, extents.h_hi, n_points_H);
    return g;
}

Grids refine(const GroupExtensionModel& model, const Grids& grids) {
    return make_grids(model, 2 * grids.n.front().size(), 2 * grids.h.size(), grids.extents);
}

void TestFunctionSpec::validate(int dim_N) const {
    const auto dim = static_cast<std::size_t>(dim_N);
    switch (kind) {
        case TestFunctionKind::gaussian:
        case TestFunctionKind::bump:
            if (width.size() != dim || (!center.empty() && center.size() != dim) ||
                (!frequency.empty() && frequency.size() != dim)) {
                throw InputError("TestFunctionSpec: parameter dimension does not match dim_N");
            }
            for (double w : width) {
                if (!(w > 0.0)) {
                    throw InputError("TestFunctionSpec: widths must be positive");
                }
            }
            if (!(t_width > 0.0)) {
                throw InputError("TestFunctionSpec: widths must be positive");
            }
            break;
        case TestFunctionKind::random_bandlimited:
            if (components == 0 || !(width_range.lo > 0.0) || width_range.hi < width_range.lo ||
                !(t_width_range.lo > 0.0) || t_width_range.hi < t_width_range.lo) {
                throw InputError("TestFunctionSpec: invalid random ranges");
            }
            if (!frequency_abs_range.empty() && frequency_abs_range.size() != dim) {
                throw InputError("TestFunctionSpec: frequency ranges do not match dim_N");
            }
            break;
    }
}

TestFunctionSpec gaussian_spec(const NVector& width, double t_width, NVector frequency) {
    TestFunctionSpec s;
    s.kind = TestFunctionKind::gaussian;
    s.center.assign(width.size(), 0.0);
    s.width = width;
    s.t_width = t_width;
    s.frequency = frequency.empty() ? NVector(width.size(), 0.0) : std::move(frequency);
    return s;
}

TestFunctionSpec random_spec(const GroupExtensionModel& model, std::uint64_t seed) {
    TestFunctionSpec s;
    s.kind = TestFunctionKind::random_bandlimited;
    s.seed = seed;
    s.components = 3;
    if (model.name == "heisenberg") {
        s.center_radius = 1.5;
        s.t_center_radius = 0.8;
        s.width_range = {0.7, 1.0};
        s.t_width_range = {0.4, 0.5};
        // Keep the z-modulation away from zero so little mass sits near lambda = 0.
        s.frequency_abs_range = {{0.0, 0.5}, {0.6, 1.0}};
    } else {
        s.center_radius = 1.5;
        s.t_center_radius = 0.8;
        s.width_range = {0.5, 1.0};
        s.t_width_range = {0.3, 0.45};
        s.frequency_abs_range.assign(static_cast<std::size_t>(model.dim_N), Range{0.0, 0.8});
    }
    return s;
}

namespace {

// Portable uniform draw in [0, 1): the standard distributions are implementation-defined.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, Range r) { return r.lo + (r.hi - r.lo) * uniform01(rng); }

double bump1(double r) {
    const double r2 = r * r;
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

struct Component {
    NVector center;
    NVector width;
    NVector frequency;
    double t_center = 0.0;
    double t_width = 1.0;
    std::complex<double> amplitude{1.0, 0.0};
};

std::vector<Component> components_of(const TestFunctionSpec& spec, std::size_t dim) {
    std::vector<Component> out;
    if (spec.kind != TestFunctionKind::random_bandlimited) {
        Component c;
        c.center = spec.center.empty() ? NVector(dim, 0.0) : spec.center;
        c.width = spec.width;
        c.frequency = spec.frequency.empty() ? NVector(dim, 0.0) : spec.frequency;
        c.t_center = spec.t_center;
        c.t_width = spec.t_width;
        out.push_back(std::move(c));
        return out;
    }
    std::mt19937_64 rng(spec.seed);
    for (std::size_t k = 0; k < spec.components; ++k) {
        Component c;
        c.center.resize(dim);
        c.width.resize(dim);
        c.frequency.resize(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            c.center[d] = uniform(rng, {-spec.center_radius, spec.center_radius});
            c.width[d] = uniform(rng, spec.width_range);
            const Range fr = spec.frequency_abs_range.empty() ? Range{} : spec.frequency_abs_range[d];
            const double mag = uniform(rng, fr);
            c.frequency[d] = uniform01(rng) < 0.5 ? -mag : mag;
        }
        c.t_center = uniform(rng, {-spec.t_center_radius, spec.t_center_radius});
        c.t_width = uniform(rng, spec.t_width_range);
        const double modulus = uniform(rng, {0.5, 1.0});
        const double phase = 2.0 * std::numbers::pi * uniform01(rng);
        c.amplitude = std::polar(modulus, phase);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

void SampledFunction::validate() const {
    if (static_cast<std::size_t>(values.rows()) != grids.n_total() ||
        static_cast<std::size_t>(values.cols()) != grids.h.size()) {
        throw InputError("SampledFunction: value shape does not match grids");
    }
    if (!values.allFinite()) {
        throw InputError("SampledFunction: non-finite sample values");
    }
}

SampledFunction sample(const TestFunctionSpec& spec, const Grids& grids, const GroupExtensionModel& model) {
    spec.validate(model.dim_N);
    const auto dim = static_cast<std::size_t>(model.dim_N);
    if (grids.n.size() != dim) {
        throw InputError("sample: grids do not match the model");
    }
    const std::vector<Component> comps = components_of(spec, dim);
    const bool bump = spec.kind == TestFunctionKind::bump;

    SampledFunction g;
    g.model = model;
    g.grids = grids;
    const std::size_t nn = grids.n_total();
    const std::size_t nh = grids.h.size();
    g.values = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(nn), static_cast<Eigen::Index>(nh));

    for (const Component& c : comps) {
        std::vector<double> tprof(nh);
        for (std::size_t j = 0; j < nh; ++j) {
            const double r = (grids.h.points[j] - c.t_center) / c.t_width;
            tprof[j] = bump ? bump1(r) : std::exp(-0.5 * r * r);
        }
        for (std::size_t i = 0; i < nn; ++i) {
            const NVector n = grids.n_point(i);
            double env = 1.0;
            double phase = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double r = (n[d] - c.center[d]) / c.width[d];
                env *= bump ? bump1(r) : std::exp(-0.5 * r * r);
                phase += c.frequency[d] * n[d];
            }
            if (env == 0.0) {
                continue;
            }
            const std::complex<double> nval = c.amplitude * std::polar(env, 2.0 * std::numbers::pi * phase);
            for (std::size_t j = 0; j < nh; ++j) {
                g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += nval * tprof[j];
            }
        }
    }

    // Haar L1 mass in the outermost layer of every axis.
    const auto layer = [](std::size_t m) { return std::max<std::size_t>(1, m / 32); };
    double total = 0.0;
    double edge = 0.0;
    for (std::size_t j = 0; j < nh; ++j) {
        const double wh = grids.h.weights[j] * model.modular_on_H(model.h_from_coordinate(grids.h.points[j]));
        const bool h_edge = j < layer(nh) || j >= nh - layer(nh);
        for (std::size_t i = 0; i < nn; ++i) {
            const double m = std::abs(g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) *
                             grids.n_cell_weight(i) * wh;
            total += m;
            bool is_edge = h_edge;
            std::size_t idx = i;
            for (std::size_t d = dim; d-- > 0 && !is_edge;) {
                const std::size_t md = grids.n[d].size();
                const std::size_t k = idx % md;
                idx /= md;
                is_edge = k < layer(md) || k >= md - layer(md);
            }
            if (is_edge) {
                edge += m;
            }
        }
    }
    g.truncation_mass = total > 0.0 ? edge / total : 0.0;
    return g;
}

double lp_norm_G(const SampledFunction& g, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InputError("lp_norm_G: need finite p >= 1");
    }
    g.validate();
    double acc = 0.0;
    const std::size_t nn = g.grids.n_total();
    for (std::size_t j = 0; j < g.grids.h.size(); ++j) {
        const double wh = g.grids.h.weights[j] * g.model.modular_on_H(g.model.h_from_coordinate(g.grids.h.points[j]));
        double col = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            const double a = std::abs(g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            if (a != 0.0) {
                col += std::pow(a, p) * g.grids.n_cell_weight(i);
            }
        }
        acc += col * wh;
    }
    return std::pow(acc, 1.0 / p);
}

double lp_norm_slice(const SampledFunction& g, std::size_t h_index, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InputError("lp_norm_slice: need finite p >= 1");
    }
    if (h_index >= g.grids.h.size()) {
        throw InputError("lp_norm_slice: h index out of range");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < g.grids.n_total(); ++i) {
        const double a = std::abs(g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(h_index)));
        if (a != 0.0) {
            acc += std::pow(a, p) * g.grids.n_cell_weight(i);
        }
    }
    return std::pow(acc, 1.0 / p);
}

SampledFunction scaled(const SampledFunction& g, std::complex<double> c) {
    SampledFunction out = g;
    out.values *= c;
    return out;
}

namespace {

// Bytes are emitted least significant first by shifting, which is host-independent.
std::uint64_t to_little_endian_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

double from_little_endian_bits(std::uint64_t bits) { return std::bit_cast<double>(bits); }

}  // namespace

void write_array_file(const std::filesystem::path& path, const ArrayFile& file) {
    std::size_t count = 1;
    for (std::size_t d : file.dims) {
        count *= d;
    }
    if (file.dims.empty() || count != file.data.size()) {
        throw InputError("write_array_file: dims do not match data length");
    }
    std::ostringstream header;
    header << "HYW1 ";
    for (std::size_t i = 0; i < file.dims.size(); ++i) {
        header << (i ? "x" : "") << file.dims[i];
    }
    header << ' ';
    if (file.extents.empty()) {
        header << '-';
    }
    header.precision(17);
    for (std::size_t i = 0; i < file.extents.size(); ++i) {
        header << (i ? "," : "") << file.extents[i].first << ':' << file.extents[i].second;
    }
    header << ' ' << file.seed << '\n';

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("write_array_file: cannot open " + path.string());
    }
    const std::string h = header.str();
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    for (double v : file.data) {
        const std::uint64_t bits = to_little_endian_bits(v);
        char bytes[8];
        for (int b = 0; b < 8; ++b) {
            bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
        }
        out.write(bytes, 8);
    }
    if (!out) {
        throw InputError("write_array_file: write failed for " + path.string());
    }
}

ArrayFile read_array_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("read_array_file: cannot open " + path.string());
    }
    std::string line;
    std::getline(in, line);
    std::istringstream hs(line);
    std::string magic;
    std::string dims;
    std::string extents;
    ArrayFile f;
    if (!(hs >> magic >> dims >> extents >> f.seed) || magic != "HYW1") {
        throw InputError("read_array_file: bad header in " + path.string());
    }
    std::size_t count = 1;
    {
        std::istringstream ds(dims);
        std::string tok;
        while (std::getline(ds, tok, 'x')) {
            f.dims.push_back(std::stoul(tok));
            count *= f.dims.back();
        }
    }
    if (extents != "-") {
        std::istringstream es(extents);
        std::string tok;
        while (std::getline(es, tok, ',')) {
            const auto colon = tok.find(':', 1);
            if (colon == std::string::npos) {
                throw InputError("read_array_file: bad extent '" + tok + "'");
            }
            f.extents.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
        }
    }
    f.data.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        unsigned char bytes[8];
        if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
            throw InputError("read_array_file: truncated data in " + path.string());
        }
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b) {
            bits = (bits << 8) | bytes[b];
        }
        f.data[i] = from_little_endian_bits(bits);
    }
    return f;
}

ArrayFile to_array_file(const SampledFunction& g, std::uint64_t seed) {
    g.validate();
    ArrayFile f;
    f.seed = seed;
    for (const auto& axis : g.grids.n) {
        f.dims.push_back(axis.size());
        f.extents.emplace_back(g.grids.extents.n_lo, g.grids.extents.n_hi);
    }
    f.dims.push_back(g.grids.h.size());
    f.extents.emplace_back(g.grids.extents.h_lo, g.grids.extents.h_hi);
    f.dims.push_back(2);
    const std::size_t nn = g.grids.n_total();
    const std::size_t nh = g.grids.h.size();
    f.data.reserve(nn * nh * 2);
    for (std::size_t i = 0; i < nn; ++i) {
        for (std::size_t j = 0; j < nh; ++j) {
            const auto z = g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            f.data.push_back(z.real());
            f.data.push_back(z.imag());
        }
    }
    return f;
}

std::uint64_t checksum(const SampledFunction& g) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    const ArrayFile f = to_array_file(g, 0);
    for (double v : f.data) {
        const std::uint64_t bits = to_little_endian_bits(v);
        for (int b = 0; b < 8; ++b) {
            hash ^= (bits >> (8 * b)) & 0xffu;
            hash *= 0x100000001b3ull;
        }
    }
    return hash;
}

}  // namespace hyw
