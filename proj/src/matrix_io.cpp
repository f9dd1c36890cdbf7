#include "wrflow/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "wrflow/report.hpp"

namespace wrflow {

MatrixKind parse_kind(const std::string& s) {
    if (s == "psd") return MatrixKind::Psd;
    if (s == "projection") return MatrixKind::Projection;
    if (s == "symmetric") return MatrixKind::Symmetric;
    throw ParseError("unknown matrix kind '" + s + "'");
}

std::string kind_name(MatrixKind k) {
    switch (k) {
        case MatrixKind::Psd: return "psd";
        case MatrixKind::Projection: return "projection";
        case MatrixKind::Symmetric: return "symmetric";
    }
    return "?";
}

namespace {

void validate_kind(const SymmetricMatrix& m, MatrixKind kind, const std::string& origin) {
    switch (kind) {
        case MatrixKind::Symmetric:
            return;
        case MatrixKind::Psd: {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat(),
                                                              Eigen::EigenvaluesOnly);
            const double lmin = m.dim() > 0 ? es.eigenvalues()(0) : 0.0;
            const double lmax = m.dim() > 0
                ? es.eigenvalues()(m.dim() - 1) : 0.0;
            if (lmin < -kClipTol * (1.0 + std::max(lmax, 0.0))) {
                std::ostringstream os;
                os << origin << ": violates psd invariant (eigenvalues >= 0): "
                   << "eigenvalue " << lmin;
                throw ValidationError(os.str());
            }
            return;
        }
        case MatrixKind::Projection: {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat(),
                                                              Eigen::EigenvaluesOnly);
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
                const double l = es.eigenvalues()(i);
                if (std::abs(l) > 1e-10 && std::abs(l - 1.0) > 1e-10) {
                    std::ostringstream os;
                    os << origin
                       << ": violates projection invariant (spectrum in {0,1}): "
                       << "eigenvalue " << l;
                    throw ValidationError(os.str());
                }
            }
            return;
        }
    }
}

} // namespace

SymmetricMatrix parse_matrix_text(const std::string& text, const std::string& origin) {
    std::istringstream is(text);
    std::string line;
    int dim = -1;
    std::string kind_str;
    std::vector<double> entries;
    bool have_entries = false;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto sep = line.find('=');
        if (sep == std::string::npos) {
            throw ParseError(origin + ": malformed line " + std::to_string(lineno));
        }
        std::istringstream key_s(line.substr(0, sep));
        std::string key;
        key_s >> key;
        std::istringstream val(line.substr(sep + 1));
        if (key == "dim") {
            if (!(val >> dim) || dim <= 0) {
                throw ParseError(origin + ": bad dim on line " + std::to_string(lineno));
            }
        } else if (key == "kind") {
            val >> kind_str;
        } else if (key == "entries") {
            double x;
            while (val >> x) entries.push_back(x);
            have_entries = true;
        } else {
            throw ParseError(origin + ": unknown key '" + key + "'");
        }
    }
    if (dim <= 0) throw ParseError(origin + ": missing dim");
    if (kind_str.empty()) throw ParseError(origin + ": missing kind");
    if (!have_entries) throw ParseError(origin + ": missing entries");
    const MatrixKind kind = parse_kind(kind_str);
    if (entries.size() != static_cast<size_t>(dim) * static_cast<size_t>(dim)) {
        std::ostringstream os;
        os << origin << ": expected " << dim * dim << " entries, got " << entries.size();
        throw ParseError(os.str());
    }
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            m(i, j) = entries[static_cast<size_t>(i) * dim + j];
        }
    }
    SymmetricMatrix sym(m);
    validate_kind(sym, kind, origin);
    return sym;
}

SymmetricMatrix parse_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_matrix_text(os.str(), path);
}

void write_matrix_file(const std::string& path, const SymmetricMatrix& m, MatrixKind kind) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open matrix file for writing: " + path);
    out << "dim = " << m.dim() << "\n";
    out << "kind = " << kind_name(kind) << "\n";
    out << "entries =";
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            out << " " << format_real(m.mat()(i, j));
        }
    }
    out << "\n";
    if (!out) throw IoError("write failed: " + path);
}

Projection resolve_projection(const std::string& spec, int dim) {
    if (spec == "zero") return Projection::zero(dim);
    if (spec == "identity") return Projection::identity(dim);
    if (spec.rfind("span:", 0) == 0) {
        std::vector<Eigen::VectorXd> vectors;
        std::istringstream vs(spec.substr(5));
        std::string vec_str;
        while (std::getline(vs, vec_str, ';')) {
            std::vector<double> comps;
            std::istringstream cs(vec_str);
            std::string comp;
            while (std::getline(cs, comp, ',')) {
                try {
                    comps.push_back(std::stod(comp));
                } catch (const std::exception&) {
                    throw ParseError("span spec: bad component '" + comp + "'");
                }
            }
            if (static_cast<int>(comps.size()) != dim) {
                std::ostringstream os;
                os << "span spec: vector has " << comps.size()
                   << " components, expected " << dim;
                throw ValidationError(os.str());
            }
            Eigen::VectorXd v(dim);
            for (int i = 0; i < dim; ++i) v(i) = comps[static_cast<size_t>(i)];
            vectors.push_back(v);
        }
        return proj_from_span(dim, vectors);
    }
    SymmetricMatrix m = parse_matrix_file(spec);
    if (m.dim() != dim) {
        std::ostringstream os;
        os << "projection file " << spec << " has dim " << m.dim() << ", expected " << dim;
        throw ValidationError(os.str());
    }
    return Projection(m);
}

} // namespace wrflow
