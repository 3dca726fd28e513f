#include "usd/ensemble.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "usd/error.hpp"
#include "usd/numerics.hpp"

namespace usd {

namespace {

constexpr const char *kModule = "ensemble";

[[noreturn]] void parse_error(const std::string &message) {
    throw Error(ErrorCode::ParseError, kModule, message);
}

double as_real(const nlohmann::json &value, const std::string &where) {
    if (!value.is_number()) parse_error(where + " must be a number");
    const double x = value.get<double>();
    if (!std::isfinite(x)) parse_error(where + " is not finite");
    return x;
}

Complex as_complex(const nlohmann::json &value, const std::string &where) {
    if (!value.is_array() || value.size() != 2) {
        parse_error(where + " must be a [re, im] pair");
    }
    return {as_real(value[0], where + "[0]"), as_real(value[1], where + "[1]")};
}

} // namespace

Ensemble make_ensemble(const ComplexMatrix &states, const RealVector &priors, const Tolerances &tol) {
    const Eigen::Index n = states.cols();
    const Eigen::Index d = states.rows();
    if (n < 2) {
        throw Error(ErrorCode::ParseError, kModule, "at least two states are required, got " + std::to_string(n));
    }
    if (priors.size() != n) {
        throw Error(ErrorCode::ParseError, kModule,
                    "expected " + std::to_string(n) + " priors, got " + std::to_string(priors.size()));
    }
    if (!all_finite(states)) {
        throw Error(ErrorCode::InvalidState, kModule, "state amplitudes must be finite");
    }

    Ensemble e;
    e.dim = d;
    e.states = states;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double norm = e.states.col(j).norm();
        if (std::abs(norm - 1.0) > tol.renormalize) {
            throw Error(ErrorCode::InvalidState, kModule,
                        "state " + std::to_string(j + 1) + " has norm " + std::to_string(norm));
        }
        e.states.col(j) /= norm;
        for (Eigen::Index i = 0; i < d; ++i) {
            const double mag = std::abs(e.states(i, j));
            if (mag > 1e-12) {
                e.states.col(j) *= std::conj(e.states(i, j)) / mag;
                e.states(i, j) = Complex(e.states(i, j).real(), 0.0);
                break;
            }
        }
    }

    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(priors(i)) || priors(i) < 0.0) {
            throw Error(ErrorCode::InvalidPriors, kModule,
                        "prior " + std::to_string(i + 1) + " must be finite and non-negative");
        }
        total += priors(i);
    }
    if (std::abs(total - 1.0) > tol.priors) {
        throw Error(ErrorCode::InvalidPriors, kModule, "priors sum to " + std::to_string(total));
    }
    e.priors = priors;

    if (d < n) {
        throw Error(ErrorCode::LinearlyDependent, kModule,
                    std::to_string(n) + " states cannot be independent in dimension " + std::to_string(d));
    }
    const double min_eig = hermitian_min_eigenvalue(gram_matrix(e.states), 1e-8);
    if (min_eig <= tol.independence) {
        std::ostringstream msg;
        msg << "Gram matrix min eigenvalue " << min_eig << " is not above " << tol.independence;
        throw Error(ErrorCode::LinearlyDependent, kModule, msg.str());
    }
    return e;
}

ComplexVector polarization_state(std::string_view label) {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    ComplexVector v(2);
    if (label == "0") {
        v << 1.0, 0.0;
    } else if (label == "1") {
        v << 0.0, 1.0;
    } else if (label == "d+") {
        v << h, h;
    } else if (label == "d-") {
        v << h, -h;
    } else if (label == "c+") {
        v << h, i * h;
    } else if (label == "c-") {
        v << h, -i * h;
    } else {
        throw Error(ErrorCode::ParseError, kModule, "unknown polarization label '" + std::string(label) + "'");
    }
    return v;
}

ComplexVector build_product_state(const std::vector<ComplexVector> &factors) {
    if (factors.empty()) {
        throw Error(ErrorCode::InvalidInput, kModule, "product state needs at least one factor");
    }
    ComplexVector out = factors.front();
    for (std::size_t f = 1; f < factors.size(); ++f) {
        const ComplexVector &rhs = factors[f];
        ComplexVector next(out.size() * rhs.size());
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            next.segment(i * rhs.size(), rhs.size()) = out(i) * rhs;
        }
        out = std::move(next);
    }
    return out;
}

Ensemble load_ensemble(const nlohmann::json &doc, const Tolerances &tol) {
    if (!doc.is_object()) parse_error("document must be an object");
    if (!doc.contains("dimension") || !doc["dimension"].is_number_integer()) {
        parse_error("'dimension' must be an integer");
    }
    const long long dim = doc["dimension"].get<long long>();
    if (dim < 1) parse_error("'dimension' must be positive");

    std::vector<ComplexVector> columns;
    if (doc.contains("states")) {
        const auto &states = doc["states"];
        if (!states.is_array()) parse_error("'states' must be an array");
        for (std::size_t j = 0; j < states.size(); ++j) {
            const std::string where = "states[" + std::to_string(j) + "]";
            if (!states[j].is_array() || static_cast<long long>(states[j].size()) != dim) {
                parse_error(where + " must have " + std::to_string(dim) + " amplitudes");
            }
            ComplexVector v(dim);
            for (long long i = 0; i < dim; ++i) {
                v(i) = as_complex(states[j][static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
            }
            columns.push_back(std::move(v));
        }
    }
    if (doc.contains("product_states")) {
        const auto &products = doc["product_states"];
        if (!products.is_array()) parse_error("'product_states' must be an array");
        for (std::size_t j = 0; j < products.size(); ++j) {
            const std::string where = "product_states[" + std::to_string(j) + "]";
            if (!products[j].is_array()) parse_error(where + " must be an array of labels");
            std::vector<ComplexVector> factors;
            for (const auto &label : products[j]) {
                if (!label.is_string()) parse_error(where + " labels must be strings");
                factors.push_back(polarization_state(label.get<std::string>()));
            }
            if (factors.empty()) parse_error(where + " is empty");
            ComplexVector v = build_product_state(factors);
            if (v.size() != dim) {
                parse_error(where + " has dimension " + std::to_string(v.size()) + ", expected " +
                            std::to_string(dim));
            }
            columns.push_back(std::move(v));
        }
    }
    if (!doc.contains("states") && !doc.contains("product_states")) {
        parse_error("one of 'states' or 'product_states' is required");
    }

    if (!doc.contains("priors") || !doc["priors"].is_array()) parse_error("'priors' must be an array");
    const auto &pj = doc["priors"];
    RealVector priors(static_cast<Eigen::Index>(pj.size()));
    for (std::size_t i = 0; i < pj.size(); ++i) {
        priors(static_cast<Eigen::Index>(i)) = as_real(pj[i], "priors[" + std::to_string(i) + "]");
    }

    ComplexMatrix states(dim, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) states.col(static_cast<Eigen::Index>(j)) = columns[j];
    return make_ensemble(states, priors, tol);
}

Ensemble load_ensemble_text(const std::string &text, const Tolerances &tol) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &ex) {
        parse_error(std::string("malformed JSON: ") + ex.what());
    }
    return load_ensemble(doc, tol);
}

Ensemble load_ensemble_file(const std::filesystem::path &path, const Tolerances &tol) {
    std::ifstream in(path);
    if (!in) parse_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_ensemble_text(buf.str(), tol);
}

nlohmann::json ensemble_to_json(const Ensemble &e) {
    nlohmann::json states = nlohmann::json::array();
    for (Eigen::Index j = 0; j < e.size(); ++j) {
        nlohmann::json col = nlohmann::json::array();
        for (Eigen::Index i = 0; i < e.dim; ++i) col.push_back({e.states(i, j).real(), e.states(i, j).imag()});
        states.push_back(std::move(col));
    }
    return {{"dimension", e.dim}, {"states", states},
            {"priors", std::vector<double>(e.priors.data(), e.priors.data() + e.priors.size())}};
}

} // namespace usd
