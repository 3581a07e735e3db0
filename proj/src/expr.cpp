#include "stoplab/expr.hpp"

#include <cmath>
#include <stdexcept>

#include "stoplab/errors.hpp"

namespace stoplab {

Expr Expr::poly(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Poly;
    n->coeffs = std::move(coeffs);
    return Expr(n);
}

Expr Expr::exp(Expr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exp;
    n->children.push_back(arg.node_);
    return Expr(n);
}
Expr Expr::tanh(Expr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Tanh;
    n->children.push_back(arg.node_);
    return Expr(n);
}
Expr Expr::sqrt(Expr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sqrt;
    n->children.push_back(arg.node_);
    return Expr(n);
}
Expr Expr::sum(std::vector<Expr> terms) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    for (auto& t : terms) n->children.push_back(t.node_);
    return Expr(n);
}
Expr Expr::prod(std::vector<Expr> terms) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Prod;
    for (auto& t : terms) n->children.push_back(t.node_);
    return Expr(n);
}
Expr Expr::scale(double factor, Expr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Scale;
    n->factor = factor;
    n->children.push_back(arg.node_);
    return Expr(n);
}

double Expr::operator()(double x) const { return eval_node(*node_, x); }

Jet Expr::jet(double x, std::size_t order) const { return jet_node(*node_, x, order); }

Expr Expr::reflected() const { return Expr(reflect_node(*node_)); }

double Expr::eval_node(const Node& n, double x) {
    switch (n.kind) {
        case Kind::Poly: {
            double v = 0.0;
            for (std::size_t k = n.coeffs.size(); k-- > 0;) v = v * x + n.coeffs[k];
            return v;
        }
        case Kind::Exp: return std::exp(eval_node(*n.children[0], x));
        case Kind::Tanh: return std::tanh(eval_node(*n.children[0], x));
        case Kind::Sqrt: return std::sqrt(eval_node(*n.children[0], x));
        case Kind::Sum: {
            double v = 0.0;
            for (auto& c : n.children) v += eval_node(*c, x);
            return v;
        }
        case Kind::Prod: {
            double v = 1.0;
            for (auto& c : n.children) v *= eval_node(*c, x);
            return v;
        }
        case Kind::Scale: return n.factor * eval_node(*n.children[0], x);
    }
    return 0.0;
}

Jet Expr::jet_node(const Node& n, double x, std::size_t order) {
    switch (n.kind) {
        case Kind::Poly: {
            Jet v = Jet::constant(0.0, order);
            Jet xj = Jet::variable(x, order);
            for (std::size_t k = n.coeffs.size(); k-- > 0;) {
                v = v * xj;
                v.coeff_ref(0) += n.coeffs[k];
            }
            return v;
        }
        case Kind::Exp: return stoplab::exp(jet_node(*n.children[0], x, order));
        case Kind::Tanh: return stoplab::tanh(jet_node(*n.children[0], x, order));
        case Kind::Sqrt: return stoplab::sqrt(jet_node(*n.children[0], x, order));
        case Kind::Sum: {
            Jet v = Jet::constant(0.0, order);
            for (auto& c : n.children) v = v + jet_node(*c, x, order);
            return v;
        }
        case Kind::Prod: {
            Jet v = Jet::constant(1.0, order);
            for (auto& c : n.children) v = v * jet_node(*c, x, order);
            return v;
        }
        case Kind::Scale: return n.factor * jet_node(*n.children[0], x, order);
    }
    return Jet::constant(0.0, order);
}

std::shared_ptr<const Expr::Node> Expr::reflect_node(const Node& n) {
    auto r = std::make_shared<Node>();
    r->kind = n.kind;
    r->factor = n.factor;
    if (n.kind == Kind::Poly) {
        r->coeffs = n.coeffs;
        for (std::size_t k = 1; k < r->coeffs.size(); k += 2) r->coeffs[k] = -r->coeffs[k];
        return r;
    }
    for (auto& c : n.children) r->children.push_back(reflect_node(*c));
    return r;
}

nlohmann::json Expr::to_json() const { return node_to_json(*node_); }

nlohmann::json Expr::node_to_json(const Node& n) {
    nlohmann::json j;
    switch (n.kind) {
        case Kind::Poly:
            j["kind"] = "poly";
            j["coeffs"] = n.coeffs;
            break;
        case Kind::Exp:
            j["kind"] = "exp";
            j["arg"] = node_to_json(*n.children[0]);
            break;
        case Kind::Tanh:
            j["kind"] = "tanh";
            j["arg"] = node_to_json(*n.children[0]);
            break;
        case Kind::Sqrt:
            j["kind"] = "sqrt";
            j["arg"] = node_to_json(*n.children[0]);
            break;
        case Kind::Sum:
        case Kind::Prod: {
            j["kind"] = n.kind == Kind::Sum ? "sum" : "prod";
            nlohmann::json terms = nlohmann::json::array();
            for (auto& c : n.children) terms.push_back(node_to_json(*c));
            j["terms"] = terms;
            break;
        }
        case Kind::Scale:
            j["kind"] = "scale";
            j["factor"] = n.factor;
            j["arg"] = node_to_json(*n.children[0]);
            break;
    }
    return j;
}

Expr Expr::from_json(const nlohmann::json& j) { return Expr(node_from_json(j)); }

std::shared_ptr<const Expr::Node> Expr::node_from_json(const nlohmann::json& j) {
    if (j.is_number()) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Poly;
        n->coeffs = {j.get<double>()};
        return n;
    }
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("expression node must be a number or an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    auto n = std::make_shared<Node>();
    if (kind == "poly") {
        n->kind = Kind::Poly;
        n->coeffs = j.at("coeffs").get<std::vector<double>>();
        if (n->coeffs.empty()) n->coeffs.push_back(0.0);
    } else if (kind == "exp" || kind == "tanh" || kind == "sqrt") {
        n->kind = kind == "exp" ? Kind::Exp : kind == "tanh" ? Kind::Tanh : Kind::Sqrt;
        n->children.push_back(node_from_json(j.at("arg")));
    } else if (kind == "sum" || kind == "prod") {
        n->kind = kind == "sum" ? Kind::Sum : Kind::Prod;
        for (auto& t : j.at("terms")) n->children.push_back(node_from_json(t));
        if (n->children.empty()) throw ConfigError("'" + kind + "' needs at least one term");
    } else if (kind == "scale") {
        n->kind = Kind::Scale;
        n->factor = j.at("factor").get<double>();
        n->children.push_back(node_from_json(j.at("arg")));
    } else {
        throw ConfigError("unknown expression kind '" + kind + "'");
    }
    return n;
}

}  // namespace stoplab
