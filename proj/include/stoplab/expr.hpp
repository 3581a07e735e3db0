#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "stoplab/jet.hpp"

namespace stoplab {

// Coefficient functions are trees over a small closed grammar
// (polynomials, exp, tanh, sqrt, sums, products, scalar multiples) so that
// exact derivatives of any order are available through jet evaluation.
class Expr {
public:
    Expr() : Expr(constant(0.0)) {}

    static Expr poly(std::vector<double> coeffs);
    static Expr constant(double c) { return poly({c}); }
    static Expr exp(Expr arg);
    static Expr tanh(Expr arg);
    static Expr sqrt(Expr arg);
    static Expr sum(std::vector<Expr> terms);
    static Expr prod(std::vector<Expr> terms);
    static Expr scale(double factor, Expr arg);

    double operator()(double x) const;
    Jet jet(double x, std::size_t order) const;

    // The tree of x |-> (*this)(-x).
    Expr reflected() const;

    nlohmann::json to_json() const;
    static Expr from_json(const nlohmann::json& j);

private:
    enum class Kind { Poly, Exp, Tanh, Sqrt, Sum, Prod, Scale };

    struct Node {
        Kind kind;
        std::vector<double> coeffs;        // Poly
        double factor = 1.0;               // Scale
        std::vector<std::shared_ptr<const Node>> children;
    };

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static double eval_node(const Node& n, double x);
    static Jet jet_node(const Node& n, double x, std::size_t order);
    static std::shared_ptr<const Node> reflect_node(const Node& n);
    static nlohmann::json node_to_json(const Node& n);
    static std::shared_ptr<const Node> node_from_json(const nlohmann::json& j);

    std::shared_ptr<const Node> node_;
};

}  // namespace stoplab
