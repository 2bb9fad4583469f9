// Copyright 2025 The tgq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tgq/expr.h"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

namespace tgq {

cplx Value::scalar() const {
    if (isMatrix) throw ExprError("expected a scalar, got a matrix");
    return s;
}

double Value::real() const {
    cplx v = scalar();
    return v.real();
}

Mat2 Value::matrix() const {
    if (!isMatrix) return s * Mat2::Identity();
    return m;
}

struct Expr::Node {
    enum Kind { Num, Var, Call, Neg, Bin } kind;
    cplx num = 0;
    std::string name;
    char op = 0;  // + - * / ^ =
    std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;

class Parser {
   public:
    explicit Parser(const std::string &t) : t_(t) {}

    NodeP parse() {
        NodeP e = comparison();
        skip();
        if (p_ != t_.size()) fail("trailing input");
        return e;
    }

   private:
    const std::string &t_;
    size_t p_ = 0;

    [[noreturn]] void fail(const std::string &msg) {
        throw ExprError(msg + " at position " + std::to_string(p_) + " in '" + t_ + "'");
    }
    void skip() {
        while (p_ < t_.size() && std::isspace((unsigned char)t_[p_])) p_++;
    }
    bool eat(const char *s) {
        skip();
        size_t k = std::char_traits<char>::length(s);
        if (t_.compare(p_, k, s) == 0) {
            p_ += k;
            return true;
        }
        return false;
    }
    static NodeP bin(char op, NodeP a, NodeP b) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Bin;
        n->op = op;
        n->kids = {std::move(a), std::move(b)};
        return n;
    }

    NodeP comparison() {
        NodeP a = additive();
        if (eat("==")) a = bin('=', a, additive());
        return a;
    }
    NodeP additive() {
        NodeP a = multiplicative();
        while (true) {
            skip();
            if (p_ < t_.size() && (t_[p_] == '+' || t_[p_] == '-')) {
                char op = t_[p_++];
                a = bin(op, a, multiplicative());
            } else {
                return a;
            }
        }
    }
    NodeP multiplicative() {
        NodeP a = unary();
        while (true) {
            skip();
            if (p_ < t_.size() && (t_[p_] == '*' || t_[p_] == '/')) {
                char op = t_[p_++];
                a = bin(op, a, unary());
            } else {
                return a;
            }
        }
    }
    NodeP unary() {
        if (eat("-")) {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Node::Neg;
            n->kids = {unary()};
            return n;
        }
        if (eat("+")) return unary();
        return power();
    }
    NodeP power() {
        NodeP a = atom();
        if (eat("^")) a = bin('^', a, unary());
        return a;
    }
    NodeP atom() {
        skip();
        if (p_ >= t_.size()) fail("unexpected end");
        char c = t_[p_];
        if (c == '(') {
            p_++;
            NodeP e = comparison();
            if (!eat(")")) fail("expected ')'");
            return e;
        }
        if (std::isdigit((unsigned char)c) || c == '.') {
            const char *begin = t_.c_str() + p_;
            char *end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            p_ += end - begin;
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Node::Num;
            n->num = v;
            return n;
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t s = p_;
            while (p_ < t_.size() && (std::isalnum((unsigned char)t_[p_]) || t_[p_] == '_')) p_++;
            auto n = std::make_shared<Expr::Node>();
            n->name = t_.substr(s, p_ - s);
            if (p_ < t_.size() && t_[p_] == '(') {
                p_++;
                n->kind = Expr::Node::Call;
                if (!eat(")")) {
                    do {
                        n->kids.push_back(comparison());
                    } while (eat(","));
                    if (!eat(")")) fail("expected ')' after arguments");
                }
            } else {
                n->kind = Expr::Node::Var;
            }
            return n;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

cplx safe_sqrt(cplx z) {
    if (z.imag() == 0 && z.real() < 0 && z.real() > -1e-12) return 0;
    if (z.imag() == 0 && z.real() >= 0) return std::sqrt(z.real());
    // -x - 0i would land on the lower branch
    if (z.imag() == 0) return cplx(0, std::sqrt(-z.real()));
    return std::sqrt(z);
}

Mat2 mat_pow(const Mat2 &m, cplx e) {
    double k = e.real();
    if (e.imag() != 0 || k != std::round(k)) throw ExprError("matrix power needs an integer exponent");
    Mat2 base = k < 0 ? Mat2(m.inverse()) : m;
    Mat2 r = Mat2::Identity();
    for (long i = 0; i < std::labs((long)k); i++) r = r * base;
    return r;
}

cplx scalar_pow(cplx a, cplx b) {
    if (b.imag() == 0 && b.real() == std::round(b.real()) && std::abs(b.real()) < 64) {
        long k = (long)b.real();
        cplx r = 1;
        for (long i = 0; i < std::labs(k); i++) r *= a;
        return k < 0 ? 1.0 / r : r;
    }
    if (a.imag() == 0 && a.real() >= 0 && b.imag() == 0) return std::pow(a.real(), b.real());
    return std::pow(a, b);
}

Value constant(const std::string &name, bool *found) {
    *found = true;
    if (name == "i") return cplx(0, 1);
    if (name == "pi") return kPi;
    static const char *gates[] = {"I", "X", "Y", "Z", "H", "S", "F", "Phi", "Phistar",
                                  "Xh", "Yh", "Zh", "Hh", "Sh"};
    for (const char *g : gates) {
        if (name == g) return named_gate(name);
    }
    *found = false;
    return {};
}

Value call(const std::string &f, const std::vector<Value> &a) {
    auto arity = [&](size_t k) {
        if (a.size() != k) throw ExprError(f + " expects " + std::to_string(k) + " arguments");
    };
    using CF = std::function<cplx(cplx)>;
    static const std::map<std::string, CF> unary = {
        {"sqrt", safe_sqrt},
        {"exp", [](cplx z) { return std::exp(z); }},
        {"cos", [](cplx z) { return z.imag() == 0 ? cplx(std::cos(z.real())) : std::cos(z); }},
        {"sin", [](cplx z) { return z.imag() == 0 ? cplx(std::sin(z.real())) : std::sin(z); }},
        {"tan", [](cplx z) { return z.imag() == 0 ? cplx(std::tan(z.real())) : std::tan(z); }},
        {"atan", [](cplx z) { return z.imag() == 0 ? cplx(std::atan(z.real())) : std::atan(z); }},
        {"acos", [](cplx z) { return z.imag() == 0 && std::abs(z.real()) <= 1 ? cplx(std::acos(z.real())) : std::acos(z); }},
        {"asin", [](cplx z) { return z.imag() == 0 && std::abs(z.real()) <= 1 ? cplx(std::asin(z.real())) : std::asin(z); }},
        {"abs", [](cplx z) { return cplx(std::abs(z)); }},
        {"re", [](cplx z) { return cplx(z.real()); }},
        {"im", [](cplx z) { return cplx(z.imag()); }},
    };
    auto it = unary.find(f);
    if (it != unary.end()) {
        arity(1);
        return it->second(a[0].scalar());
    }
    if (f == "conj") {
        arity(1);
        if (a[0].isMatrix) return Mat2(a[0].m.conjugate());
        return std::conj(a[0].s);
    }
    if (f == "adj") {
        arity(1);
        if (a[0].isMatrix) return Mat2(a[0].m.adjoint());
        return std::conj(a[0].s);
    }
    if (f == "Z") { arity(1); return gate_z(a[0].real()); }
    if (f == "Y" || f == "Ry") { arity(1); return gate_ry(a[0].real()); }
    if (f == "Rx") { arity(1); return gate_rx(a[0].real()); }
    if (f == "R") {
        arity(2);
        double p = a[0].real(), q = a[1].real();
        if (p != std::round(p) || q != std::round(q)) throw ExprError("R(p,q) needs integers");
        return gate_r((int)p, (int)q);
    }
    throw ExprError("unknown function: " + f);
}

Value eval_node(const Expr::Node &n, const Env &env) {
    switch (n.kind) {
        case Expr::Node::Num:
            return n.num;
        case Expr::Node::Var: {
            auto it = env.find(n.name);
            if (it != env.end()) return it->second;
            bool found;
            Value v = constant(n.name, &found);
            if (!found) throw ExprError("unknown name: " + n.name);
            return v;
        }
        case Expr::Node::Call: {
            std::vector<Value> args;
            for (const auto &k : n.kids) args.push_back(eval_node(*k, env));
            return call(n.name, args);
        }
        case Expr::Node::Neg: {
            Value v = eval_node(*n.kids[0], env);
            if (v.isMatrix) return Mat2(-v.m);
            return -v.s;
        }
        case Expr::Node::Bin:
            break;
    }
    Value a = eval_node(*n.kids[0], env);
    Value b = eval_node(*n.kids[1], env);
    switch (n.op) {
        case '+':
        case '-': {
            if (a.isMatrix != b.isMatrix) throw ExprError("cannot add a scalar and a matrix");
            double sg = n.op == '+' ? 1 : -1;
            if (a.isMatrix) return Mat2(a.m + sg * b.m);
            return a.s + sg * b.s;
        }
        case '*':
            if (a.isMatrix && b.isMatrix) return Mat2(a.m * b.m);
            if (a.isMatrix) return Mat2(a.m * b.s);
            if (b.isMatrix) return Mat2(a.s * b.m);
            return a.s * b.s;
        case '/':
            if (b.isMatrix) throw ExprError("cannot divide by a matrix");
            if (a.isMatrix) return Mat2(a.m / b.s);
            return a.s / b.s;
        case '^':
            if (b.isMatrix) throw ExprError("matrix exponent");
            if (a.isMatrix) return mat_pow(a.m, b.s);
            return scalar_pow(a.s, b.s);
        case '=': {
            if (a.isMatrix || b.isMatrix) throw ExprError("== on matrices");
            return std::abs(a.s - b.s) < 1e-12 ? 1.0 : 0.0;
        }
    }
    throw ExprError("bad operator");
}

}  // namespace

Expr::Expr(const std::string &text) : text_(text) {
    Parser p(text_);
    root_ = p.parse();
}

Value Expr::eval(const Env &env) const {
    if (!root_) throw ExprError("empty expression");
    return eval_node(*root_, env);
}

Value eval_expr(const std::string &text, const Env &env) { return Expr(text).eval(env); }

cplx eval_scalar(const std::string &text, const Env &env) { return eval_expr(text, env).scalar(); }

double eval_real(const std::string &text, const Env &env, double imagTol) {
    cplx v = eval_scalar(text, env);
    if (std::abs(v.imag()) > imagTol) throw ExprError("expected a real value from '" + text + "'");
    return v.real();
}

Mat2 eval_matrix(const std::string &text, const Env &env) { return eval_expr(text, env).matrix(); }

}  // namespace tgq
