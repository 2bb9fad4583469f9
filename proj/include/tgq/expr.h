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

#ifndef TGQ_EXPR_H
#define TGQ_EXPR_H

#include <map>
#include <memory>
#include <string>

#include "tgq/core.h"

namespace tgq {

/// A scalar or a 2x2 matrix.
struct Value {
    bool isMatrix = false;
    cplx s = 0;
    Mat2 m = Mat2::Zero();

    Value() = default;
    Value(cplx v) : s(v) {}
    Value(double v) : s(v) {}
    Value(const Mat2 &v) : isMatrix(true), m(v) {}

    cplx scalar() const;
    double real() const;
    Mat2 matrix() const;
};

using Env = std::map<std::string, Value>;

struct ExprError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Small arithmetic language over complex scalars and 2x2 matrices.
///   + - * / ^ unary -, a == b (1 or 0), parentheses
///   constants: i pi, gates I X Y Z H S F Phi Phistar Xh Yh Zh Hh Sh
///   functions: sqrt exp cos sin tan atan acos asin abs re im conj adj,
///              Z(theta) Y(theta) Ry Rx R(p,q)
class Expr {
   public:
    Expr() = default;
    explicit Expr(const std::string &text);
    Value eval(const Env &env) const;
    const std::string &text() const { return text_; }

    struct Node;

   private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

Value eval_expr(const std::string &text, const Env &env = {});
cplx eval_scalar(const std::string &text, const Env &env = {});
double eval_real(const std::string &text, const Env &env = {}, double imagTol = 1e-9);
Mat2 eval_matrix(const std::string &text, const Env &env = {});

}  // namespace tgq

#endif
