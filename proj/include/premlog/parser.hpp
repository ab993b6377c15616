// Copyright 2026 The Premlog Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "premlog/ast.hpp"

namespace premlog {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(col) +
                             ": " + msg),
          line_(line),
          col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

/// Parses a program in the rule dialect:
///   rules        head(...) <- lit, ..., lit.
///   aggregates   min<D>, max<D>, count<X>, cmin<Id>, cmax<L> in head args
///   negation     !p(X, Y)
///   builtins     V = Dxz + Dzy, C < V, J1 <= 3, ...
///   facts        arc(a, b, 1).
///   query        ?- num(9, N).
///   directives   .decl arc(sym, sym, int >= 0)   .foreign f(A+, B-)
///                .config K = 3
Program parseProgram(std::string_view text);

/// Parses a single relational atom with optional constants, e.g. "num(9, N)".
Atom parseQueryAtom(std::string_view text);

} // namespace premlog
