// Copyright 2026 The genesyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reference_dsl.hpp"

#include <algorithm>
#include <stdexcept>

namespace reference {
namespace {

__extension__ typedef __int128 Wide;

Int clamp(Wide x) {
  const Wide lo = INT64_MIN;
  const Wide hi = INT64_MAX;
  return static_cast<Int>(x < lo ? lo : (x > hi ? hi : x));
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

// Text between the first '(' and the last ')'.
std::string inner(const std::string& name) {
  auto open = name.find('(');
  return name.substr(open + 1, name.size() - open - 2);
}

bool holds(const std::string& pred, Int x) {
  if (pred == ">0") return x > 0;
  if (pred == "<0") return x < 0;
  if (pred == "odd") return x % 2 == 1 || x % 2 == -1;
  if (pred == "even") return x % 2 == 0;
  throw std::logic_error("predicate " + pred);
}

Int unary(const std::string& f, Int x) {
  Wide w = x;
  if (f == "+1") return clamp(w + 1);
  if (f == "-1") return clamp(w - 1);
  if (f == "*2") return clamp(w * 2);
  if (f == "*3") return clamp(w * 3);
  if (f == "*4") return clamp(w * 4);
  if (f == "/2") return x / 2;
  if (f == "/3") return x / 3;
  if (f == "/4") return x / 4;
  if (f == "*(-1)") return clamp(-w);
  if (f == "^2") return clamp(w * w);
  throw std::logic_error("map " + f);
}

Int binary(const std::string& f, Int a, Int b) {
  if (f == "+") return clamp(Wide(a) + b);
  if (f == "-") return clamp(Wide(a) - b);
  if (f == "*") return clamp(Wide(a) * b);
  if (f == "min") return a < b ? a : b;
  if (f == "max") return a > b ? a : b;
  throw std::logic_error("binary " + f);
}

const List& L(const Value& v) { return std::get<List>(v); }
Int I(const Value& v) { return std::get<Int>(v); }

}  // namespace

Value apply(const std::string& name, const std::vector<Value>& a) {
  // [] -> int
  if (name == "HEAD") return L(a[0]).empty() ? 0 : L(a[0]).front();
  if (name == "LAST") return L(a[0]).empty() ? 0 : L(a[0]).back();
  if (name == "MINIMUM") {
    if (L(a[0]).empty()) return Int{0};
    Int m = L(a[0])[0];
    for (Int x : L(a[0])) if (x < m) m = x;
    return m;
  }
  if (name == "MAXIMUM") {
    if (L(a[0]).empty()) return Int{0};
    Int m = L(a[0])[0];
    for (Int x : L(a[0])) if (x > m) m = x;
    return m;
  }
  if (name == "SUM") {
    Int s = 0;
    for (Int x : L(a[0])) s = clamp(Wide(s) + x);
    return s;
  }
  if (starts_with(name, "COUNT(")) {
    Int n = 0;
    for (Int x : L(a[0])) n += holds(inner(name), x);
    return n;
  }
  // [] -> []
  if (name == "REVERSE") return List(L(a[0]).rbegin(), L(a[0]).rend());
  if (name == "SORT") {
    List out = L(a[0]);
    std::sort(out.begin(), out.end());
    return out;
  }
  if (starts_with(name, "MAP(")) {
    List out;
    for (Int x : L(a[0])) out.push_back(unary(inner(name), x));
    return out;
  }
  if (starts_with(name, "FILTER(")) {
    List out;
    for (Int x : L(a[0])) if (holds(inner(name), x)) out.push_back(x);
    return out;
  }
  if (starts_with(name, "SCANL1(")) {
    List out;
    const List& in = L(a[0]);
    for (std::size_t n = 0; n < in.size(); ++n)
      out.push_back(n == 0 ? in[0] : binary(inner(name), in[n], out[n - 1]));
    return out;
  }
  // int, [] -> []
  if (name == "TAKE") {
    Int n = I(a[0]);
    const List& in = L(a[1]);
    List out;
    for (Int i = 0; i < n && i < static_cast<Int>(in.size()); ++i) out.push_back(in[i]);
    return out;
  }
  if (name == "DROP") {
    Int n = I(a[0]);
    const List& in = L(a[1]);
    List out;
    for (Int i = 0; i < static_cast<Int>(in.size()); ++i)
      if (i >= n) out.push_back(in[i]);
    return out;
  }
  if (name == "DELETE") {
    List out;
    for (Int x : L(a[1])) if (x != I(a[0])) out.push_back(x);
    return out;
  }
  if (name == "INSERT") {
    List out = L(a[1]);
    out.push_back(I(a[0]));
    return out;
  }
  // [], [] -> []
  if (starts_with(name, "ZIPWITH(")) {
    const List& x = L(a[0]);
    const List& y = L(a[1]);
    List out;
    for (std::size_t n = 0; n < x.size() && n < y.size(); ++n)
      out.push_back(binary(inner(name), x[n], y[n]));
    return out;
  }
  // int, [] -> int
  if (name == "ACCESS") {
    Int n = I(a[0]);
    const List& in = L(a[1]);
    if (n < 0 || n >= static_cast<Int>(in.size())) return Int{0};
    return in[static_cast<std::size_t>(n)];
  }
  if (name == "SEARCH") {
    const List& in = L(a[1]);
    for (std::size_t i = 0; i < in.size(); ++i)
      if (in[i] == I(a[0])) return static_cast<Int>(i);
    return Int{-1};
  }
  throw std::logic_error("unknown op " + name);
}

namespace {

// Parameter kinds by name: 'i' for int, 'l' for list.
std::string params(const std::string& name) {
  for (const char* f : {"TAKE", "DROP", "DELETE", "INSERT", "ACCESS", "SEARCH"})
    if (name == f) return "il";
  if (starts_with(name, "ZIPWITH(")) return "ll";
  return "l";
}

}  // namespace

Value run(const std::vector<std::string>& names, const List& input) {
  std::vector<Value> results;
  for (const auto& name : names) {
    std::vector<bool> used(results.size(), false);
    std::vector<Value> args;
    for (char p : params(name)) {
      bool want_list = p == 'l';
      bool got = false;
      for (std::size_t k = results.size(); k-- > 0;) {
        if (used[k] || std::holds_alternative<List>(results[k]) != want_list) continue;
        used[k] = true;
        args.push_back(results[k]);
        got = true;
        break;
      }
      if (!got) args.push_back(want_list ? Value(input) : Value(Int{0}));
    }
    results.push_back(reference::apply(name, args));
  }
  return results.back();
}

}  // namespace reference
